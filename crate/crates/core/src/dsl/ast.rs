use std::fmt;

/// Source position of a node, 1-based.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    ZMult,
    ZUnit,
    ZComult,
    ZCounit,
    XMult,
    XUnit,
    XComult,
    XCounit,
    Antipode,
    /// Identity on `k` clock wires.
    Id(usize),
    Swap,
    /// Cup and cap of the time observable.
    Cup,
    Cap,
    TState(i64),
    EState(i64),
    Scalar(f64, f64),
    /// The bound system's algebra `H ⊗ G → H`.
    SysAlg,
    SysId,
    /// Basis state `k` of the bound system space.
    SysKet(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Gen(Generator),
    /// `a ; b`: `a` first, then `b`.
    Seq(Box<DiagramTerm>, Box<DiagramTerm>),
    Par(Box<DiagramTerm>, Box<DiagramTerm>),
    Dag(Box<DiagramTerm>),
}

#[derive(Clone, Debug)]
pub struct DiagramTerm {
    pub node: Node,
    pub span: Span,
}

/// Structural equality; spans are ignored.
impl PartialEq for DiagramTerm {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl DiagramTerm {
    pub fn new(node: Node, span: Span) -> Self {
        Self { node, span }
    }

    pub fn gen(g: Generator) -> Self {
        Self::new(Node::Gen(g), Span::default())
    }

    pub fn seq(a: DiagramTerm, b: DiagramTerm) -> Self {
        let span = a.span;
        Self::new(Node::Seq(Box::new(a), Box::new(b)), span)
    }

    pub fn par(a: DiagramTerm, b: DiagramTerm) -> Self {
        let span = a.span;
        Self::new(Node::Par(Box::new(a), Box::new(b)), span)
    }

    pub fn dag(a: DiagramTerm) -> Self {
        let span = a.span;
        Self::new(Node::Dag(Box::new(a)), span)
    }

    /// Whether the term mentions the bound system.
    pub fn uses_system(&self) -> bool {
        match &self.node {
            Node::Gen(g) => matches!(g, Generator::SysAlg | Generator::SysId | Generator::SysKet(_)),
            Node::Seq(a, b) | Node::Par(a, b) => a.uses_system() || b.uses_system(),
            Node::Dag(a) => a.uses_system(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::ZMult => f.write_str("zmult"),
            Generator::ZUnit => f.write_str("zunit"),
            Generator::ZComult => f.write_str("zcomult"),
            Generator::ZCounit => f.write_str("zcounit"),
            Generator::XMult => f.write_str("xmult"),
            Generator::XUnit => f.write_str("xunit"),
            Generator::XComult => f.write_str("xcomult"),
            Generator::XCounit => f.write_str("xcounit"),
            Generator::Antipode => f.write_str("antipode"),
            Generator::Id(k) => write!(f, "id({k})"),
            Generator::Swap => f.write_str("swap"),
            Generator::Cup => f.write_str("cup"),
            Generator::Cap => f.write_str("cap"),
            Generator::TState(n) => write!(f, "tstate({n})"),
            Generator::EState(m) => write!(f, "estate({m})"),
            Generator::Scalar(re, im) => write!(f, "scalar({re}, {im})"),
            Generator::SysAlg => f.write_str("sysalg"),
            Generator::SysId => f.write_str("sysid"),
            Generator::SysKet(k) => write!(f, "sysket({k})"),
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &DiagramTerm, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

/// Minimal parenthesization: `*` binds tighter than `;` and both associate
/// to the left.
impl fmt::Display for DiagramTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Gen(g) => write!(f, "{g}"),
            Node::Dag(a) => write!(f, "dag({a})"),
            Node::Seq(a, b) => {
                write_operand(f, a, false)?;
                f.write_str(" ; ")?;
                write_operand(f, b, matches!(b.node, Node::Seq(..)))
            }
            Node::Par(a, b) => {
                write_operand(f, a, matches!(a.node, Node::Seq(..)))?;
                f.write_str(" * ")?;
                write_operand(f, b, matches!(b.node, Node::Seq(..) | Node::Par(..)))
            }
        }
    }
}
