use num_complex::Complex64 as C64;

use super::ast::{DiagramTerm, Generator, Node, Span};
use super::DslError;
use crate::clock::QuantumClock;
use crate::dynamics::DynamicalSystem;
use crate::frobenius::cup_cap;
use crate::process::Process;
use crate::tensor::{EqualityMode, EqualityReport, Tensor};

pub type Profile = (Vec<usize>, Vec<usize>);

fn generator_profile(g: &Generator, omega: usize, sys: Option<&[usize]>, span: Span) -> Result<Profile, DslError> {
    let w = omega;
    let system = || sys.map(<[usize]>::to_vec).ok_or(DslError::UnboundSystem { line: span.line, col: span.col });
    Ok(match g {
        Generator::ZMult | Generator::XMult => (vec![w, w], vec![w]),
        Generator::ZComult | Generator::XComult => (vec![w], vec![w, w]),
        Generator::ZUnit | Generator::XUnit | Generator::TState(_) | Generator::EState(_) => (vec![], vec![w]),
        Generator::ZCounit | Generator::XCounit => (vec![w], vec![]),
        Generator::Antipode => (vec![w], vec![w]),
        Generator::Id(k) => (vec![w; *k], vec![w; *k]),
        Generator::Swap => (vec![w, w], vec![w, w]),
        Generator::Cup => (vec![], vec![w, w]),
        Generator::Cap => (vec![w, w], vec![]),
        Generator::Scalar(..) => (vec![], vec![]),
        Generator::SysAlg => {
            let h = system()?;
            let mut inp = h.clone();
            inp.push(w);
            (inp, h)
        }
        Generator::SysId => {
            let h = system()?;
            (h.clone(), h)
        }
        Generator::SysKet(_) => (vec![], system()?),
    })
}

/// Wire profile `(inputs, outputs)` of a term over a clock of dimension
/// `omega`, with `sys` the dimensions of the bound system if any.
pub fn infer_profile_with(t: &DiagramTerm, omega: usize, sys: Option<&[usize]>) -> Result<Profile, DslError> {
    match &t.node {
        Node::Gen(g) => generator_profile(g, omega, sys, t.span),
        Node::Dag(a) => {
            let (i, o) = infer_profile_with(a, omega, sys)?;
            Ok((o, i))
        }
        Node::Par(a, b) => {
            let (ai, ao) = infer_profile_with(a, omega, sys)?;
            let (bi, bo) = infer_profile_with(b, omega, sys)?;
            Ok(([ai, bi].concat(), [ao, bo].concat()))
        }
        Node::Seq(a, b) => {
            let (ai, ao) = infer_profile_with(a, omega, sys)?;
            let (bi, bo) = infer_profile_with(b, omega, sys)?;
            if ao != bi {
                return Err(DslError::ProfileMismatch { line: t.span.line, col: t.span.col, expected: bi, found: ao });
            }
            Ok((ai, bo))
        }
    }
}

/// Wire profile of a term that does not mention a bound system.
pub fn infer_profile(t: &DiagramTerm, omega: usize) -> Result<Profile, DslError> {
    infer_profile_with(t, omega, None)
}

fn generator_process(g: &Generator, c: &QuantumClock, sys: Option<&DynamicalSystem>, span: Span) -> Result<Process, DslError> {
    let group = c.group();
    let (z, x) = (group.zdot(), group.xdot());
    let w = c.omega();
    let bound = || sys.ok_or(DslError::UnboundSystem { line: span.line, col: span.col });
    Ok(match g {
        Generator::ZMult => z.mult_process(),
        Generator::ZUnit => z.unit_process(),
        Generator::ZComult => z.comult_process(),
        Generator::ZCounit => z.counit_process(),
        Generator::XMult => x.mult_process(),
        Generator::XUnit => x.unit_process(),
        Generator::XComult => x.comult_process(),
        Generator::XCounit => x.counit_process(),
        Generator::Antipode => Process::from_tensor(group.antipode().clone()),
        Generator::Id(k) => Process::identity(vec![w; *k]),
        Generator::Swap => Process::swap(vec![w], vec![w]),
        Generator::Cup => Process::from_tensor(cup_cap(z).0),
        Generator::Cap => Process::from_tensor(cup_cap(z).1),
        Generator::TState(n) => Process::from_tensor(c.time_state(*n)),
        Generator::EState(m) => Process::from_tensor(c.energy_state(*m)),
        Generator::Scalar(re, im) => Process::from_tensor(Tensor::scalar(C64::new(*re, *im))),
        Generator::SysAlg => Process::from_tensor(bound()?.algebra()),
        Generator::SysId => Process::identity(bound()?.system_dims().to_vec()),
        Generator::SysKet(k) => {
            let s = bound()?;
            let d = s.system_dim();
            if *k >= d {
                return Err(DslError::SyntaxError {
                    line: span.line,
                    col: span.col,
                    message: format!("sysket({k}) outside a {d}-dimensional system"),
                });
            }
            let mut e = vec![C64::new(0.0, 0.0); d];
            e[*k] = C64::new(1.0, 0.0);
            Process::from_tensor(Tensor::new(vec![], s.system_dims().to_vec(), e).expect("consistent dims"))
        }
    })
}

/// Lazy diagram for a well-typed term; checks profiles first.
pub fn to_process(t: &DiagramTerm, c: &QuantumClock, sys: Option<&DynamicalSystem>) -> Result<Process, DslError> {
    if let Some(s) = sys {
        if s.clock().as_ref() != c {
            return Err(DslError::ClockMismatch);
        }
    }
    infer_profile_with(t, c.omega(), sys.map(DynamicalSystem::system_dims))?;
    build(t, c, sys)
}

fn build(t: &DiagramTerm, c: &QuantumClock, sys: Option<&DynamicalSystem>) -> Result<Process, DslError> {
    Ok(match &t.node {
        Node::Gen(g) => generator_process(g, c, sys, t.span)?,
        Node::Dag(a) => build(a, c, sys)?.dagger(),
        Node::Par(a, b) => build(a, c, sys)?.par(build(b, c, sys)?),
        Node::Seq(a, b) => build(a, c, sys)?.then(build(b, c, sys)?).expect("profiles checked"),
    })
}

/// Dense tensor of a term over a clock, with an optional bound system.
pub fn evaluate(t: &DiagramTerm, c: &QuantumClock, sys: Option<&DynamicalSystem>) -> Result<Tensor, DslError> {
    Ok(to_process(t, c, sys)?.evaluate())
}

/// Compares two terms without materializing either side.
pub fn compare_terms(
    lhs: &DiagramTerm,
    rhs: &DiagramTerm,
    c: &QuantumClock,
    sys: Option<&DynamicalSystem>,
    tol: f64,
    mode: EqualityMode,
) -> Result<EqualityReport, DslError> {
    let dims = sys.map(DynamicalSystem::system_dims);
    let lp = infer_profile_with(lhs, c.omega(), dims)?;
    let rp = infer_profile_with(rhs, c.omega(), dims)?;
    if lp != rp {
        let (expected, found) = if lp.0 != rp.0 { (lp.0, rp.0) } else { (lp.1, rp.1) };
        return Err(DslError::ProfileMismatch { line: rhs.span.line, col: rhs.span.col, expected, found });
    }
    let l = to_process(lhs, c, sys)?;
    let r = to_process(rhs, c, sys)?;
    Ok(l.compare(&r, tol, mode).expect("profiles checked"))
}
