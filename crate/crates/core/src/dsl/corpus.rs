use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::ast::DiagramTerm;
use super::eval::compare_terms;
use super::parser::parse_at;
use super::DslError;
use crate::clock::QuantumClock;
use crate::dynamics::{DynamicalSystem, Level};
use crate::tensor::{EqualityMode, EqualityReport, Tensor};

const PAPER: &str = include_str!("../../corpus/paper.qd");
const NEGATIVE: &str = include_str!("../../corpus/negative.qd");

/// One equation between two diagram terms.
#[derive(Clone, Debug, PartialEq)]
pub struct EquationCase {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub mode: EqualityMode,
    pub anchor: String,
    /// Source position of each side, for error reporting.
    pub line: usize,
    pub lhs_col: usize,
    pub rhs_col: usize,
}

impl EquationCase {
    /// A case built in code rather than read from a file.
    pub fn new(name: &str, lhs: &str, rhs: &str, mode: EqualityMode) -> Self {
        Self {
            name: name.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            mode,
            anchor: String::new(),
            line: 1,
            lhs_col: 1,
            rhs_col: 1,
        }
    }

    pub fn parse_lhs(&self) -> Result<DiagramTerm, DslError> {
        parse_at(&self.lhs, self.line, self.lhs_col)
    }

    pub fn parse_rhs(&self) -> Result<DiagramTerm, DslError> {
        parse_at(&self.rhs, self.line, self.rhs_col)
    }
}

fn column(line: &str, part: &str) -> usize {
    let offset = part.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

/// Parses `.qd` source: one `name : lhs == rhs [scalar]` per line, `#`
/// comments, and `#@ label` lines that set the anchor of the cases below.
pub fn parse_corpus(src: &str) -> Result<Vec<EquationCase>, DslError> {
    let mut anchor = String::new();
    let mut cases = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(label) = trimmed.strip_prefix("#@") {
            anchor = label.trim().to_string();
            continue;
        }
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let syntax = |message: &str| DslError::SyntaxError { line, col: 1, message: message.to_string() };
        let (name, eq) = body.split_once(':').ok_or_else(|| syntax("expected `name : lhs == rhs`"))?;
        let (lhs, rhs) = eq.split_once("==").ok_or_else(|| syntax("expected `==`"))?;
        let mut rhs = rhs.trim();
        let mut mode = EqualityMode::Strict;
        if let Some(stripped) = rhs.strip_suffix("[scalar]") {
            rhs = stripped.trim_end();
            mode = EqualityMode::UpToGlobalScalar;
        }
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(syntax("case names must be a single non-empty word"));
        }
        let lhs = lhs.trim();
        let case = EquationCase {
            name: name.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            mode,
            anchor: anchor.clone(),
            line,
            lhs_col: column(raw, lhs),
            rhs_col: column(raw, rhs),
        };
        case.parse_lhs()?;
        case.parse_rhs()?;
        cases.push(case);
    }
    Ok(cases)
}

/// The built-in equation corpus.
pub fn paper_corpus() -> Vec<EquationCase> {
    parse_corpus(PAPER).expect("built-in corpus parses")
}

/// Deliberately false equations used as negative controls.
pub fn negative_controls() -> Vec<EquationCase> {
    parse_corpus(NEGATIVE).expect("built-in negatives parse")
}

/// Two-level system bound to `sysalg` when running the built-in corpus:
/// `|+⟩` at energy index 0 and `|−⟩` at energy index 1.
pub fn default_system(c: &QuantumClock) -> DynamicalSystem {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = Tensor::state(vec![C64::new(h, 0.0), C64::new(h, 0.0)]).expect("two amplitudes");
    let minus = Tensor::state(vec![C64::new(h, 0.0), C64::new(-h, 0.0)]).expect("two amplitudes");
    let levels = [Level { m: 0, basis: vec![plus] }, Level { m: 1, basis: vec![minus] }];
    DynamicalSystem::from_spectrum(Arc::new(c.clone()), &levels).expect("orthonormal complete levels")
}

/// Evaluates both sides of a case and compares them in the case's mode.
pub fn check_equation(
    e: &EquationCase,
    c: &QuantumClock,
    sys: Option<&DynamicalSystem>,
    tol: f64,
) -> Result<EqualityReport, DslError> {
    compare_terms(&e.parse_lhs()?, &e.parse_rhs()?, c, sys, tol, e.mode)
}

/// Runs a list of cases. Cases that fail to typecheck are reported as
/// failures with infinite residual.
pub fn run_suite(
    cases: &[EquationCase],
    c: &QuantumClock,
    sys: Option<&DynamicalSystem>,
    tol: f64,
) -> Vec<(String, EqualityReport)> {
    cases
        .iter()
        .map(|e| {
            let report = check_equation(e, c, sys, tol)
                .unwrap_or(EqualityReport { equal: false, residual: f64::INFINITY, lambda: None });
            (e.name.clone(), report)
        })
        .collect()
}

/// Runs the built-in corpus with [`default_system`] bound.
pub fn run_paper_suite(c: &QuantumClock, tol: f64) -> Vec<(String, EqualityReport)> {
    let sys = default_system(c);
    run_suite(&paper_corpus(), c, Some(&sys), tol)
}
