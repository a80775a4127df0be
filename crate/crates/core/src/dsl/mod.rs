//! A term language for string diagrams over a quantum clock.
//!
//! Terms are built from the clock's generators with `;` (sequential
//! composition in diagram order: `a ; b` runs `a` first), `*` (parallel
//! composition, binding tighter than `;`) and `dag(..)`. Both sides of an
//! equation are evaluated numerically and compared, which decides diagram
//! equality at a fixed clock size.
//!
//! ```text
//! frobenius-x-left : (id(1) * xcomult) ; (xmult * id(1)) == xmult ; xcomult
//! quasi-special-x  : xcomult ; xmult == id(1) [scalar]
//! ```

use thiserror::Error;

pub mod ast;
pub mod corpus;
pub mod eval;
pub mod parser;

pub use ast::{DiagramTerm, Generator, Node, Span};
pub use corpus::{
    check_equation, default_system, negative_controls, paper_corpus, parse_corpus, run_paper_suite, run_suite,
    EquationCase,
};
pub use eval::{compare_terms, evaluate, infer_profile, infer_profile_with, to_process, Profile};
pub use parser::{parse, parse_at};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("syntax error at {line}:{col}: {message}")]
    SyntaxError { line: usize, col: usize, message: String },

    #[error("unknown generator `{name}` at {line}:{col}")]
    UnknownGenerator { name: String, line: usize, col: usize },

    #[error("profile mismatch at {line}:{col}: expected wires {expected:?}, found {found:?}")]
    ProfileMismatch { line: usize, col: usize, expected: Vec<usize>, found: Vec<usize> },

    #[error("system generator used at {line}:{col} without a bound system")]
    UnboundSystem { line: usize, col: usize },

    #[error("bound system runs on a different clock")]
    ClockMismatch,
}
