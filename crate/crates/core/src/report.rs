//! Per-law residual reports shared by the structure checkers.

use serde::{Deserialize, Serialize};

/// One checked equation: its stable name, residual and verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawCheck {
    pub law: String,
    pub residual: f64,
    pub pass: bool,
}

impl LawCheck {
    pub fn new(law: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self { law: law.into(), residual, pass: residual <= tol }
    }

    pub fn with_verdict(law: impl Into<String>, residual: f64, pass: bool) -> Self {
        Self { law: law.into(), residual, pass }
    }
}

/// An ordered list of law checks; serializes as a JSON array of
/// `{"law", "residual", "pass"}` objects.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LawReport {
    pub laws: Vec<LawCheck>,
}

impl LawReport {
    pub fn push(&mut self, check: LawCheck) {
        self.laws.push(check);
    }

    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.pass)
    }

    pub fn get(&self, law: &str) -> Option<&LawCheck> {
        self.laws.iter().find(|l| l.law == law)
    }

    pub fn max_residual(&self) -> f64 {
        self.laws.iter().map(|l| l.residual).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawCheck> {
        self.laws.iter().filter(|l| !l.pass)
    }
}
