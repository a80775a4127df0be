//! Projector-valued spectra, Stone reconstruction, ergodic averages and the
//! Weyl exchange relation.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clock::QuantumClock;
use crate::dynamics::DynamicalSystem;
use crate::report::{LawCheck, LawReport};
use crate::tensor::{compose, EqualityMode, Tensor, TensorError};

/// Above this clock size the Weyl residual is computed from the monomial
/// form of the operators instead of dense matrices.
const DENSE_WEYL_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("system is not a unitary representation (residual {residual:e})")]
    InvalidSystem { residual: f64 },

    #[error("invalid projector family: {0}")]
    InvalidFamily(String),

    #[error("state has zero norm")]
    ZeroState,

    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Energy projectors `P_m` indexed by residue, zero for empty levels.
#[derive(Clone, Debug)]
pub struct ProjectorFamily {
    clock: Arc<QuantumClock>,
    sys_dims: Vec<usize>,
    members: Vec<Tensor>,
}

/// One row of a spectrum summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub m: i64,
    pub energy: f64,
    pub rank: usize,
    pub idempotence_residual: f64,
}

fn require_valid(sys: &DynamicalSystem) -> Result<(), SpectraError> {
    let report = sys.representation_report();
    if report.passed() {
        Ok(())
    } else {
        Err(SpectraError::InvalidSystem { residual: report.max_residual() })
    }
}

impl ProjectorFamily {
    /// A family from explicit members indexed by residue `0..ω`. Only the
    /// shape is checked here; see [`ProjectorFamily::check_invariants`].
    pub fn from_members(clock: Arc<QuantumClock>, members: Vec<Tensor>) -> Result<Self, SpectraError> {
        if members.len() != clock.omega() {
            return Err(SpectraError::InvalidFamily(format!("expected {} members, got {}", clock.omega(), members.len())));
        }
        let dims = members[0].in_dims().to_vec();
        if dims.is_empty() || members.iter().any(|p| p.in_dims() != dims || p.out_dims() != dims) {
            return Err(SpectraError::InvalidFamily("members must be operators on one system space".into()));
        }
        Ok(Self { clock, sys_dims: dims, members })
    }

    pub fn clock(&self) -> &Arc<QuantumClock> {
        &self.clock
    }

    pub fn system_dims(&self) -> &[usize] {
        &self.sys_dims
    }

    /// `P_{m mod ω}`.
    pub fn member(&self, m: i64) -> &Tensor {
        &self.members[self.clock.labels().residue(m)]
    }

    pub fn members(&self) -> &[Tensor] {
        &self.members
    }

    /// Same family with one member replaced.
    pub fn with_member(&self, m: i64, p: Tensor) -> Result<Self, SpectraError> {
        let mut members = self.members.clone();
        members[self.clock.labels().residue(m)] = p;
        Self::from_members(self.clock.clone(), members)
    }

    /// Orthogonal idempotence `P_m P_k = δ_mk P_m`, completeness and
    /// self-adjointness.
    pub fn check_invariants(&self, tol: f64) -> LawReport {
        let id = Tensor::identity_on(self.sys_dims.clone()).expect("positive dims");
        let mut orth: f64 = 0.0;
        let mut adj: f64 = 0.0;
        let mut total = Tensor::zeros(self.sys_dims.clone(), self.sys_dims.clone()).expect("positive dims");
        for (i, p) in self.members.iter().enumerate() {
            for (j, q) in self.members.iter().enumerate() {
                let pq = compose(p, q).expect("same dims");
                let r = if i == j { pq.sub(p) } else { Ok(pq) }.expect("same dims").max_norm();
                orth = orth.max(r);
            }
            adj = adj.max(p.dagger().sub(p).expect("same dims").max_norm());
            total = total.add(p).expect("same dims");
        }
        let mut laws = LawReport::default();
        laws.push(LawCheck::new("orthogonal-idempotence", orth, tol));
        laws.push(LawCheck::new("completeness", total.sub(&id).expect("same dims").max_norm(), tol));
        laws.push(LawCheck::new("self-adjointness", adj, tol));
        laws
    }

    /// Per-level energy, rank and idempotence residual, in ascending
    /// representative order.
    pub fn summary(&self) -> Vec<SpectrumEntry> {
        let labels = self.clock.labels();
        labels
            .representatives()
            .map(|m| {
                let p = self.member(m);
                let trace = p.trace().expect("square").re;
                let idem = compose(p, p).expect("same dims").sub(p).expect("same dims").max_norm();
                SpectrumEntry { m, energy: labels.energy_of(m), rank: trace.round().max(0.0) as usize, idempotence_residual: idem }
            })
            .collect()
    }

    /// `Σ_m E_m · rank(P_m)`.
    pub fn energy_sum(&self) -> f64 {
        self.summary().iter().map(|e| e.energy * e.rank as f64).sum()
    }
}

/// `P_m = (1/ω) (id_H ⊗ ⟨E_m|) ∘ α†`, contracted from the coalgebra `α†`.
pub fn projector_family(sys: &DynamicalSystem) -> Result<ProjectorFamily, SpectraError> {
    require_valid(sys)?;
    let clock = sys.clock().clone();
    let w = clock.omega();
    let coalgebra = sys.algebra().dagger();
    let h = Tensor::identity_on(sys.system_dims().to_vec())?;
    let scale = C64::new(1.0 / w as f64, 0.0);
    let members = (0..w as i64)
        .map(|m| {
            let effect = h.tensor(&clock.energy_state(m).dagger());
            compose(&effect, &coalgebra).map(|p| p.scale(scale))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ProjectorFamily::from_members(clock, members)
}

/// Time average `(1/|G|) Σ_n e^{+i2πmn/ω} α_n`, summed over ascending
/// representatives `n`.
pub fn ergodic_projector(sys: &DynamicalSystem, m: i64) -> Result<Tensor, SpectraError> {
    require_valid(sys)?;
    let clock = sys.clock();
    let dims = sys.system_dims().to_vec();
    let mut acc = Tensor::zeros(dims.clone(), dims)?;
    for n in clock.labels().representatives() {
        acc = acc.add(&sys.evaluate_at(n).scale(clock.pairing_phase(m, n).conj()))?;
    }
    Ok(acc.scale(C64::new(1.0 / clock.omega() as f64, 0.0)))
}

/// `α_n = Σ_m ⟨E_m|t_n⟩ P_m`, summed over ascending representatives `m`.
pub fn stone_reconstruct(fam: &ProjectorFamily, n: i64) -> Tensor {
    let clock = &fam.clock;
    let mut acc = Tensor::zeros(fam.sys_dims.clone(), fam.sys_dims.clone()).expect("positive dims");
    for m in clock.labels().representatives() {
        acc = acc.add(&fam.member(m).scale(clock.pairing_phase(m, n))).expect("same dims");
    }
    acc
}

/// `max_n ‖α_n ψ − ⟨E_m|t_n⟩ ψ‖ / ‖ψ‖`.
pub fn schrodinger_residual(sys: &DynamicalSystem, psi: &Tensor, m: i64) -> Result<f64, SpectraError> {
    if psi.in_dims() != [] as [usize; 0] || psi.out_dims() != sys.system_dims() {
        return Err(TensorError::DimensionMismatch { expected: sys.system_dims().to_vec(), found: psi.out_dims().to_vec() }.into());
    }
    let norm = psi.frobenius_norm();
    if norm == 0.0 {
        return Err(SpectraError::ZeroState);
    }
    let clock = sys.clock();
    let mut worst: f64 = 0.0;
    for n in clock.labels().representatives() {
        let evolved = compose(sys.evaluate_at(n), psi)?;
        let diff = evolved.sub(&psi.scale(clock.pairing_phase(m, n)))?;
        worst = worst.max(diff.frobenius_norm() / norm);
    }
    Ok(worst)
}

/// `‖S_m† T_n − ⟨E_m|t_n⟩ T_n S_m†‖_max`.
pub fn weyl_residual(c: &QuantumClock, m: i64, n: i64) -> f64 {
    let phase = c.pairing_phase(m, n);
    if c.omega() > DENSE_WEYL_LIMIT {
        // both sides send |k⟩ to a multiple of |k + n⟩
        return (0..c.omega() as i64)
            .map(|k| (c.pairing_phase(m, k + n) - phase * c.pairing_phase(m, k)).norm())
            .fold(0.0, f64::max);
    }
    let (lhs, rhs) = weyl_sides(c, m, n);
    lhs.sub(&rhs.scale(phase)).expect("same dims").max_norm()
}

/// The scalar `λ` with `S_m† T_n = λ T_n S_m†`, extracted from the operators
/// without reference to the pairing.
pub fn weyl_exchange_phase(c: &QuantumClock, m: i64, n: i64) -> Option<C64> {
    let (lhs, rhs) = weyl_sides(c, m, n);
    crate::tensor::approx_equal(&lhs, &rhs, 1e-9, EqualityMode::UpToGlobalScalar).ok()?.lambda
}

fn weyl_sides(c: &QuantumClock, m: i64, n: i64) -> (Tensor, Tensor) {
    let s_dag = c.energy_shift(m).dagger();
    let t = c.time_translation(n);
    let lhs = compose(&s_dag, &t).expect("same dims");
    let rhs = compose(&t, &s_dag).expect("same dims");
    (lhs, rhs)
}
