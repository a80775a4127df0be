//! Quantum dynamical systems: unitary representations of a clock's time
//! group, viewed as algebras `α: H ⊗ G → H` of the clock monad.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clock::{ClockError, QuantumClock};
use crate::process::Process;
use crate::report::{LawCheck, LawReport};
use crate::tensor::{compose, EqualityMode, EqualityReport, Tensor, TensorError, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("generator is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("generator does not return to the identity after omega steps (residual {residual:e}); its spectrum is off the energy grid")]
    NotCyclic { residual: f64 },

    #[error("energy levels span {found} dimensions, system has {expected}")]
    IncompleteBasis { expected: usize, found: usize },

    #[error("level basis vectors are not orthonormal (residual {residual:e})")]
    NonOrthogonal { residual: f64 },

    #[error("systems run on different clocks")]
    ClockMismatch,

    #[error("family must have one operator per time state: {0}")]
    InvalidFamily(String),

    #[error(transparent)]
    Clock(#[from] ClockError),

    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Diagrammatic validation report of a system.
pub type AlgebraReport = LawReport;

/// A unitary representation `n ↦ α_n` of `Z_ω` on a system space `H`.
#[derive(Clone, Debug)]
pub struct DynamicalSystem {
    clock: Arc<QuantumClock>,
    sys_dims: Vec<usize>,
    // indexed by residue 0..ω
    family: Arc<Vec<Tensor>>,
    representation: LawReport,
}

/// One energy level: an energy index and an orthonormal basis of its
/// eigenspace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub m: i64,
    pub basis: Vec<Tensor>,
}

fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

fn representation_report(clock: &QuantumClock, family: &[Tensor], tol: f64) -> LawReport {
    let w = clock.omega();
    let d = family[0].rows();
    let id = Tensor::identity_on(family[0].in_dims().to_vec()).expect("positive dims");
    let mut laws = LawReport::default();
    laws.push(LawCheck::new("identity", family[0].sub(&id).map(|t| t.max_norm()).unwrap_or(f64::INFINITY), tol));
    let mut composition: f64 = 0.0;
    let mut unitarity: f64 = 0.0;
    for n in 0..w {
        let next = compose(&family[1 % w], &family[n]).expect("square family");
        composition = composition.max(next.sub(&family[(n + 1) % w]).expect("same dims").max_norm());
        unitarity = unitarity.max(family[n].unitarity_residual().expect("square"));
    }
    laws.push(LawCheck::new("composition", composition, tol));
    laws.push(LawCheck::new("unitarity", unitarity, tol));
    debug_assert!(d > 0);
    laws
}

fn check_square(t: &Tensor, dims: &[usize]) -> Result<(), DynamicsError> {
    if t.in_dims() != dims || t.out_dims() != dims {
        return Err(TensorError::DimensionMismatch { expected: dims.to_vec(), found: t.in_dims().to_vec() }.into());
    }
    Ok(())
}

impl DynamicalSystem {
    fn assemble(clock: Arc<QuantumClock>, family: Vec<Tensor>, tol: f64) -> Self {
        let sys_dims = family[0].in_dims().to_vec();
        let representation = representation_report(&clock, &family, tol);
        Self { clock, sys_dims, family: Arc::new(family), representation }
    }

    /// `α_n = U^n`, with negative representatives taken as powers of `U†`.
    pub fn from_generator(clock: Arc<QuantumClock>, u: Tensor, tol: f64) -> Result<Self, DynamicsError> {
        if u.in_dims() != u.out_dims() || u.in_dims().is_empty() {
            return Err(TensorError::DimensionMismatch { expected: u.in_dims().to_vec(), found: u.out_dims().to_vec() }.into());
        }
        let residual = u.unitarity_residual()?;
        if residual > tol {
            return Err(DynamicsError::NotUnitary { residual });
        }
        let w = clock.omega();
        let mut powers = Vec::with_capacity(w + 1);
        powers.push(Tensor::identity_on(u.in_dims().to_vec())?);
        for k in 0..w {
            let next = compose(&u, &powers[k])?;
            powers.push(next);
        }
        let residual = powers[w].sub(&powers[0])?.max_norm();
        if residual > tol {
            return Err(DynamicsError::NotCyclic { residual });
        }
        let family = (0..w)
            .map(|r| if r <= w / 2 { powers[r].clone() } else { powers[w - r].dagger() })
            .collect();
        Ok(Self::assemble(clock, family, tol))
    }

    /// `α_n = Σ_levels ⟨E_m|t_n⟩ P_m` for the projectors spanned by each
    /// level's basis.
    pub fn from_spectrum(clock: Arc<QuantumClock>, levels: &[Level]) -> Result<Self, DynamicsError> {
        Self::from_spectrum_with_tol(clock, levels, DEFAULT_TOL)
    }

    pub fn from_spectrum_with_tol(clock: Arc<QuantumClock>, levels: &[Level], tol: f64) -> Result<Self, DynamicsError> {
        let vectors: Vec<&Tensor> = levels.iter().flat_map(|l| &l.basis).collect();
        let Some(first) = vectors.first() else {
            return Err(DynamicsError::IncompleteBasis { expected: 0, found: 0 });
        };
        let dims = first.out_dims().to_vec();
        for v in &vectors {
            if !v.is_state() || v.out_dims() != dims {
                return Err(TensorError::DimensionMismatch { expected: dims.clone(), found: v.out_dims().to_vec() }.into());
            }
        }
        let d = product(&dims);
        let mut gram: f64 = 0.0;
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate() {
                let ip: C64 = a.entries().iter().zip(b.entries()).map(|(x, y)| x.conj() * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                gram = gram.max((ip - target).norm());
            }
        }
        if gram > tol {
            return Err(DynamicsError::NonOrthogonal { residual: gram });
        }
        if vectors.len() != d {
            return Err(DynamicsError::IncompleteBasis { expected: d, found: vectors.len() });
        }
        let projectors: Vec<(i64, Tensor)> = levels
            .iter()
            .map(|l| {
                let mut p = Tensor::zeros(dims.clone(), dims.clone()).expect("positive dims");
                for v in &l.basis {
                    p = p.add(&compose(v, &v.dagger()).expect("state")).expect("same dims");
                }
                (l.m, p)
            })
            .collect();
        let w = clock.omega();
        let family = (0..w as i64)
            .map(|n| {
                let mut a = Tensor::zeros(dims.clone(), dims.clone()).expect("positive dims");
                for (m, p) in &projectors {
                    a = a.add(&p.scale(clock.pairing_phase(*m, n))).expect("same dims");
                }
                a
            })
            .collect();
        Ok(Self::assemble(clock, family, tol))
    }

    /// Family indexed by residue `0..ω`, taken as is. The result may violate
    /// every law; see [`DynamicalSystem::validate`].
    pub fn from_family(clock: Arc<QuantumClock>, family: Vec<Tensor>) -> Result<Self, DynamicsError> {
        if family.len() != clock.omega() {
            return Err(DynamicsError::InvalidFamily(format!("expected {} members, got {}", clock.omega(), family.len())));
        }
        let dims = family[0].in_dims().to_vec();
        if dims.is_empty() {
            return Err(DynamicsError::InvalidFamily("system space must have at least one wire".into()));
        }
        for t in &family {
            check_square(t, &dims)?;
        }
        Ok(Self::assemble(clock, family, DEFAULT_TOL))
    }

    /// The clock acting on itself by translation.
    pub fn clock_self_system(clock: Arc<QuantumClock>) -> Self {
        let w = clock.omega() as i64;
        let family = (0..w).map(|n| clock.time_translation(n)).collect();
        Self::assemble(clock, family, DEFAULT_TOL)
    }

    pub fn clock(&self) -> &Arc<QuantumClock> {
        &self.clock
    }

    pub fn omega(&self) -> usize {
        self.clock.omega()
    }

    pub fn system_dims(&self) -> &[usize] {
        &self.sys_dims
    }

    pub fn system_dim(&self) -> usize {
        product(&self.sys_dims)
    }

    pub fn family(&self) -> &[Tensor] {
        &self.family
    }

    /// `α_{n mod ω}`.
    pub fn evaluate_at(&self, n: i64) -> &Tensor {
        &self.family[self.clock.labels().residue(n)]
    }

    /// Identity, composition and unitarity of the family, computed at
    /// construction.
    pub fn representation_report(&self) -> &LawReport {
        &self.representation
    }

    pub fn is_representation(&self) -> bool {
        self.representation.passed()
    }

    /// The algebra `α = Σ_n α_n ⊗ ⟨t_n|` as a single tensor `H ⊗ G → H`.
    pub fn algebra(&self) -> Tensor {
        let d = self.system_dim();
        let w = self.omega();
        let cols = d * w;
        let mut e = vec![C64::new(0.0, 0.0); d * cols];
        for (n, a) in self.family.iter().enumerate() {
            for i in 0..d {
                for j in 0..d {
                    e[i * cols + j * w + n] = a.get(i, j);
                }
            }
        }
        let mut in_dims = self.sys_dims.clone();
        in_dims.push(w);
        Tensor::new(in_dims, self.sys_dims.clone(), e).expect("consistent dims")
    }

    /// Checks the algebra laws diagrammatically on the assembled `α`:
    /// action, unit, self-conjugacy in two equivalent forms, and per-time
    /// unitarity.
    pub fn validate(&self, tol: f64) -> AlgebraReport {
        let w = self.omega();
        let g = self.clock.group();
        let x = g.xdot();
        let z = g.zdot();
        let alpha = Process::from_tensor(self.algebra());
        let h = || Process::identity(self.sys_dims.clone());
        let gid = || Process::identity(vec![w]);
        let seq = |a: Process, b: Process| a.then(b).expect("well-typed");
        let strict = |name: &str, l: &Process, r: &Process| {
            LawCheck::new(name, l.compare(r, tol, EqualityMode::Strict).expect("same profile").residual, tol)
        };
        let mut laws = LawReport::default();
        laws.push(strict(
            "action",
            &seq(alpha.clone().par(gid()), alpha.clone()),
            &seq(h().par(x.mult_process()), alpha.clone()),
        ));
        laws.push(strict("unit", &seq(h().par(x.unit_process()), alpha.clone()), &h()));
        let adjoint = alpha.dagger();
        laws.push(strict(
            "self-conjugacy",
            &adjoint,
            &seq(h().par(x.cup_process()), alpha.clone().par(gid())),
        ));
        let antipode = Process::from_tensor(g.antipode().clone());
        laws.push(strict(
            "self-conjugacy-reformulated",
            &adjoint,
            &seq(h().par(z.cup_process()), alpha.clone().par(antipode)),
        ));
        let unitarity = self.family.iter().map(|a| a.unitarity_residual().expect("square")).fold(0.0, f64::max);
        laws.push(LawCheck::new("unitarity", unitarity, tol));
        laws
    }

    /// The system on `H_a ⊗ H_b` with `(α ⊗ β)_n = α_n ⊗ β_n`.
    pub fn tensor_compose(&self, other: &DynamicalSystem) -> Result<Self, DynamicsError> {
        if self.clock != other.clock {
            return Err(DynamicsError::ClockMismatch);
        }
        let family = self.family.iter().zip(other.family.iter()).map(|(a, b)| a.tensor(b)).collect();
        Ok(Self::assemble(self.clock.clone(), family, DEFAULT_TOL))
    }

    /// Evolution of `psi0` under the system.
    pub fn history(&self, psi0: &Tensor) -> Result<History, DynamicsError> {
        if psi0.in_dims() != [] as [usize; 0] || psi0.out_dims() != self.sys_dims {
            return Err(TensorError::DimensionMismatch { expected: self.sys_dims.clone(), found: psi0.out_dims().to_vec() }.into());
        }
        let trajectory = self.family.iter().map(|a| compose(a, psi0).expect("dims checked")).collect();
        Ok(History { system: self.clone(), initial: psi0.clone(), trajectory })
    }
}

/// Whether `phi: H_a → H_b` intertwines two systems on the same clock.
///
/// The residual is the larger of the per-time discrepancy
/// `max_n ‖Φ α_n − β_n Φ‖` and the algebra-morphism discrepancy
/// `‖Φ ∘ α − β ∘ (Φ ⊗ id)‖`.
pub fn is_equivariant(phi: &Tensor, a: &DynamicalSystem, b: &DynamicalSystem, tol: f64) -> Result<EqualityReport, DynamicsError> {
    if a.clock != b.clock {
        return Err(DynamicsError::ClockMismatch);
    }
    if phi.in_dims() != a.sys_dims {
        return Err(TensorError::DimensionMismatch { expected: a.sys_dims.clone(), found: phi.in_dims().to_vec() }.into());
    }
    if phi.out_dims() != b.sys_dims {
        return Err(TensorError::DimensionMismatch { expected: b.sys_dims.clone(), found: phi.out_dims().to_vec() }.into());
    }
    let mut per_time: f64 = 0.0;
    for (an, bn) in a.family.iter().zip(b.family.iter()) {
        let lhs = compose(phi, an)?;
        let rhs = compose(bn, phi)?;
        per_time = per_time.max(lhs.sub(&rhs)?.max_norm());
    }
    let w = a.omega();
    let phi_p = Process::from_tensor(phi.clone());
    let lhs = Process::from_tensor(a.algebra()).then(phi_p.clone())?;
    let rhs = phi_p.par(Process::identity(vec![w])).then(Process::from_tensor(b.algebra()))?;
    let diagram = lhs.compare(&rhs, tol, EqualityMode::Strict)?.residual;
    let residual = per_time.max(diagram);
    Ok(EqualityReport { equal: residual <= tol, residual, lambda: None })
}

/// A state together with its evolution under a system.
#[derive(Clone, Debug)]
pub struct History {
    system: DynamicalSystem,
    initial: Tensor,
    trajectory: Vec<Tensor>,
}

impl History {
    pub fn system(&self) -> &DynamicalSystem {
        &self.system
    }

    pub fn initial(&self) -> &Tensor {
        &self.initial
    }

    /// `α_n ψ_0`.
    pub fn trajectory(&self, n: i64) -> &Tensor {
        &self.trajectory[self.system.clock.labels().residue(n)]
    }

    /// `Ψ: G → H` with `Ψ |t_n⟩ = α_n ψ_0`.
    pub fn as_map(&self) -> Tensor {
        let d = self.system.system_dim();
        let w = self.system.omega();
        let mut e = vec![C64::new(0.0, 0.0); d * w];
        for (n, s) in self.trajectory.iter().enumerate() {
            for i in 0..d {
                e[i * w + n] = s.entries()[i];
            }
        }
        Tensor::new(vec![w], self.system.sys_dims.clone(), e).expect("consistent dims")
    }

    /// `Ψ` as an algebra morphism from the clock's own dynamics.
    pub fn check_morphism(&self, tol: f64) -> EqualityReport {
        let clock = DynamicalSystem::clock_self_system(self.system.clock.clone());
        is_equivariant(&self.as_map(), &clock, &self.system, tol).expect("same clock and dims")
    }
}

/// Serialized system description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemSpec {
    Generator { clock: QuantumClock, unitary: Tensor },
    Spectrum { clock: QuantumClock, levels: Vec<Level> },
}

impl SystemSpec {
    pub fn build(&self, tol: f64) -> Result<DynamicalSystem, DynamicsError> {
        match self {
            SystemSpec::Generator { clock, unitary } => {
                DynamicalSystem::from_generator(Arc::new(clock.clone()), unitary.clone(), tol)
            }
            SystemSpec::Spectrum { clock, levels } => {
                DynamicalSystem::from_spectrum_with_tol(Arc::new(clock.clone()), levels, tol)
            }
        }
    }
}
