//! Strongly complementary pairs built from cyclic group algebras.

use num_complex::Complex64 as C64;

use crate::frobenius::{FrobeniusError, FrobeniusStructure};
use crate::lazy::LazyTensor;
use crate::process::Process;
use crate::report::{LawCheck, LawReport};
use crate::tensor::{EqualityMode, Tensor, TensorError};

/// The pair `(Z, X)` on `C[Z_ω]`: `Z` copies group elements, `X` adds them.
#[derive(Clone, Debug)]
pub struct CoherentGroup {
    omega: usize,
    zdot: FrobeniusStructure,
    xdot: FrobeniusStructure,
    antipode: LazyTensor,
}

fn shift(omega: usize, n: i64) -> Tensor {
    let w = omega as i64;
    let mut e = vec![C64::new(0.0, 0.0); omega * omega];
    for k in 0..w {
        let to = (k + n).rem_euclid(w) as usize;
        e[to * omega + k as usize] = C64::new(1.0, 0.0);
    }
    Tensor::from_raw(vec![omega], vec![omega], e)
}

fn negation(omega: usize) -> Tensor {
    let mut e = vec![C64::new(0.0, 0.0); omega * omega];
    for k in 0..omega {
        e[((omega - k) % omega) * omega + k] = C64::new(1.0, 0.0);
    }
    Tensor::from_raw(vec![omega], vec![omega], e)
}

impl CoherentGroup {
    /// Group algebra of `Z_ω` with the negation antipode.
    pub fn cyclic_pair(omega: usize) -> Result<Self, FrobeniusError> {
        Ok(Self {
            omega,
            zdot: FrobeniusStructure::from_basis(omega)?,
            xdot: FrobeniusStructure::cyclic_group(omega)?,
            antipode: LazyTensor::new(move || negation(omega)),
        })
    }

    /// Same pair with a different antipode, for negative tests.
    pub fn with_antipode(&self, antipode: Tensor) -> Result<Self, TensorError> {
        if antipode.in_dims() != [self.omega] || antipode.out_dims() != [self.omega] {
            return Err(TensorError::DimensionMismatch {
                expected: vec![self.omega],
                found: antipode.in_dims().to_vec(),
            });
        }
        Ok(Self { antipode: LazyTensor::ready(antipode), ..self.clone() })
    }

    pub fn carrier_dim(&self) -> usize {
        self.omega
    }

    pub fn zdot(&self) -> &FrobeniusStructure {
        &self.zdot
    }

    pub fn xdot(&self) -> &FrobeniusStructure {
        &self.xdot
    }

    pub fn antipode(&self) -> &Tensor {
        self.antipode.get()
    }

    /// `|k⟩ ↦ |k + n mod ω⟩`.
    pub fn left_regular_action(&self, n: i64) -> Tensor {
        shift(self.omega, n)
    }

    /// Cup of `X`, `Σ_a |a⟩ ⊗ |−a⟩`.
    pub fn xcup(&self) -> Tensor {
        crate::frobenius::cup_cap(&self.xdot).0
    }
}

fn seq(a: Process, b: Process) -> Process {
    a.then(b).expect("law composites are well-typed")
}

fn strict(name: &str, lhs: &Process, rhs: &Process, tol: f64) -> LawCheck {
    let r = lhs.compare(rhs, tol, EqualityMode::Strict).expect("law sides share a profile");
    LawCheck::new(name, r.residual, tol)
}

/// Bialgebra, coherence, bone, antipode, Hopf and dagger Frobenius monad
/// laws of a pair. The monad law is evaluated with the clock carrier itself
/// as the system space.
pub fn check_strong_complementarity(p: &CoherentGroup, tol: f64) -> LawReport {
    let w = p.omega;
    let id = || Process::identity(vec![w]);
    let z = &p.zdot;
    let x = &p.xdot;
    let s = Process::from_tensor(p.antipode().clone());
    let scalar_one = Process::identity(vec![]);
    let mut laws = LawReport::default();

    let shuffle = id().par(Process::swap(vec![w], vec![w])).par(id());
    laws.push(strict(
        "bialgebra",
        &seq(x.mult_process(), z.comult_process()),
        &seq(seq(z.comult_process().par(z.comult_process()), shuffle), x.mult_process().par(x.mult_process())),
        tol,
    ));
    laws.push(strict(
        "coherence-delete",
        &seq(x.mult_process(), z.counit_process()),
        &z.counit_process().par(z.counit_process()),
        tol,
    ));
    laws.push(strict(
        "coherence-copy",
        &seq(x.unit_process(), z.comult_process()),
        &x.unit_process().par(x.unit_process()),
        tol,
    ));
    laws.push(strict("bone", &seq(x.unit_process(), z.counit_process()), &scalar_one, tol));

    // s = (id ⊗ cap_Z) ∘ (cup_X ⊗ id)
    let built = seq(x.cup_process().par(id()), id().par(z.cap_process()));
    laws.push(strict("antipode-definition", &s, &built, tol));
    laws.push(strict("antipode-self-adjoint", &s.dagger(), &s, tol));
    let unitary = p.antipode().unitarity_residual().unwrap_or(f64::INFINITY);
    laws.push(LawCheck::new("antipode-unitary", unitary, tol));

    let collapse = seq(z.counit_process(), x.unit_process());
    laws.push(strict(
        "hopf-left",
        &seq(seq(z.comult_process(), s.clone().par(id())), x.mult_process()),
        &collapse,
        tol,
    ));
    laws.push(strict(
        "hopf-right",
        &seq(seq(z.comult_process(), id().par(s.clone())), x.mult_process()),
        &collapse,
        tol,
    ));

    let sys = || Process::identity(vec![w]);
    laws.push(strict(
        "dagger-frobenius-monad",
        &seq(sys().par(id()).par(x.comult_process()), sys().par(x.mult_process()).par(id())),
        &seq(sys().par(x.mult_process()), sys().par(x.comult_process())),
        tol,
    ));
    laws
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{compose, tensor_product};

    fn ket(w: usize, i: usize) -> Tensor {
        Tensor::basis_state(w, i).unwrap()
    }

    #[test]
    fn trivial_pair() {
        let p = CoherentGroup::cyclic_pair(1).unwrap();
        assert!(check_strong_complementarity(&p, 1e-12).passed());
        assert_eq!(p.antipode(), &Tensor::identity(1).unwrap());
    }

    #[test]
    fn addition_mod_four() {
        let p = CoherentGroup::cyclic_pair(4).unwrap();
        let out = compose(p.xdot().mult(), &tensor_product(&ket(4, 3), &ket(4, 2))).unwrap();
        assert_eq!(out, ket(4, 1));
        assert_eq!(compose(p.antipode(), &ket(4, 1)).unwrap(), ket(4, 3));
        assert_eq!(p.xdot().unit(), &ket(4, 0));
    }

    #[test]
    fn small_pairs_pass() {
        for w in [2, 6] {
            let r = check_strong_complementarity(&CoherentGroup::cyclic_pair(w).unwrap(), 1e-12);
            assert!(r.passed(), "ω={w}: {r:?}");
        }
    }

    #[test]
    fn identity_antipode_breaks_hopf() {
        let p = CoherentGroup::cyclic_pair(3).unwrap();
        let broken = p.with_antipode(Tensor::identity(3).unwrap()).unwrap();
        let r = check_strong_complementarity(&broken, 1e-10);
        assert!(r.get("hopf-left").unwrap().residual > 1e-10);
        assert!(!r.passed());
    }

    #[test]
    fn antipode_is_involution() {
        let p = CoherentGroup::cyclic_pair(7).unwrap();
        let s = p.antipode();
        assert_eq!(compose(s, s).unwrap(), Tensor::identity(7).unwrap());
    }

    #[test]
    fn regular_action() {
        let p = CoherentGroup::cyclic_pair(4).unwrap();
        assert_eq!(p.left_regular_action(0), Tensor::identity(4).unwrap());
        assert_eq!(compose(&p.left_regular_action(1), &ket(4, 3)).unwrap(), ket(4, 0));
        let composed = compose(&p.left_regular_action(3), &p.left_regular_action(2)).unwrap();
        assert_eq!(composed, p.left_regular_action(1));
        let partial = compose(p.xdot().mult(), &tensor_product(&ket(4, 2), &Tensor::identity(4).unwrap())).unwrap();
        assert_eq!(partial, p.left_regular_action(2));
    }
}
