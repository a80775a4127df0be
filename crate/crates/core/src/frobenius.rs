//! Quasi-special symmetric †-Frobenius algebras (quantum observables).
//!
//! A structure is given by its monoid `(mult, unit)`; the comonoid is
//! always derived as `(mult†, unit†)`.

use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::lazy::LazyTensor;
use crate::process::Process;
use crate::report::{LawCheck, LawReport};
use crate::tensor::{compose, tensor_product, EqualityMode, Tensor, TensorError, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrobeniusError {
    #[error("carrier dimension must be positive")]
    InvalidDimension,

    #[error("multiplication is not commutative (residual {residual:e})")]
    NotCommutative { residual: f64 },

    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Clone, Debug, PartialEq)]
enum Origin {
    /// Copy structure of the standard basis.
    Basis,
    /// Group algebra of `Z_d`.
    Cyclic,
    /// User-supplied monoid, validity unknown.
    Explicit,
}

/// A monoid on a `d`-dimensional carrier together with its dagger comonoid.
#[derive(Clone, Debug)]
pub struct FrobeniusStructure {
    dim: usize,
    origin: Origin,
    mult: LazyTensor,
    unit: LazyTensor,
    normalisation: f64,
    report: Arc<OnceLock<FrobeniusLawReport>>,
}

/// Law report for a Frobenius structure, with the extracted normalisation
/// factor `N` such that `mult ∘ comult = N · id`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusLawReport {
    pub laws: LawReport,
    pub normalisation: f64,
}

impl FrobeniusLawReport {
    pub fn passed(&self) -> bool {
        self.laws.passed()
    }
}

impl serde::Serialize for FrobeniusLawReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.laws.serialize(s)
    }
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn basis_mult(d: usize) -> Tensor {
    let mut e = vec![zero(); d * d * d];
    for n in 0..d {
        // |n⟩ ⊗ |n⟩ ↦ |n⟩
        e[n * d * d + n * d + n] = one();
    }
    Tensor::from_raw(vec![d, d], vec![d], e)
}

fn cyclic_mult(d: usize) -> Tensor {
    let mut e = vec![zero(); d * d * d];
    for a in 0..d {
        for b in 0..d {
            e[((a + b) % d) * d * d + a * d + b] = one();
        }
    }
    Tensor::from_raw(vec![d, d], vec![d], e)
}

impl FrobeniusStructure {
    /// Special commutative structure copying the standard basis.
    pub fn from_basis(d: usize) -> Result<Self, FrobeniusError> {
        if d == 0 {
            return Err(FrobeniusError::InvalidDimension);
        }
        Ok(Self {
            dim: d,
            origin: Origin::Basis,
            mult: LazyTensor::new(move || basis_mult(d)),
            unit: LazyTensor::new(move || Tensor::from_raw(vec![], vec![d], vec![one(); d])),
            normalisation: 1.0,
            report: Arc::new(OnceLock::new()),
        })
    }

    /// Group algebra `C[Z_d]`: `|a⟩ ⊗ |b⟩ ↦ |a + b mod d⟩` with unit `|0⟩`.
    /// Quasi-special with `N = d`.
    pub fn cyclic_group(d: usize) -> Result<Self, FrobeniusError> {
        if d == 0 {
            return Err(FrobeniusError::InvalidDimension);
        }
        Ok(Self {
            dim: d,
            origin: Origin::Cyclic,
            mult: LazyTensor::new(move || cyclic_mult(d)),
            unit: LazyTensor::new(move || Tensor::basis_state(d, 0).expect("d > 0")),
            normalisation: d as f64,
            report: Arc::new(OnceLock::new()),
        })
    }

    /// Arbitrary monoid data. The structure may violate any law; consult
    /// [`FrobeniusStructure::is_valid`] before relying on it.
    pub fn from_monoid(mult: Tensor, unit: Tensor) -> Result<Self, FrobeniusError> {
        let d = unit.rows();
        if unit.in_dims() != [] as [usize; 0] || unit.out_dims() != [d] {
            return Err(TensorError::DimensionMismatch { expected: vec![d], found: unit.out_dims().to_vec() }.into());
        }
        if mult.in_dims() != [d, d] || mult.out_dims() != [d] {
            return Err(TensorError::DimensionMismatch { expected: vec![d, d], found: mult.in_dims().to_vec() }.into());
        }
        let special = compose(&mult, &mult.dagger())?;
        let normalisation = special.trace().map(|t| t.re / d as f64).unwrap_or(0.0);
        Ok(Self {
            dim: d,
            origin: Origin::Explicit,
            mult: LazyTensor::ready(mult),
            unit: LazyTensor::ready(unit),
            normalisation,
            report: Arc::new(OnceLock::new()),
        })
    }

    pub fn carrier_dim(&self) -> usize {
        self.dim
    }

    pub fn mult(&self) -> &Tensor {
        self.mult.get()
    }

    pub fn unit(&self) -> &Tensor {
        self.unit.get()
    }

    pub fn comult(&self) -> Tensor {
        self.mult().dagger()
    }

    pub fn counit(&self) -> Tensor {
        self.unit().dagger()
    }

    /// `N = ξ†ξ` with `mult ∘ comult = N · id`.
    pub fn normalisation_factor(&self) -> f64 {
        self.normalisation
    }

    /// Law report at the default tolerance, computed once.
    pub fn cached_report(&self) -> &FrobeniusLawReport {
        self.report.get_or_init(|| check_laws(self, DEFAULT_TOL))
    }

    /// Basis and cyclic structures are valid by construction; explicit
    /// ones are valid when their cached report passes.
    pub fn is_valid(&self) -> bool {
        match self.origin {
            Origin::Basis | Origin::Cyclic => true,
            Origin::Explicit => self.cached_report().passed(),
        }
    }

    pub(crate) fn mult_process(&self) -> Process {
        Process::from_tensor(self.mult().clone())
    }

    pub(crate) fn comult_process(&self) -> Process {
        Process::from_tensor(self.comult())
    }

    pub(crate) fn unit_process(&self) -> Process {
        Process::from_tensor(self.unit().clone())
    }

    pub(crate) fn counit_process(&self) -> Process {
        Process::from_tensor(self.counit())
    }

    pub(crate) fn cup_process(&self) -> Process {
        Process::from_tensor(cup_cap(self).0)
    }

    pub(crate) fn cap_process(&self) -> Process {
        Process::from_tensor(cup_cap(self).1)
    }
}

/// `cup = comult ∘ unit` and `cap = cup†`.
pub fn cup_cap(f: &FrobeniusStructure) -> (Tensor, Tensor) {
    let cup = compose(&f.comult(), f.unit()).expect("unit feeds comult");
    let cap = cup.dagger();
    (cup, cap)
}

fn seq(a: Process, b: Process) -> Process {
    a.then(b).expect("law composites are well-typed")
}

fn strict(name: &str, lhs: &Process, rhs: &Process, tol: f64) -> LawCheck {
    let r = lhs.compare(rhs, tol, EqualityMode::Strict).expect("law sides share a profile");
    LawCheck::new(name, r.residual, tol)
}

/// Evaluates every defining law of a quasi-special symmetric commutative
/// †-Frobenius algebra. Failures are reported, never raised.
pub fn check_laws(f: &FrobeniusStructure, tol: f64) -> FrobeniusLawReport {
    let d = f.dim;
    let id = || Process::identity(vec![d]);
    let mult = f.mult_process();
    let comult = f.comult_process();
    let unit = f.unit_process();
    let cup = f.cup_process();
    let cap = f.cap_process();
    let swap = Process::swap(vec![d], vec![d]);
    let mut laws = LawReport::default();

    laws.push(strict(
        "associativity",
        &seq(mult.clone().par(id()), mult.clone()),
        &seq(id().par(mult.clone()), mult.clone()),
        tol,
    ));
    laws.push(strict("unit-left", &seq(unit.clone().par(id()), mult.clone()), &id(), tol));
    laws.push(strict("unit-right", &seq(id().par(unit.clone()), mult.clone()), &id(), tol));

    let middle = seq(mult.clone(), comult.clone());
    laws.push(strict(
        "frobenius-left",
        &seq(id().par(comult.clone()), mult.clone().par(id())),
        &middle,
        tol,
    ));
    laws.push(strict(
        "frobenius-right",
        &seq(comult.clone().par(id()), id().par(mult.clone())),
        &middle,
        tol,
    ));

    // mult ∘ comult = N · id with N a positive real extracted as the scalar
    let r = seq(comult.clone(), mult.clone())
        .compare(&id(), tol, EqualityMode::UpToGlobalScalar)
        .expect("endomorphism");
    let lambda = r.lambda.unwrap_or_default();
    let residual = r.residual.max(lambda.im.abs());
    laws.push(LawCheck::with_verdict(
        "quasi-speciality",
        residual,
        r.equal && residual <= tol && lambda.re > tol,
    ));
    let normalisation = lambda.re;

    laws.push(strict("commutativity", &seq(swap.clone(), mult.clone()), &mult, tol));
    laws.push(strict("symmetry-cap", &seq(swap.clone(), cap.clone()), &cap, tol));
    laws.push(strict("symmetry-cup", &seq(cup.clone(), swap.clone()), &cup, tol));
    laws.push(strict("snake-left", &seq(id().par(cup.clone()), cap.clone().par(id())), &id(), tol));
    laws.push(strict("snake-right", &seq(cup.clone().par(id()), id().par(cap.clone())), &id(), tol));

    FrobeniusLawReport { laws, normalisation }
}

/// Left action `L_a = mult ∘ (|a⟩ ⊗ id)` of basis vector `a`, as a matrix.
fn left_action(f: &FrobeniusStructure, a: usize) -> DMatrix<C64> {
    let d = f.dim;
    let m = f.mult();
    DMatrix::from_fn(d, d, |i, j| m.get(i, a * d + j))
}

/// Deterministic generic weights for the simultaneous diagonalisation.
fn weight(k: usize, salt: f64) -> f64 {
    let x = (k as f64 + 1.0) * (0.618_033_988_749_894_9 + salt);
    x.fract() + 0.37 * salt + 0.1
}

/// Classical (copyable, deletable, self-conjugate) states of a commutative
/// structure.
///
/// The left actions of a commutative †-Frobenius algebra commute, and the
/// classical states are their joint eigenvectors rescaled so that
/// `counit |g⟩ = 1`. The joint eigenbasis comes from one generic Hermitian
/// combination of the actions; candidates are then verified to `tol`.
/// States are ordered by their eigenvalue tuples, descending
/// lexicographically.
pub fn classical_states(f: &FrobeniusStructure, tol: f64) -> Result<Vec<Tensor>, FrobeniusError> {
    let d = f.dim;
    let comm = check_commutativity(f, tol);
    if comm > tol {
        return Err(FrobeniusError::NotCommutative { residual: comm });
    }
    let actions: Vec<DMatrix<C64>> = (0..d).map(|a| left_action(f, a)).collect();
    let mut herm = DMatrix::<C64>::zeros(d, d);
    for (k, l) in actions.iter().enumerate() {
        let ld = l.adjoint();
        let re = (l + &ld) * C64::new(weight(k, 0.0), 0.0);
        let im = (l - &ld) * C64::new(0.0, weight(k, 0.29));
        herm += re + im;
    }
    let eig = herm.symmetric_eigen();

    let comult = f.comult();
    let counit = f.counit();
    let cup = cup_cap(f).0;
    let mut found: Vec<(Vec<C64>, Tensor)> = Vec::new();
    for col in eig.eigenvectors.column_iter() {
        let v: Vec<C64> = col.iter().copied().collect();
        let del: C64 = (0..d).map(|i| counit.get(0, i) * v[i]).sum();
        if del.norm() <= tol {
            continue;
        }
        let g = Tensor::state(v.iter().map(|z| z / del).collect())?;
        if classical_residual(&g, &comult, &counit, &cup)? > tol {
            continue;
        }
        let gv = nalgebra::DVector::from_vec(v.clone());
        let nrm = gv.norm_squared();
        let tuple: Vec<C64> = actions.iter().map(|l| gv.dotc(&(l * &gv)) / nrm).collect();
        found.push((tuple, g));
    }
    found.sort_by(|(a, _), (b, _)| {
        for (x, y) in a.iter().zip(b) {
            let key = |z: &C64| ((z.re * 1e9).round(), (z.im * 1e9).round());
            match key(y).partial_cmp(&key(x)) {
                Some(std::cmp::Ordering::Equal) | None => continue,
                Some(o) => return o,
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok(found.into_iter().map(|(_, g)| g).collect())
}

fn check_commutativity(f: &FrobeniusStructure, tol: f64) -> f64 {
    let d = f.dim;
    let mult = f.mult_process();
    let swapped = seq(Process::swap(vec![d], vec![d]), mult.clone());
    swapped.compare(&mult, tol, EqualityMode::Strict).expect("same profile").residual
}

/// Largest residual among the copy, delete and self-conjugacy equations.
pub fn classical_residual(g: &Tensor, comult: &Tensor, counit: &Tensor, cup: &Tensor) -> Result<f64, TensorError> {
    let copy = compose(comult, g)?.sub(&tensor_product(g, g))?.max_norm();
    let delete = (compose(counit, g)?.as_scalar().unwrap_or_default() - C64::new(1.0, 0.0)).norm();
    let d = g.rows();
    let transpose = compose(&tensor_product(&g.dagger(), &Tensor::identity(d)?), cup)?;
    let conj = transpose.sub(g)?.max_norm();
    Ok(copy.max(delete).max(conj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn trivial_algebra() {
        let f = FrobeniusStructure::from_basis(1).unwrap();
        let r = check_laws(&f, DEFAULT_TOL);
        assert!(r.passed(), "{r:?}");
        assert!((r.normalisation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert_eq!(FrobeniusStructure::from_basis(0).unwrap_err(), FrobeniusError::InvalidDimension);
    }

    #[test]
    fn basis_comult_copies() {
        let f = FrobeniusStructure::from_basis(2).unwrap();
        let out = compose(&f.comult(), &Tensor::basis_state(2, 0).unwrap()).unwrap();
        let expected = tensor_product(&Tensor::basis_state(2, 0).unwrap(), &Tensor::basis_state(2, 0).unwrap());
        assert_eq!(out, expected);
    }

    #[test]
    fn basis_mult_is_pointwise() {
        let f = FrobeniusStructure::from_basis(4).unwrap();
        let ket = |i| Tensor::basis_state(4, i).unwrap();
        let m11 = compose(f.mult(), &tensor_product(&ket(1), &ket(1))).unwrap();
        assert_eq!(m11, ket(1));
        let m12 = compose(f.mult(), &tensor_product(&ket(1), &ket(2))).unwrap();
        assert_eq!(m12.max_norm(), 0.0);
    }

    #[test]
    fn basis_laws_pass_with_unit_normalisation() {
        let r = check_laws(&FrobeniusStructure::from_basis(3).unwrap(), DEFAULT_TOL);
        assert!(r.passed());
        assert!((r.normalisation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cyclic_laws_pass_with_normalisation_omega() {
        let r = check_laws(&FrobeniusStructure::cyclic_group(4).unwrap(), DEFAULT_TOL);
        assert!(r.passed(), "{r:?}");
        assert!((r.normalisation - 4.0).abs() < 1e-12);
    }

    #[test]
    fn corrupted_mult_breaks_frobenius_law() {
        let f = FrobeniusStructure::cyclic_group(3).unwrap();
        let mut e = f.mult().entries().to_vec();
        e[4] += c(0.1);
        let broken = FrobeniusStructure::from_monoid(
            Tensor::new(vec![3, 3], vec![3], e).unwrap(),
            f.unit().clone(),
        )
        .unwrap();
        let r = check_laws(&broken, DEFAULT_TOL);
        assert!(r.laws.get("frobenius-left").unwrap().residual > DEFAULT_TOL);
        assert!(!broken.is_valid());
    }

    #[test]
    fn basis_classical_states() {
        let f = FrobeniusStructure::from_basis(2).unwrap();
        let states = classical_states(&f, DEFAULT_TOL).unwrap();
        assert_eq!(states.len(), 2);
        assert!(states.contains(&Tensor::basis_state(2, 0).unwrap()) || states.iter().any(|s| s.sub(&Tensor::basis_state(2, 0).unwrap()).unwrap().max_norm() < 1e-12));
        for i in 0..2 {
            let e = Tensor::basis_state(2, i).unwrap();
            assert!(states.iter().any(|s| s.sub(&e).unwrap().max_norm() < 1e-12));
        }
    }

    #[test]
    fn basis_classical_states_orthonormal() {
        let f = FrobeniusStructure::from_basis(5).unwrap();
        let states = classical_states(&f, DEFAULT_TOL).unwrap();
        assert_eq!(states.len(), 5);
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let ip = compose(&a.dagger(), b).unwrap().as_scalar().unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - c(expected)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn z2_characters() {
        let f = FrobeniusStructure::cyclic_group(2).unwrap();
        let states = classical_states(&f, DEFAULT_TOL).unwrap();
        assert_eq!(states.len(), 2);
        for expected in [[1.0, 1.0], [1.0, -1.0]] {
            let e = Tensor::state(expected.iter().map(|&x| c(x)).collect()).unwrap();
            assert!(states.iter().any(|s| s.sub(&e).unwrap().max_norm() < 1e-12));
        }
    }

    #[test]
    fn z4_has_four_classical_states() {
        let f = FrobeniusStructure::cyclic_group(4).unwrap();
        assert_eq!(classical_states(&f, DEFAULT_TOL).unwrap().len(), 4);
    }

    #[test]
    fn non_commutative_rejected() {
        // 2x2 matrix algebra M_2 on a 4-dim carrier: not commutative
        let d = 4;
        let mut e = vec![C64::new(0.0, 0.0); d * d * d];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    // E_ij E_jk = E_ik
                    let a = i * 2 + j;
                    let b = j * 2 + k;
                    let out = i * 2 + k;
                    e[out * d * d + a * d + b] = c(1.0);
                }
            }
        }
        let mult = Tensor::new(vec![d, d], vec![d], e).unwrap();
        let unit = Tensor::state(vec![c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        let f = FrobeniusStructure::from_monoid(mult, unit).unwrap();
        assert!(matches!(classical_states(&f, DEFAULT_TOL), Err(FrobeniusError::NotCommutative { .. })));
    }

    #[test]
    fn basis_cup_is_bell_type() {
        let (cup, cap) = cup_cap(&FrobeniusStructure::from_basis(2).unwrap());
        let expected = Tensor::new(vec![], vec![2, 2], vec![c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        assert_eq!(cup, expected);
        assert_eq!(cap, cup.dagger());
    }

    fn snake(f: &FrobeniusStructure) -> Tensor {
        let d = f.carrier_dim();
        let (cup, cap) = cup_cap(f);
        let id = Tensor::identity(d).unwrap();
        compose(&tensor_product(&cap, &id), &tensor_product(&id, &cup)).unwrap()
    }

    #[test]
    fn basis_snake_is_identity() {
        for d in 1..5 {
            let s = snake(&FrobeniusStructure::from_basis(d).unwrap());
            assert!(s.sub(&Tensor::identity(d).unwrap()).unwrap().max_norm() < 1e-14);
        }
    }

    #[test]
    fn cyclic_snake_is_identity_not_normalisation() {
        // the snake composite is the plain wire; only mult ∘ comult carries N
        let f = FrobeniusStructure::cyclic_group(3).unwrap();
        let s = snake(&f);
        assert!(s.sub(&Tensor::identity(3).unwrap()).unwrap().max_norm() < 1e-14);
        let special = compose(f.mult(), &f.comult()).unwrap();
        let three = Tensor::identity(3).unwrap().scale(c(3.0));
        assert!(special.sub(&three).unwrap().max_norm() < 1e-14);
    }

    #[test]
    fn symmetric_cap() {
        let f = FrobeniusStructure::cyclic_group(5).unwrap();
        let (_, cap) = cup_cap(&f);
        let sw = Tensor::swap(vec![5], vec![5]).unwrap();
        assert!(compose(&cap, &sw).unwrap().sub(&cap).unwrap().max_norm() < 1e-14);
    }
}
