//! Dense complex tensors between tensor powers of finite-dimensional spaces.
//!
//! A [`Tensor`] is a linear map `⊗ in_dims → ⊗ out_dims`, stored as a
//! row-major matrix whose rows are indexed by the output multi-index and
//! whose columns are indexed by the input multi-index. States have no input
//! wires, effects have no output wires, scalars have neither.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Tolerance used by every law check unless the caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("dimension mismatch: expected wires {expected:?}, found {found:?}")]
    DimensionMismatch { expected: Vec<usize>, found: Vec<usize> },

    #[error("wire dimensions must be positive, got {0:?}")]
    InvalidDimension(Vec<usize>),

    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

pub type TensorResult<T> = Result<T, TensorError>;

/// Comparison mode for [`approx_equal`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualityMode {
    Strict,
    UpToGlobalScalar,
}

/// Outcome of a tolerance-based comparison.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualityReport {
    pub equal: bool,
    /// Max-entry-norm of `f - λ g` (with `λ = 1` in strict mode).
    pub residual: f64,
    /// The global scalar, present in scalar mode only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<C64>,
}

#[derive(Clone, PartialEq)]
pub struct Tensor {
    in_dims: Vec<usize>,
    out_dims: Vec<usize>,
    entries: Vec<C64>,
}

fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

fn check_dims(dims: &[usize]) -> TensorResult<()> {
    if dims.contains(&0) {
        return Err(TensorError::InvalidDimension(dims.to_vec()));
    }
    Ok(())
}

impl Tensor {
    pub fn new(in_dims: Vec<usize>, out_dims: Vec<usize>, entries: Vec<C64>) -> TensorResult<Self> {
        check_dims(&in_dims)?;
        check_dims(&out_dims)?;
        let expected = product(&in_dims) * product(&out_dims);
        if entries.len() != expected {
            return Err(TensorError::EntryCount { expected, found: entries.len() });
        }
        if let Some(pos) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(TensorError::NonFinite(pos));
        }
        Ok(Self { in_dims, out_dims, entries })
    }

    /// Builds a tensor whose shape is already known to be valid.
    pub(crate) fn from_raw(in_dims: Vec<usize>, out_dims: Vec<usize>, entries: Vec<C64>) -> Self {
        debug_assert_eq!(entries.len(), product(&in_dims) * product(&out_dims));
        Self { in_dims, out_dims, entries }
    }

    pub fn zeros(in_dims: Vec<usize>, out_dims: Vec<usize>) -> TensorResult<Self> {
        check_dims(&in_dims)?;
        check_dims(&out_dims)?;
        let n = product(&in_dims) * product(&out_dims);
        Ok(Self::from_raw(in_dims, out_dims, vec![C64::new(0.0, 0.0); n]))
    }

    /// Identity on a single wire of dimension `d`.
    pub fn identity(d: usize) -> TensorResult<Self> {
        Self::identity_on(vec![d])
    }

    /// Identity on the given list of wires.
    pub fn identity_on(dims: Vec<usize>) -> TensorResult<Self> {
        check_dims(&dims)?;
        let n = product(&dims);
        let mut entries = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = C64::new(1.0, 0.0);
        }
        Ok(Self::from_raw(dims.clone(), dims, entries))
    }

    pub fn scalar(z: C64) -> Self {
        Self::from_raw(vec![], vec![], vec![z])
    }

    /// Standard basis state `|index⟩` in dimension `dim`.
    pub fn basis_state(dim: usize, index: usize) -> TensorResult<Self> {
        check_dims(&[dim])?;
        if index >= dim {
            return Err(TensorError::IndexOutOfRange { index, dim });
        }
        let mut entries = vec![C64::new(0.0, 0.0); dim];
        entries[index] = C64::new(1.0, 0.0);
        Ok(Self::from_raw(vec![], vec![dim], entries))
    }

    /// A state on a single wire with the given amplitudes.
    pub fn state(amplitudes: Vec<C64>) -> TensorResult<Self> {
        let d = amplitudes.len();
        Self::new(vec![], vec![d], amplitudes)
    }

    /// A square operator on one wire, given as a row-major matrix.
    pub fn operator(dim: usize, entries: Vec<C64>) -> TensorResult<Self> {
        Self::new(vec![dim], vec![dim], entries)
    }

    /// Diagonal operator on one wire.
    pub fn diagonal(diag: &[C64]) -> TensorResult<Self> {
        let d = diag.len();
        check_dims(&[d])?;
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for (i, z) in diag.iter().enumerate() {
            entries[i * d + i] = *z;
        }
        Self::new(vec![d], vec![d], entries)
    }

    /// The symmetry isomorphism `A ⊗ B → B ⊗ A` for groups of wires `a`, `b`.
    pub fn swap(a: Vec<usize>, b: Vec<usize>) -> TensorResult<Self> {
        check_dims(&a)?;
        check_dims(&b)?;
        let (na, nb) = (product(&a), product(&b));
        let n = na * nb;
        let mut entries = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..na {
            for j in 0..nb {
                let col = i * nb + j;
                let row = j * na + i;
                entries[row * n + col] = C64::new(1.0, 0.0);
            }
        }
        let mut in_dims = a.clone();
        in_dims.extend_from_slice(&b);
        let mut out_dims = b;
        out_dims.extend(a);
        Ok(Self::from_raw(in_dims, out_dims, entries))
    }

    pub fn in_dims(&self) -> &[usize] {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &[usize] {
        &self.out_dims
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn rows(&self) -> usize {
        product(&self.out_dims)
    }

    pub fn cols(&self) -> usize {
        product(&self.in_dims)
    }

    pub fn is_state(&self) -> bool {
        self.in_dims.is_empty()
    }

    pub fn is_effect(&self) -> bool {
        self.out_dims.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.in_dims.is_empty() && self.out_dims.is_empty()
    }

    /// Entry at (output multi-index flattened, input multi-index flattened).
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.cols() + col]
    }

    /// The value of a scalar tensor, or of a 1×1 tensor of any wiring.
    pub fn as_scalar(&self) -> Option<C64> {
        (self.entries.len() == 1).then(|| self.entries[0])
    }

    /// Multiplies every entry by `z`.
    pub fn scale(&self, z: C64) -> Self {
        Self::from_raw(
            self.in_dims.clone(),
            self.out_dims.clone(),
            self.entries.iter().map(|e| e * z).collect(),
        )
    }

    fn check_same_profile(&self, other: &Tensor) -> TensorResult<()> {
        if self.in_dims != other.in_dims {
            return Err(TensorError::DimensionMismatch {
                expected: self.in_dims.clone(),
                found: other.in_dims.clone(),
            });
        }
        if self.out_dims != other.out_dims {
            return Err(TensorError::DimensionMismatch {
                expected: self.out_dims.clone(),
                found: other.out_dims.clone(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Tensor) -> TensorResult<Self> {
        self.check_same_profile(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Self::from_raw(self.in_dims.clone(), self.out_dims.clone(), entries))
    }

    pub fn sub(&self, other: &Tensor) -> TensorResult<Self> {
        self.check_same_profile(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Self::from_raw(self.in_dims.clone(), self.out_dims.clone(), entries))
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the entry vector (the vector norm for states).
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Sum of the diagonal of a square tensor.
    pub fn trace(&self) -> Option<C64> {
        let n = self.rows();
        (n == self.cols()).then(|| (0..n).map(|i| self.get(i, i)).sum())
    }

    /// `‖f† f − id‖_max` for operators with matching wire profiles.
    pub fn unitarity_residual(&self) -> TensorResult<f64> {
        let gram = compose(&self.dagger(), self)?;
        let left = gram.sub(&Tensor::identity_on(self.in_dims.clone())?)?.max_norm();
        let gram = compose(self, &self.dagger())?;
        let right = gram.sub(&Tensor::identity_on(self.out_dims.clone())?)?.max_norm();
        Ok(left.max(right))
    }

    /// Conjugate transpose: swaps input and output wires.
    pub fn dagger(&self) -> Self {
        dagger(self)
    }

    /// Sequential composition in diagram order: `self` first, then `next`.
    pub fn then(&self, next: &Tensor) -> TensorResult<Self> {
        compose(next, self)
    }

    /// Parallel composition.
    pub fn tensor(&self, other: &Tensor) -> Self {
        tensor_product(self, other)
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor({:?} -> {:?}) [", self.in_dims, self.out_dims)?;
        for r in 0..self.rows() {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols() {
                let z = self.get(r, c);
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
        }
        write!(f, " ]")
    }
}

/// `g ∘ f`: apply `f`, then `g`.
pub fn compose(g: &Tensor, f: &Tensor) -> TensorResult<Tensor> {
    if f.out_dims != g.in_dims {
        return Err(TensorError::DimensionMismatch {
            expected: g.in_dims.clone(),
            found: f.out_dims.clone(),
        });
    }
    let (rows, inner, cols) = (g.rows(), g.cols(), f.cols());
    let mut entries = vec![C64::new(0.0, 0.0); rows * cols];
    for i in 0..rows {
        let out = &mut entries[i * cols..(i + 1) * cols];
        for k in 0..inner {
            let a = g.entries[i * inner + k];
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            let frow = &f.entries[k * cols..(k + 1) * cols];
            for (o, b) in out.iter_mut().zip(frow) {
                *o += a * b;
            }
        }
    }
    Ok(Tensor::from_raw(f.in_dims.clone(), g.out_dims.clone(), entries))
}

/// Kronecker-structured parallel composition `f ⊗ g`.
pub fn tensor_product(f: &Tensor, g: &Tensor) -> Tensor {
    let (fr, fc, gr, gc) = (f.rows(), f.cols(), g.rows(), g.cols());
    let cols = fc * gc;
    let mut entries = vec![C64::new(0.0, 0.0); fr * gr * cols];
    for i in 0..fr {
        for j in 0..fc {
            let a = f.entries[i * fc + j];
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for k in 0..gr {
                let row = i * gr + k;
                for l in 0..gc {
                    entries[row * cols + j * gc + l] = a * g.entries[k * gc + l];
                }
            }
        }
    }
    let mut in_dims = f.in_dims.clone();
    in_dims.extend_from_slice(&g.in_dims);
    let mut out_dims = f.out_dims.clone();
    out_dims.extend_from_slice(&g.out_dims);
    Tensor::from_raw(in_dims, out_dims, entries)
}

pub fn dagger(f: &Tensor) -> Tensor {
    let (rows, cols) = (f.rows(), f.cols());
    let mut entries = Vec::with_capacity(rows * cols);
    for c in 0..cols {
        for r in 0..rows {
            entries.push(f.entries[r * cols + c].conj());
        }
    }
    Tensor::from_raw(f.out_dims.clone(), f.in_dims.clone(), entries)
}

/// Tolerance-based equality of two tensors with identical wire profiles.
///
/// In scalar mode `λ` is anchored at the largest-magnitude entry of `g`
/// (first such entry in row-major order) and must satisfy `|λ| > tol`.
pub fn approx_equal(f: &Tensor, g: &Tensor, tol: f64, mode: EqualityMode) -> TensorResult<EqualityReport> {
    f.check_same_profile(g)?;
    Ok(compare_entries(&f.entries, &g.entries, tol, mode))
}

pub(crate) fn compare_entries(f: &[C64], g: &[C64], tol: f64, mode: EqualityMode) -> EqualityReport {
    match mode {
        EqualityMode::Strict => {
            let residual = max_diff(f, g, C64::new(1.0, 0.0));
            EqualityReport { equal: residual <= tol, residual, lambda: None }
        }
        EqualityMode::UpToGlobalScalar => {
            let anchor = argmax_norm(g);
            match anchor {
                Some((pos, gmax)) if gmax > tol => {
                    let lambda = f[pos] / g[pos];
                    let residual = max_diff(f, g, lambda);
                    let equal = residual <= tol && lambda.norm() > tol;
                    EqualityReport { equal, residual, lambda: Some(lambda) }
                }
                // g vanishes: only the zero tensor is a multiple of it.
                _ => {
                    let residual = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
                    EqualityReport { equal: false, residual, lambda: None }
                }
            }
        }
    }
}

pub(crate) fn argmax_norm(g: &[C64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, z) in g.iter().enumerate() {
        let n = z.norm();
        if best.is_none_or(|(_, b)| n > b) {
            best = Some((i, n));
        }
    }
    best
}

pub(crate) fn max_diff(f: &[C64], g: &[C64], lambda: C64) -> f64 {
    f.iter().zip(g).map(|(a, b)| (a - lambda * b).norm()).fold(0.0, f64::max)
}

// JSON encoding: {"in_dims":[...],"out_dims":[...],"entries":[[re,im],...]}

#[derive(Serialize, Deserialize)]
struct TensorRepr {
    in_dims: Vec<usize>,
    out_dims: Vec<usize>,
    entries: Vec<[f64; 2]>,
}

impl Serialize for Tensor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TensorRepr {
            in_dims: self.in_dims.clone(),
            out_dims: self.out_dims.clone(),
            entries: self.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Tensor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = TensorRepr::deserialize(deserializer)?;
        let entries = repr.entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        Tensor::new(repr.in_dims, repr.out_dims, entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_composition() {
        let id = Tensor::identity(2).unwrap();
        assert_eq!(compose(&id, &id).unwrap(), id);
    }

    #[test]
    fn normalised_state_has_unit_inner_product() {
        let s = 0.5f64.sqrt();
        let v = Tensor::state(vec![c(s, 0.0), c(0.0, s)]).unwrap();
        let ip = compose(&v.dagger(), &v).unwrap();
        assert!(ip.is_scalar());
        assert!((ip.as_scalar().unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn compose_rejects_wire_mismatch() {
        let a = Tensor::identity(2).unwrap();
        let b = Tensor::identity(3).unwrap();
        assert!(matches!(compose(&a, &b), Err(TensorError::DimensionMismatch { .. })));
    }

    #[test]
    fn tensor_unit_and_identities() {
        let f = Tensor::operator(2, vec![c(1.0, 2.0), c(0.0, 1.0), c(3.0, 0.0), c(-1.0, 0.5)]).unwrap();
        assert_eq!(tensor_product(&Tensor::scalar(c(1.0, 0.0)), &f), f);
        let id6 = tensor_product(&Tensor::identity(2).unwrap(), &Tensor::identity(3).unwrap());
        assert_eq!(id6.entries(), Tensor::identity(6).unwrap().entries());
        assert_eq!(id6.in_dims(), &[2, 3]);
    }

    #[test]
    fn basis_bookkeeping() {
        let s = tensor_product(&Tensor::basis_state(2, 0).unwrap(), &Tensor::basis_state(2, 1).unwrap());
        assert_eq!(s.out_dims(), &[2, 2]);
        let expected = [0.0, 1.0, 0.0, 0.0];
        for (z, e) in s.entries().iter().zip(expected) {
            assert_eq!(*z, c(e, 0.0));
        }
    }

    #[test]
    fn dagger_cases() {
        let id = Tensor::identity(3).unwrap();
        assert_eq!(id.dagger(), id);
        let xi = Tensor::scalar(c(0.3, -1.2));
        assert_eq!(xi.dagger().as_scalar().unwrap(), c(0.3, 1.2));
        let ket = Tensor::basis_state(4, 2).unwrap();
        let bra = ket.dagger();
        assert!(bra.is_effect());
        assert_eq!(bra.in_dims(), &[4]);
        assert_eq!(bra.dagger(), ket);
    }

    #[test]
    fn equality_modes() {
        let f = Tensor::operator(2, vec![c(1.0, 0.0), c(2.0, -1.0), c(0.0, 0.0), c(0.5, 0.5)]).unwrap();
        let r = approx_equal(&f, &f, 0.0, EqualityMode::Strict).unwrap();
        assert!(r.equal);
        assert_eq!(r.residual, 0.0);

        let g = f.scale(c(0.0, 1.0));
        let r = approx_equal(&g, &f, 1e-12, EqualityMode::UpToGlobalScalar).unwrap();
        assert!(r.equal);
        assert!((r.lambda.unwrap() - c(0.0, 1.0)).norm() < 1e-15);

        let x = Tensor::operator(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let r = approx_equal(&Tensor::identity(2).unwrap(), &x, 0.99, EqualityMode::Strict).unwrap();
        assert!(!r.equal);
        assert_eq!(r.residual, 1.0);
    }

    #[test]
    fn scalar_mode_rejects_vanishing_reference() {
        let z = Tensor::zeros(vec![2], vec![2]).unwrap();
        let id = Tensor::identity(2).unwrap();
        let r = approx_equal(&id, &z, 1e-10, EqualityMode::UpToGlobalScalar).unwrap();
        assert!(!r.equal);
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(Tensor::identity(0), Err(TensorError::InvalidDimension(_))));
        assert!(matches!(
            Tensor::new(vec![2], vec![2], vec![c(0.0, 0.0); 3]),
            Err(TensorError::EntryCount { expected: 4, found: 3 })
        ));
        assert!(matches!(
            Tensor::new(vec![], vec![2], vec![c(f64::NAN, 0.0), c(0.0, 0.0)]),
            Err(TensorError::NonFinite(0))
        ));
    }

    #[test]
    fn json_encoding() {
        let t = Tensor::state(vec![c(1.0, 0.0), c(0.0, -1.0)]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"in_dims":[],"out_dims":[2],"entries":[[1.0,0.0],[0.0,-1.0]]}"#);
        let back: Tensor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        let bad = r#"{"in_dims":[2],"out_dims":[2],"entries":[[1.0,0.0]]}"#;
        assert!(serde_json::from_str::<Tensor>(bad).is_err());
    }

    #[test]
    fn swap_exchanges_factors() {
        let a = Tensor::state(vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let b = Tensor::state(vec![c(3.0, 0.0), c(4.0, 0.0), c(5.0, 0.0)]).unwrap();
        let sw = Tensor::swap(vec![2], vec![3]).unwrap();
        let lhs = compose(&sw, &tensor_product(&a, &b)).unwrap();
        assert_eq!(lhs, tensor_product(&b, &a));
    }
}
