//! Shared fixtures for the integration tests: seeded random systems and an
//! independent eigendecomposition oracle for energy projectors.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use qclock::{DynamicalSystem, Level, QuantumClock, Tensor, C64};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn clock(w: usize) -> Arc<QuantumClock> {
    Arc::new(QuantumClock::with_omega(w).unwrap())
}

pub fn to_matrix(t: &Tensor) -> DMatrix<C64> {
    DMatrix::from_row_slice(t.rows(), t.cols(), t.entries())
}

pub fn to_operator(m: &DMatrix<C64>) -> Tensor {
    let entries: Vec<C64> = m.transpose().iter().copied().collect();
    Tensor::operator(m.nrows(), entries).unwrap()
}

pub fn column_state(m: &DMatrix<C64>, j: usize) -> Tensor {
    Tensor::state(m.column(j).iter().copied().collect()).unwrap()
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-like unitary from the QR decomposition of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(d, d, |i, j| if i == j { r[(i, i)] / r[(i, i)].norm() } else { C64::new(0.0, 0.0) });
    q * phases
}

pub fn random_state(rng: &mut ChaCha8Rng, d: usize) -> Tensor {
    let v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Tensor::state(v.into_iter().map(|z| z / n).collect()).unwrap()
}

/// Random orthonormal eigenbasis with random energy indices, grouped into
/// levels by index.
pub fn random_levels(rng: &mut ChaCha8Rng, c: &QuantumClock, d: usize) -> Vec<Level> {
    let u = random_unitary(rng, d);
    let reps: Vec<i64> = c.labels().representatives().collect();
    let mut levels: Vec<Level> = Vec::new();
    for j in 0..d {
        let m = *reps.choose(rng).unwrap();
        let v = column_state(&u, j);
        match levels.iter_mut().find(|l| l.m == m) {
            Some(l) => l.basis.push(v),
            None => levels.push(Level { m, basis: vec![v] }),
        }
    }
    levels
}

/// Random energy indices that are pairwise distinct, so every level is
/// one-dimensional.
pub fn random_nondegenerate_levels(rng: &mut ChaCha8Rng, c: &QuantumClock, d: usize) -> Vec<Level> {
    assert!(d <= c.omega());
    let u = random_unitary(rng, d);
    let mut reps: Vec<i64> = c.labels().representatives().collect();
    reps.shuffle(rng);
    (0..d).map(|j| Level { m: reps[j], basis: vec![column_state(&u, j)] }).collect()
}

pub fn random_system(rng: &mut ChaCha8Rng, c: &Arc<QuantumClock>, d: usize) -> DynamicalSystem {
    let levels = random_levels(rng, c, d);
    DynamicalSystem::from_spectrum(c.clone(), &levels).unwrap()
}

/// Projectors onto the eigenspaces of `α_1`, keyed by residue `m` with
/// `α_1 = e^{−i2πm/ω}` on the eigenspace. Eigenvectors come from a complex
/// Schur decomposition; phases within 1e−6 rad are merged in ascending
/// angle order.
pub fn eigen_oracle(alpha1: &Tensor, omega: usize) -> Vec<(usize, DMatrix<C64>)> {
    let m = to_matrix(alpha1);
    let d = m.nrows();
    let (q, t) = m.schur().unpack();
    let mut pairs: Vec<(f64, usize)> = (0..d).map(|i| (t[(i, i)].arg(), i)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (angle, i) in pairs {
        match groups.last_mut() {
            Some((a, members)) if (angle - *a).abs() <= 1e-6 => members.push(i),
            _ => groups.push((angle, vec![i])),
        }
    }
    let mut out: Vec<(usize, DMatrix<C64>)> = Vec::new();
    for (residue, p) in groups.into_iter().map(|(angle, members)| {
            let k = (-angle * omega as f64 / (2.0 * PI)).round() as i64;
            let residue = k.rem_euclid(omega as i64) as usize;
            let mut p = DMatrix::<C64>::zeros(d, d);
            for i in members {
                let v = q.column(i);
                p += v * v.adjoint();
            }
            (residue, p)
        }) {
        // phases at ±π land on the same residue
        match out.iter_mut().find(|(r, _)| *r == residue) {
            Some((_, acc)) => *acc += p,
            None => out.push((residue, p)),
        }
    }
    out
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, serde::Deserialize)]
pub struct ScalingFixture {
    pub spectrum: Vec<f64>,
    pub times: Vec<f64>,
    pub grids: Vec<(f64, f64)>,
}

pub fn scaling_fixture(name: &str) -> ScalingFixture {
    let path = format!("{}/fixtures/scaling/{name}.json", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub const SCALING_FIXTURES: [&str; 4] = ["on_grid_two_level", "on_grid_three_level", "doubling_irrational", "doubling_generic"];
