//! Finite-grid approximation of continuous time evolution: snapping values
//! to clock grids and refinement studies over sequences of grids.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clock::{ClockError, QuantumClock};
use crate::dynamics::{DynamicalSystem, DynamicsError, Level};
use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalingError {
    #[error("{value} lies outside the representable interval [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },

    #[error("target spectrum is empty")]
    EmptySpectrum,

    #[error("grids must be sorted by increasing omega")]
    UnsortedGrids,

    #[error(transparent)]
    Clock(#[from] ClockError),

    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Time,
    Energy,
}

/// Result of snapping a value onto a grid.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snap {
    pub index: i64,
    pub snapped: f64,
    pub delta: f64,
}

fn spacing(c: &QuantumClock, kind: GridKind) -> f64 {
    match kind {
        GridKind::Time => 1.0 / c.labels().omega_uv(),
        GridKind::Energy => 1.0 / c.labels().omega_ir(),
    }
}

/// Nearest grid point by absolute distance, ties toward the smaller index.
pub fn snap(c: &QuantumClock, value: f64, kind: GridKind) -> Result<Snap, ScalingError> {
    let h = spacing(c, kind);
    let w = c.omega() as i64;
    let (lo, hi) = (-((w - 1) / 2), w / 2);
    let out = ScalingError::OutOfRange { value, min: lo as f64 * h, max: hi as f64 * h };
    if !value.is_finite() {
        return Err(out);
    }
    let x = value / h;
    let index = (x - 0.5).ceil();
    if index < lo as f64 || index > hi as f64 {
        return Err(out);
    }
    let index = index as i64;
    let snapped = index as f64 * h;
    Ok(Snap { index, snapped, delta: value - snapped })
}

struct Snapped {
    // (clock index, unrestricted nearest grid energy)
    energies: Vec<(i64, f64)>,
    time: Snap,
}

/// Energies are read on the dual group, so a value outside the
/// representable window aliases onto the grid point it shares all
/// grid-time phases with.
fn snap_all(spectrum: &[f64], t: f64, c: &QuantumClock) -> Result<Snapped, ScalingError> {
    if spectrum.is_empty() {
        return Err(ScalingError::EmptySpectrum);
    }
    let h = spacing(c, GridKind::Energy);
    let mut energies = Vec::with_capacity(spectrum.len());
    for &e in spectrum {
        if !e.is_finite() {
            return Err(ScalingError::OutOfRange { value: e, min: f64::NEG_INFINITY, max: f64::INFINITY });
        }
        let k = (e / h - 0.5).ceil();
        energies.push((c.labels().representative(k as i64), k * h));
    }
    Ok(Snapped { energies, time: snap(c, t, GridKind::Time)? })
}

/// `‖exp(−i2πHt) − α_n‖_max` for `H = diag(spectrum)`, where `α` is the
/// clock system built from the snapped energies and `n` the snapped time.
/// Times outside the time grid are rejected.
pub fn approximation_error(spectrum: &[f64], t: f64, c: &QuantumClock) -> Result<f64, ScalingError> {
    let s = snap_all(spectrum, t, c)?;
    let d = spectrum.len();
    let levels: Vec<Level> = s
        .energies
        .iter()
        .enumerate()
        .map(|(j, &(m, _))| Level { m, basis: vec![Tensor::basis_state(d, j).expect("j < d")] })
        .collect();
    let sys = DynamicalSystem::from_spectrum(Arc::new(c.clone()), &levels)?;
    let alpha = sys.evaluate_at(s.time.index);
    let mut err: f64 = 0.0;
    for i in 0..d {
        for (j, &e) in spectrum.iter().enumerate() {
            let target = if i == j { C64::from_polar(1.0, -2.0 * PI * e * t) } else { C64::new(0.0, 0.0) };
            err = err.max((target - alpha.get(i, j)).norm());
        }
    }
    Ok(err)
}

/// Triangle bound `2π(Σ_j |ΔE_j|·|t| + max_j |E_j|·|Δt|) + 1e−9` on the
/// phase error, with `ΔE_j` measured to the nearest grid energy and `|E_j|`
/// taken as the larger of the target and grid magnitudes.
pub fn error_bound(spectrum: &[f64], t: f64, c: &QuantumClock) -> Result<f64, ScalingError> {
    let s = snap_all(spectrum, t, c)?;
    let de: f64 = spectrum.iter().zip(&s.energies).map(|(e, (_, near))| (e - near).abs()).sum();
    let emax = spectrum.iter().zip(&s.energies).map(|(e, (_, near))| e.abs().max(near.abs())).fold(0.0, f64::max);
    Ok(2.0 * PI * (de * t.abs() + emax * s.time.delta.abs()) + 1e-9)
}

/// One grid of a refinement study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub omega_uv: f64,
    pub omega_ir: f64,
    pub omega: usize,
    pub max_error: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridExperiment {
    pub target_spectrum: Vec<f64>,
    pub target_times: Vec<f64>,
    pub rows: Vec<GridRow>,
}

/// Maximum error over `times` on each grid. Grids must be sorted by `ω`;
/// with no times the study has no rows.
pub fn refinement_study(spectrum: &[f64], times: &[f64], grids: &[(f64, f64)]) -> Result<GridExperiment, ScalingError> {
    let clocks = grids.iter().map(|&(uv, ir)| QuantumClock::new(uv, ir)).collect::<Result<Vec<_>, _>>()?;
    if clocks.windows(2).any(|w| w[0].omega() > w[1].omega()) {
        return Err(ScalingError::UnsortedGrids);
    }
    let mut rows = Vec::new();
    if !times.is_empty() {
        for c in &clocks {
            let mut max_error: f64 = 0.0;
            let mut bound: f64 = 0.0;
            for &t in times {
                max_error = max_error.max(approximation_error(spectrum, t, c)?);
                bound = bound.max(error_bound(spectrum, t, c)?);
            }
            let l = c.labels();
            rows.push(GridRow { omega_uv: l.omega_uv(), omega_ir: l.omega_ir(), omega: c.omega(), max_error, bound });
        }
    }
    Ok(GridExperiment { target_spectrum: spectrum.to_vec(), target_times: times.to_vec(), rows })
}

impl GridExperiment {
    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.max_error).collect()
    }

    pub fn is_monotone_non_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].max_error <= w[0].max_error)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].max_error < w[0].max_error)
    }

    /// `error[k+1] / error[k]` for consecutive rows.
    pub fn decay_ratios(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| w[1].max_error / w[0].max_error).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("omega_uv,omega_ir,omega,max_error,bound\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{:e},{:e}", r.omega_uv, r.omega_ir, r.omega, r.max_error, r.bound);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clock(uv: f64, ir: f64) -> QuantumClock {
        QuantumClock::new(uv, ir).unwrap()
    }

    #[test]
    fn snap_examples() {
        let c = clock(2.0, 4.0);
        assert_eq!(snap(&c, 0.0, GridKind::Time).unwrap(), Snap { index: 0, snapped: 0.0, delta: 0.0 });
        let s = snap(&c, 0.7, GridKind::Time).unwrap();
        assert_eq!((s.index, s.snapped), (1, 0.5));
        assert!((s.delta - 0.2).abs() < 1e-15);
        assert!(matches!(snap(&c, 9.0, GridKind::Time), Err(ScalingError::OutOfRange { .. })));
    }

    #[test]
    fn snap_ties_go_down() {
        let c = clock(1.0, 8.0);
        assert_eq!(snap(&c, 0.5, GridKind::Time).unwrap().index, 0);
        assert_eq!(snap(&c, -0.5, GridKind::Time).unwrap().index, -1);
        assert_eq!(snap(&c, 1.0 / 16.0, GridKind::Energy).unwrap().index, 0);
    }

    #[test]
    fn snap_is_idempotent_on_grid() {
        let c = clock(4.0, 3.0);
        for n in c.labels().representatives() {
            let t = c.labels().time_of(n);
            let s = snap(&c, t, GridKind::Time).unwrap();
            assert_eq!((s.index, s.delta), (n, 0.0));
        }
    }

    #[test]
    fn error_examples() {
        assert_eq!(approximation_error(&[0.0], 0.37, &clock(8.0, 8.0)).unwrap(), 0.0);
        assert!(approximation_error(&[0.0, 0.75], 1.0, &clock(1.0, 4.0)).unwrap() <= 1e-9);
        let e = approximation_error(&[0.0, 1.0 / 3.0], 1.0, &clock(1.0, 4.0)).unwrap();
        let expected = (C64::from_polar(1.0, -2.0 * PI / 3.0) - C64::from_polar(1.0, -2.0 * PI / 4.0)).norm();
        assert!((e - expected).abs() < 1e-12);
        assert!(e > 0.1);
        assert_eq!(approximation_error(&[], 1.0, &clock(1.0, 4.0)), Err(ScalingError::EmptySpectrum));
    }

    #[test]
    fn bound_holds() {
        let spectrum = [0.13, -0.71, 1.4, 3.3];
        for (uv, ir) in [(2.0, 2.0), (4.0, 4.0), (8.0, 8.0)] {
            for t in [0.3, -0.4, 0.9] {
                let c = clock(uv, ir);
                assert!(approximation_error(&spectrum, t, &c).unwrap() <= error_bound(&spectrum, t, &c).unwrap());
            }
        }
    }

    #[test]
    fn study_shapes() {
        let empty = refinement_study(&[0.1], &[], &[(4.0, 4.0)]).unwrap();
        assert!(empty.rows.is_empty());
        assert_eq!(refinement_study(&[0.1], &[1.0], &[(8.0, 8.0), (4.0, 4.0)]), Err(ScalingError::UnsortedGrids));
        let on_grid = refinement_study(&[0.25, -0.5], &[1.0, 0.5], &[(4.0, 4.0), (8.0, 8.0)]).unwrap();
        assert!(on_grid.errors().iter().all(|&e| e <= 1e-9));
        assert!(on_grid.to_csv().starts_with("omega_uv,omega_ir,omega,max_error,bound\n4,4,16,"));
    }
}
