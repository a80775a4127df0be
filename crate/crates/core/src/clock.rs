//! Quantum clocks: a cyclic strongly complementary pair with physical
//! time and energy grid labels.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::coherent::{check_strong_complementarity, CoherentGroup};
use crate::report::LawReport;
use crate::tensor::Tensor;

/// Relative tolerance on `ω_uv · ω_ir` being an integer.
pub const VOLUME_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClockError {
    #[error("grid parameters must be positive and finite, got omega_uv={omega_uv}, omega_ir={omega_ir}")]
    InvalidLabel { omega_uv: f64, omega_ir: f64 },

    #[error("omega_uv * omega_ir = {product} is not a positive integer")]
    NonIntegerVolume { product: f64 },
}

/// Grid parameters. `ω_uv` sets the time resolution, `ω_ir` the energy
/// resolution, and `ω = ω_uv · ω_ir` counts time (and energy) states.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClockLabels {
    omega_uv: Ratio<i64>,
    omega_ir: Ratio<i64>,
    omega: usize,
}

fn to_ratio(x: f64) -> Option<Ratio<i64>> {
    if x.fract() == 0.0 && x.abs() < i64::MAX as f64 {
        return Some(Ratio::from_integer(x as i64));
    }
    Ratio::approximate_float(x)
}

impl ClockLabels {
    pub fn new(omega_uv: f64, omega_ir: f64) -> Result<Self, ClockError> {
        let bad = ClockError::InvalidLabel { omega_uv, omega_ir };
        if !(omega_uv.is_finite() && omega_ir.is_finite() && omega_uv > 0.0 && omega_ir > 0.0) {
            return Err(bad);
        }
        let product = omega_uv * omega_ir;
        let omega = product.round();
        if omega < 1.0 || (product - omega).abs() > VOLUME_TOL * omega || omega > u32::MAX as f64 {
            return Err(ClockError::NonIntegerVolume { product });
        }
        let uv = to_ratio(omega_uv).filter(|r| *r.numer() > 0).ok_or(bad.clone())?;
        // ω_ir = ω / ω_uv, kept exact so the product is integral
        let num = omega as i128 * *uv.denom() as i128;
        let den = *uv.numer() as i128;
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        if num > i64::MAX as i128 || den > i64::MAX as i128 {
            return Err(bad);
        }
        Ok(Self { omega_uv: uv, omega_ir: Ratio::new(num as i64, den as i64), omega: omega as usize })
    }

    /// Integer grid `ω_uv = 1`, `ω_ir = ω`.
    pub fn integer(omega: usize) -> Result<Self, ClockError> {
        if omega == 0 {
            return Err(ClockError::NonIntegerVolume { product: 0.0 });
        }
        Ok(Self {
            omega_uv: Ratio::from_integer(1),
            omega_ir: Ratio::from_integer(omega as i64),
            omega,
        })
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn omega_uv(&self) -> f64 {
        ratio_f64(&self.omega_uv)
    }

    pub fn omega_ir(&self) -> f64 {
        ratio_f64(&self.omega_ir)
    }

    pub fn omega_uv_exact(&self) -> Ratio<i64> {
        self.omega_uv
    }

    pub fn omega_ir_exact(&self) -> Ratio<i64> {
        self.omega_ir
    }

    /// Balanced representative of `n mod ω` in `{−⌊(ω−1)/2⌋, …, ⌊ω/2⌋}`.
    pub fn representative(&self, n: i64) -> i64 {
        let w = self.omega as i64;
        let r = n.rem_euclid(w);
        if r > w / 2 {
            r - w
        } else {
            r
        }
    }

    /// Residue `n mod ω` in `0..ω`.
    pub fn residue(&self, n: i64) -> usize {
        n.rem_euclid(self.omega as i64) as usize
    }

    /// Representatives in ascending order.
    pub fn representatives(&self) -> impl Iterator<Item = i64> {
        let w = self.omega as i64;
        -((w - 1) / 2)..=w / 2
    }

    pub fn time_of(&self, n: i64) -> f64 {
        self.representative(n) as f64 / self.omega_uv()
    }

    pub fn energy_of(&self, m: i64) -> f64 {
        self.representative(m) as f64 / self.omega_ir()
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

fn ratio_f64(r: &Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `e^{+i2πk/ω}` for a residue `k`.
pub(crate) fn root_of_unity(k: usize, omega: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * (k % omega) as f64 / omega as f64)
}

/// A cyclic pair of dimension `ω` together with its grid labels.
#[derive(Clone)]
pub struct QuantumClock {
    group: CoherentGroup,
    labels: ClockLabels,
}

impl fmt::Debug for QuantumClock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuantumClock")
            .field("omega_uv", &self.labels.omega_uv)
            .field("omega_ir", &self.labels.omega_ir)
            .field("omega", &self.labels.omega)
            .finish()
    }
}

impl PartialEq for QuantumClock {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl QuantumClock {
    pub fn new(omega_uv: f64, omega_ir: f64) -> Result<Self, ClockError> {
        Self::from_labels(ClockLabels::new(omega_uv, omega_ir)?)
    }

    /// Clock with `ω_uv = 1`, `ω_ir = ω`.
    pub fn with_omega(omega: usize) -> Result<Self, ClockError> {
        Self::from_labels(ClockLabels::integer(omega)?)
    }

    pub fn from_labels(labels: ClockLabels) -> Result<Self, ClockError> {
        let group = CoherentGroup::cyclic_pair(labels.omega)
            .map_err(|_| ClockError::NonIntegerVolume { product: labels.omega as f64 })?;
        Ok(Self { group, labels })
    }

    pub fn labels(&self) -> &ClockLabels {
        &self.labels
    }

    pub fn omega(&self) -> usize {
        self.labels.omega
    }

    pub fn group(&self) -> &CoherentGroup {
        &self.group
    }

    /// Full strong-complementarity report of the underlying pair.
    pub fn check(&self, tol: f64) -> LawReport {
        check_strong_complementarity(&self.group, tol)
    }

    /// `|t_n⟩`, the basis state at index `n mod ω`.
    pub fn time_state(&self, n: i64) -> Tensor {
        Tensor::basis_state(self.omega(), self.labels.residue(n)).expect("residue in range")
    }

    /// Plane wave `|E_m⟩ = Σ_n e^{+i2πmn/ω} |t_n⟩`, squared norm `ω`.
    pub fn energy_state(&self, m: i64) -> Tensor {
        let w = self.omega();
        let m = self.labels.residue(m);
        let amps = (0..w).map(|n| root_of_unity(mul_mod(m, n, w), w)).collect();
        Tensor::state(amps).expect("ω > 0")
    }

    /// `⟨E_m|t_n⟩ = e^{−i2πmn/ω}`.
    pub fn pairing_phase(&self, m: i64, n: i64) -> C64 {
        let w = self.omega();
        let k = mul_mod(self.labels.residue(m), self.labels.residue(n), w);
        root_of_unity(k, w).conj()
    }

    /// `T_n |t_k⟩ = |t_{k+n}⟩`.
    pub fn time_translation(&self, n: i64) -> Tensor {
        self.group.left_regular_action(n)
    }

    /// `S_m = diag(e^{+i2πmk/ω})`, the `Z` multiplication by `|E_m⟩`.
    pub fn energy_shift(&self, m: i64) -> Tensor {
        let w = self.omega();
        let m = self.labels.residue(m);
        let diag: Vec<C64> = (0..w).map(|k| root_of_unity(mul_mod(m, k, w), w)).collect();
        Tensor::diagonal(&diag).expect("ω > 0")
    }
}

pub(crate) fn mul_mod(a: usize, b: usize, w: usize) -> usize {
    ((a as u128 * b as u128) % w as u128) as usize
}

#[derive(Serialize, Deserialize)]
struct ClockJson {
    omega_uv: f64,
    omega_ir: f64,
}

impl Serialize for QuantumClock {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ClockJson { omega_uv: self.labels.omega_uv(), omega_ir: self.labels.omega_ir() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuantumClock {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ClockJson::deserialize(d)?;
        QuantumClock::new(j.omega_uv, j.omega_ir).map_err(serde::de::Error::custom)
    }
}
