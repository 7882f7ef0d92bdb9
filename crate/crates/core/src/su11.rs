//! Coherent-state kernels for the Heisenberg-Weyl and SU(1,1) groups.
//!
//! SU(1,1) coherent states are labelled by a Bargmann index `k` and a disk
//! coordinate `ζ = r e^{iθ}`. Their expansion over the ladder basis `|k, m⟩`
//! uses `τ = tanh(r) e^{-iθ}`, which is the phase choice under which
//! `⟨K₂⟩ = +k sinh 2r sin θ` and `⟨k, ζ_m | k, ζ_n⟩` depends on `θ_m − θ_n`
//! exactly as [`su11_overlap`] evaluates it.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::C64;

/// Reduces an angle to `(−π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Shortest signed difference `a − b`, in `(−π, π]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    normalize_angle(a - b)
}

/// Parameters of an SU(1,1) coherent state `|k, ζ⟩` with `ζ = r e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SU11Params {
    k: f64,
    r: f64,
    theta: f64,
}

impl SU11Params {
    pub fn new(k: f64, r: f64, theta: f64) -> Result<Self> {
        let (k, r) = validate_k_r(k, r)?;
        let theta = normalize_angle(finite("theta", theta)?);
        Ok(SU11Params { k, r, theta })
    }

    /// Bargmann index.
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn zeta(&self) -> C64 {
        C64::from_polar(self.r, self.theta)
    }
}

/// Parameters of a Heisenberg-Weyl coherent state `|α⟩`, `α = |α| e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HWParams {
    alpha_mag: f64,
    theta: f64,
}

impl HWParams {
    pub fn new(alpha_mag: f64, theta: f64) -> Result<Self> {
        let alpha_mag = finite("alpha_mag", alpha_mag)?;
        if alpha_mag < 0.0 {
            return Err(Error::InvalidParameter {
                name: "alpha_mag",
                value: alpha_mag,
                reason: "must be non-negative",
            });
        }
        let theta = normalize_angle(finite("theta", theta)?);
        Ok(HWParams { alpha_mag, theta })
    }

    pub fn alpha_mag(&self) -> f64 {
        self.alpha_mag
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha(&self) -> C64 {
        C64::from_polar(self.alpha_mag, self.theta)
    }
}

/// Expectation values `(⟨K₁⟩, ⟨K₂⟩, ⟨K₀⟩)` of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperboloidPoint {
    pub k1: f64,
    pub k2: f64,
    pub k0: f64,
}

impl HyperboloidPoint {
    /// `K₀² − K₁² − K₂²`, which equals `k²` on the upper sheet.
    pub fn casimir_radius_sqr(&self) -> f64 {
        self.k0 * self.k0 - self.k1 * self.k1 - self.k2 * self.k2
    }

    /// Projection onto the Poincaré disk seen from `(0, 0, −k)`.
    pub fn stereographic(&self, k: f64) -> C64 {
        C64::new(self.k1, self.k2) / (k + self.k0)
    }
}

/// Truncated expansion of `|k, ζ⟩` over `|k, 0⟩ … |k, cutoff⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderCoefficients {
    pub k: f64,
    pub cutoff: usize,
    pub coefficients: Vec<C64>,
    /// Rigorous upper bound on the discarded weight `Σ_{m>cutoff} |c_m|²`.
    pub tail_bound: f64,
}

impl LadderCoefficients {
    /// `⟨self | other⟩` over the shared truncated support.
    pub fn inner(&self, other: &LadderCoefficients) -> C64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }
}

fn validate_k_r(k: f64, r: f64) -> Result<(f64, f64)> {
    let k = finite("k", k)?;
    let r = finite("r", r)?;
    if k <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "k",
            value: k,
            reason: "Bargmann index must be positive",
        });
    }
    if r < 0.0 {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "squeeze radius must be non-negative",
        });
    }
    Ok((k, r))
}

/// `⟨k, r e^{iθ_m} | k, r e^{iθ_n}⟩ = [cosh²r − e^{i(θ_m−θ_n)} sinh²r]^{−2k}`.
///
/// The base is rewritten as `1 + sinh²r (1 − e^{iδ})`, which keeps full
/// relative precision at large `r`; its real part is at least 1, so the
/// principal logarithm is continuous in `δ`.
pub fn su11_overlap(k: f64, r: f64, dtheta: f64) -> Result<C64> {
    let (k, r) = validate_k_r(k, r)?;
    let dtheta = normalize_angle(finite("dtheta", dtheta)?);
    let s2 = r.sinh().powi(2);
    let half = (0.5 * dtheta).sin();
    let one_minus_phase = C64::new(2.0 * half * half, -dtheta.sin());
    let base = C64::new(1.0, 0.0) + one_minus_phase * s2;
    debug_assert!(base.re >= 1.0);
    Ok((base.ln() * (-2.0 * k)).exp())
}

/// `⟨α e^{iθ_m} | α e^{iθ_n}⟩ = exp[−|α|²(1 − e^{i(θ_n−θ_m)})]`.
///
/// Note the argument is `θ_n − θ_m`: the Heisenberg-Weyl expansion carries
/// `α^m` where the SU(1,1) one carries `τ^m = (tanh r e^{-iθ})^m`.
pub fn hw_overlap(alpha_mag: f64, dtheta: f64) -> Result<C64> {
    let alpha_mag = finite("alpha_mag", alpha_mag)?;
    let dtheta = finite("dtheta", dtheta)?;
    if alpha_mag < 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha_mag",
            value: alpha_mag,
            reason: "must be non-negative",
        });
    }
    let half = (0.5 * dtheta).sin();
    let one_minus_phase = C64::new(2.0 * half * half, -dtheta.sin());
    Ok((one_minus_phase * -(alpha_mag * alpha_mag)).exp())
}

pub fn hyperboloid_point(p: &SU11Params) -> HyperboloidPoint {
    let (s, c) = ((2.0 * p.r).sinh(), (2.0 * p.r).cosh());
    HyperboloidPoint {
        k1: p.k * s * p.theta.cos(),
        k2: p.k * s * p.theta.sin(),
        k0: p.k * c,
    }
}

pub fn disk_point(p: &SU11Params) -> C64 {
    C64::from_polar(p.r.tanh(), p.theta)
}

/// Phase-plane center `(x, p) = √2 |α| (cos θ, sin θ)`.
pub fn hw_center(p: &HWParams) -> (f64, f64) {
    let rho = std::f64::consts::SQRT_2 * p.alpha_mag;
    (rho * p.theta.cos(), rho * p.theta.sin())
}

/// `ln cosh r` without overflow.
fn ln_cosh(r: f64) -> f64 {
    let a = r.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Iterator over `ln |c_m|²` for `m = 0, 1, 2, …`.
///
/// Uses `|c_{m+1}|² / |c_m|² = t² (2k + m) / (m + 1)`, so no gamma functions
/// or factorials are ever formed.
struct LogWeights {
    k: f64,
    ln_t2: f64,
    m: usize,
    current: f64,
}

impl LogWeights {
    fn new(k: f64, r: f64) -> Self {
        let t = r.tanh();
        LogWeights {
            k,
            ln_t2: 2.0 * t.ln(),
            m: 0,
            current: -4.0 * k * ln_cosh(r),
        }
    }
}

impl Iterator for LogWeights {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.current;
        let m = self.m as f64;
        self.current += self.ln_t2 + ((2.0 * self.k + m) / (m + 1.0)).ln();
        self.m += 1;
        Some(out)
    }
}

/// Upper bound on `Σ_{m>cutoff} |c_m|²` for the expansion of `|k, ζ⟩`.
///
/// Successive weight ratios are `ρ(m) = t²(2k+m)/(m+1)`, monotone in `m` with
/// limit `t²`, so every ratio past the cutoff is at most
/// `q = max(ρ(cutoff+1), t²)` and the tail is dominated by a geometric series.
pub fn ladder_tail_bound(k: f64, r: f64, cutoff: usize) -> Result<f64> {
    let (k, r) = validate_k_r(k, r)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let ln_first = LogWeights::new(k, r).nth(cutoff + 1).unwrap();
    Ok(tail_from(k, r, cutoff, ln_first))
}

fn tail_from(k: f64, r: f64, cutoff: usize, ln_first: f64) -> f64 {
    let t2 = r.tanh().powi(2);
    let m = (cutoff + 1) as f64;
    let q = (t2 * (2.0 * k + m) / (m + 1.0)).max(t2);
    if q >= 1.0 {
        return 1.0;
    }
    (ln_first.exp() / (1.0 - q)).min(1.0)
}

/// Smallest cutoff whose tail bound is below `tolerance`.
pub fn required_cutoff(k: f64, r: f64, tolerance: f64) -> Result<usize> {
    let (k, r) = validate_k_r(k, r)?;
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tolerance",
            value: tolerance,
            reason: "must be positive",
        });
    }
    if r == 0.0 {
        return Ok(0);
    }
    // weights[cutoff + 1] drives the bound at `cutoff`
    for (idx, ln_w) in LogWeights::new(k, r).enumerate().skip(1) {
        let cutoff = idx - 1;
        if tail_from(k, r, cutoff, ln_w) < tolerance {
            return Ok(cutoff);
        }
    }
    unreachable!("LogWeights is infinite")
}

/// Expansion coefficients `c_m = (1−t²)^k √(Γ(2k+m)/(m! Γ(2k))) τ^m`,
/// `τ = tanh(r) e^{−iθ}`, for `m = 0..=cutoff`.
pub fn disk_coefficients(p: &SU11Params, cutoff: usize) -> LadderCoefficients {
    let mut coefficients = vec![C64::new(0.0, 0.0); cutoff + 1];
    if p.r == 0.0 {
        coefficients[0] = C64::new(1.0, 0.0);
        return LadderCoefficients {
            k: p.k,
            cutoff,
            coefficients,
            tail_bound: 0.0,
        };
    }
    let mut weights = LogWeights::new(p.k, p.r);
    for (m, (c, ln_w)) in coefficients.iter_mut().zip(&mut weights).enumerate() {
        *c = C64::from_polar((0.5 * ln_w).exp(), -(m as f64) * p.theta);
    }
    // `weights` has been advanced cutoff+1 times
    let ln_next = weights.next().unwrap();
    LadderCoefficients {
        k: p.k,
        cutoff,
        coefficients,
        tail_bound: tail_from(p.k, p.r, cutoff, ln_next),
    }
}

/// As [`disk_coefficients`], failing when the tail bound exceeds `tolerance`.
pub fn disk_coefficients_checked(
    p: &SU11Params,
    cutoff: usize,
    tolerance: f64,
) -> Result<LadderCoefficients> {
    let coeffs = disk_coefficients(p, cutoff);
    if coeffs.tail_bound > tolerance {
        return Err(Error::Truncation {
            cutoff,
            achieved_tail: coeffs.tail_bound,
            tolerance,
            required_cutoff: required_cutoff(p.k, p.r, tolerance)?,
        });
    }
    Ok(coeffs)
}

fn is_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

/// Single-mode Fock occupancy `2(m + k − 1/4)` of `|k, m⟩` in the
/// `K₊ = (a†)²/2` realization.
pub fn map_one_mode(k: f64, m: u64) -> Result<u64> {
    if is_close(k, 0.25) {
        Ok(2 * m)
    } else if is_close(k, 0.75) {
        Ok(2 * m + 1)
    } else {
        Err(Error::InvalidParameter {
            name: "k",
            value: k,
            reason: "one-mode realization requires k = 1/4 or 3/4",
        })
    }
}

/// Number of quanta `2k − 1` by which mode a exceeds mode b in the
/// `K₊ = a†b†` realization.
pub fn two_mode_offset(k: f64) -> Result<u64> {
    let twice = 2.0 * k;
    let rounded = twice.round();
    if !k.is_finite() || rounded < 1.0 || !is_close(twice, rounded) {
        return Err(Error::InvalidParameter {
            name: "k",
            value: k,
            reason: "two-mode realization requires k ∈ {1/2, 1, 3/2, …}",
        });
    }
    Ok(rounded as u64 - 1)
}

/// Pair occupancy `(m + 2k − 1, m)` of `|k, m⟩` in the `K₊ = a†b†` realization.
pub fn map_two_mode(k: f64, m: u64) -> Result<(u64, u64)> {
    Ok((m + two_mode_offset(k)?, m))
}
