//! Measurements on walk states whose site states need not be orthogonal.
//!
//! Every quantity goes through the Gram matrix `G[m][n] = ⟨site_m|site_n⟩`.
//! The frames used here are rotation orbits on a cycle, so `G` is circulant
//! and is stored as the single column `g[d] = G[d][0]`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::walk::WalkState;
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    generator: Vec<C64>,
    orthonormal: bool,
}

impl GramMatrix {
    pub fn new(frame: &Frame, sites: usize) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidParameter {
                name: "sites",
                value: 0.0,
                reason: "need at least one site",
            });
        }
        let generator = (0..sites)
            .map(|d| frame.kernel(d, sites))
            .collect::<Result<Vec<_>>>()?;
        Ok(GramMatrix {
            generator,
            orthonormal: frame.is_orthonormal(),
        })
    }

    pub fn identity(sites: usize) -> Self {
        let mut generator = vec![C64::new(0.0, 0.0); sites];
        generator[0] = C64::new(1.0, 0.0);
        GramMatrix {
            generator,
            orthonormal: true,
        }
    }

    pub fn sites(&self) -> usize {
        self.generator.len()
    }

    pub fn is_identity(&self) -> bool {
        self.orthonormal
    }

    /// `G[m][n]` by storage index.
    pub fn get(&self, m: usize, n: usize) -> C64 {
        let l = self.sites();
        self.generator[(m + l - n % l) % l]
    }

    /// First column, `G[d][0]` for `d = 0..L`.
    pub fn generator(&self) -> &[C64] {
        &self.generator
    }

    /// `G v`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        if self.orthonormal {
            return v.to_vec();
        }
        let l = self.sites();
        let nonzero: Vec<(usize, C64)> = v
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, x)| x.norm_sqr() > 0.0)
            .collect();
        (0..l)
            .map(|m| {
                nonzero
                    .iter()
                    .map(|&(n, x)| self.generator[(m + l - n) % l] * x)
                    .sum()
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let l = self.sites();
        DMatrix::from_fn(l, l, |m, n| self.get(m, n))
    }

    /// Largest of `|G[m][n] − conj(G[n][m])|` and `|G[n][n] − 1|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let l = self.sites();
        let diag = (self.generator[0] - C64::new(1.0, 0.0)).norm();
        (1..l)
            .map(|d| (self.generator[d] - self.generator[l - d].conj()).norm())
            .fold(diag, f64::max)
    }

    /// Eigenvalues `λ_j = Σ_d g[d] e^{−2πi jd/L}` of the circulant matrix.
    pub fn circulant_spectrum(&self) -> Vec<f64> {
        let l = self.sites();
        (0..l)
            .map(|j| {
                self.generator
                    .iter()
                    .enumerate()
                    .map(|(d, g)| {
                        let phase = -2.0 * PI * ((j * d) % l) as f64 / l as f64;
                        g * C64::from_polar(1.0, phase)
                    })
                    .sum::<C64>()
                    .re
            })
            .collect()
    }

    /// Smallest eigenvalue of the dense Hermitian matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let eig = nalgebra::SymmetricEigen::new(self.to_dense());
        eig.eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks Hermiticity, unit diagonal and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation > 1e-12 {
            return Err(Error::MalformedGram { deviation });
        }
        let min_eigenvalue = self
            .circulant_spectrum()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -1e-10 {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(())
    }
}

/// Normalized site distribution together with the raw projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityDistribution {
    /// `P_n` by storage index; label `n = index − ⌊L/2⌋`.
    pub p: Vec<f64>,
    /// `⟨site_n| ρ_w |site_n⟩` before normalization.
    pub raw: Vec<f64>,
    /// `N = Σ raw`.
    pub normalizer: f64,
}

impl ProbabilityDistribution {
    pub fn sites(&self) -> usize {
        self.p.len()
    }

    pub fn label(&self, index: usize) -> i64 {
        index as i64 - (self.sites() / 2) as i64
    }

    pub fn get(&self, label: i64) -> f64 {
        let l = self.sites() as i64;
        self.p[(label + l / 2).rem_euclid(l) as usize]
    }

    /// `(label, P_n)` pairs in label order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.p.iter().enumerate().map(|(i, &p)| (self.label(i), p))
    }

    /// Mass on sites with `n − start` odd.
    pub fn odd_mass(&self, start: i64) -> f64 {
        self.iter()
            .filter(|(n, _)| (n - start).rem_euclid(2) == 1)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn total_variation(&self, other: &ProbabilityDistribution) -> f64 {
        0.5 * self
            .p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

/// Coin Pauli expectations of the full walker ⊗ coin state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub mx: f64,
    pub my: f64,
    pub mz: f64,
}

impl BlochVector {
    pub fn length(&self) -> f64 {
        (self.mx * self.mx + self.my * self.my + self.mz * self.mz).sqrt()
    }

    /// `(1 + |M|) / 2`, the larger eigenvalue of the coin's reduced state.
    pub fn p_plus(&self) -> f64 {
        0.5 * (1.0 + self.length().min(1.0))
    }

    pub fn p_minus(&self) -> f64 {
        0.5 * (1.0 - self.length().min(1.0))
    }
}

/// Observables recorded after each step of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepObservables {
    pub step: usize,
    pub probabilities: ProbabilityDistribution,
    pub sigma: f64,
    pub bloch: BlochVector,
    pub entropy: f64,
    pub norm: f64,
}

fn check_dims(s: &WalkState, g: &GramMatrix) -> Result<()> {
    if s.sites() != g.sites() {
        return Err(Error::DimensionMismatch {
            expected: g.sites(),
            found: s.sites(),
        });
    }
    Ok(())
}

fn branches(s: &WalkState) -> [Vec<C64>; 2] {
    let a = s.amplitudes();
    [
        a.iter().map(|p| p[0]).collect(),
        a.iter().map(|p| p[1]).collect(),
    ]
}

fn bra_ket(bra: &[C64], ket: &[C64]) -> C64 {
    bra.iter().zip(ket).map(|(a, b)| a.conj() * b).sum()
}

/// `√(Σ_s ⟨c_s|G|c_s⟩)`, the Hilbert-space norm of the represented state.
pub fn state_norm(s: &WalkState, g: &GramMatrix) -> Result<f64> {
    check_dims(s, g)?;
    let c = branches(s);
    let sq: f64 = c.iter().map(|v| bra_ket(v, &g.apply(v)).re).sum();
    if sq < -1e-10 {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: sq });
    }
    Ok(sq.max(0.0).sqrt())
}

/// `P_n = Σ_s |⟨site_n|ψ_s⟩|² / N` with `⟨site_n|ψ_s⟩ = Σ_m G[n][m] c_{m,s}`.
pub fn probabilities(s: &WalkState, g: &GramMatrix) -> Result<ProbabilityDistribution> {
    check_dims(s, g)?;
    let [up, down] = branches(s);
    let (gu, gd) = (g.apply(&up), g.apply(&down));
    let raw: Vec<f64> = gu
        .iter()
        .zip(&gd)
        .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
        .collect();
    let normalizer: f64 = raw.iter().sum();
    if !(normalizer > 0.0) {
        return Err(Error::ZeroNormalizer);
    }
    Ok(ProbabilityDistribution {
        p: raw.iter().map(|r| r / normalizer).collect(),
        raw,
        normalizer,
    })
}

/// Circular-lattice spread `√(⟨θ²⟩ − ⟨θ⟩²)` with unwrapped `θ_n = n·2π/L`.
pub fn std_dev(p: &ProbabilityDistribution) -> f64 {
    let dtheta = 2.0 * PI / p.sites() as f64;
    let (m1, m2) = p.iter().fold((0.0, 0.0), |(m1, m2), (n, w)| {
        let th = n as f64 * dtheta;
        (m1 + w * th, m2 + w * th * th)
    });
    (m2 - m1 * m1).max(0.0).sqrt()
}

/// `M_i = ⟨ψ|σ_i|ψ⟩ / ⟨ψ|ψ⟩`.
///
/// The division only matters in paper-idealized mode, where the amplitudes
/// do not describe a unit vector once the Gram matrix is off-diagonal.
pub fn bloch_vector(s: &WalkState, g: &GramMatrix) -> Result<BlochVector> {
    check_dims(s, g)?;
    let [up, down] = branches(s);
    let (gu, gd) = (g.apply(&up), g.apply(&down));
    let uu = bra_ket(&up, &gu);
    let dd = bra_ket(&down, &gd);
    let ud = bra_ket(&up, &gd);
    let du = bra_ket(&down, &gu);

    let norm_sqr = uu + dd;
    let mx = ud + du;
    let my = C64::new(0.0, -1.0) * ud + C64::new(0.0, 1.0) * du;
    let mz = uu - dd;
    let scale = norm_sqr.re.abs().max(1.0);
    for z in [norm_sqr, mx, my, mz] {
        if z.im.abs() > 1e-10 * scale {
            return Err(Error::ComplexExpectation { imag: z.im });
        }
    }
    if !(norm_sqr.re > 0.0) {
        return Err(Error::ZeroNormalizer);
    }
    let b = BlochVector {
        mx: mx.re / norm_sqr.re,
        my: my.re / norm_sqr.re,
        mz: mz.re / norm_sqr.re,
    };
    if b.length() > 1.0 + 1e-8 {
        return Err(Error::BlochOverflow { length: b.length() });
    }
    Ok(b)
}

/// Binary entropy of the coin's reduced spectrum `{p₊, p₋}`, in bits.
pub fn entanglement_entropy(b: &BlochVector) -> f64 {
    binary_entropy(b.p_plus())
}

pub(crate) fn binary_entropy(p: f64) -> f64 {
    [p, 1.0 - p]
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

/// All per-step observables of `s`.
pub fn measure(s: &WalkState, g: &GramMatrix) -> Result<StepObservables> {
    let probabilities = probabilities(s, g)?;
    let bloch = bloch_vector(s, g)?;
    Ok(StepObservables {
        step: s.step_count(),
        sigma: std_dev(&probabilities),
        entropy: entanglement_entropy(&bloch),
        norm: state_norm(s, g)?,
        bloch,
        probabilities,
    })
}

/// Ordinary least-squares line `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    LinearFit {
        slope,
        intercept,
        r_squared: 1.0 - sse / syy,
    }
}
