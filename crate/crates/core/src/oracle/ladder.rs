use nalgebra::DMatrix;

use crate::su11::HyperboloidPoint;
use crate::C64;

/// Matrix elements of `K₊`, `K₋`, `K₀` on `|k, 0⟩ … |k, cutoff⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderOperators {
    pub k: f64,
    pub cutoff: usize,
}

impl LadderOperators {
    pub fn new(k: f64, cutoff: usize) -> Self {
        LadderOperators { k, cutoff }
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    /// `K₀|k,m⟩ = (k + m)|k,m⟩`.
    pub fn k0(&self, m: usize) -> f64 {
        self.k + m as f64
    }

    /// `⟨k,m+1|K₊|k,m⟩ = √((m+1)(m+2k))`.
    pub fn raise(&self, m: usize) -> f64 {
        let m = m as f64;
        ((m + 1.0) * (m + 2.0 * self.k)).sqrt()
    }

    /// `⟨k,m−1|K₋|k,m⟩ = √(m(m+2k−1))`.
    pub fn lower(&self, m: usize) -> f64 {
        let m = m as f64;
        (m * (m + 2.0 * self.k - 1.0)).sqrt()
    }

    pub fn k_zero(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                C64::new(self.k0(j), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn k_plus(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j + 1 {
                C64::new(self.raise(j), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn k_minus(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if j == i + 1 {
                C64::new(self.lower(j), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// `ζ* K₊ − ζ K₋`, the generator of `|k, ζ⟩` from `|k, 0⟩`.
    pub fn displacement_generator(&self, zeta: C64) -> DMatrix<C64> {
        self.k_plus() * zeta.conj() - self.k_minus() * zeta
    }

    /// Unnormalized `(⟨K₁⟩, ⟨K₂⟩, ⟨K₀⟩)` of a ladder vector.
    pub(crate) fn moments(&self, psi: &[C64]) -> HyperboloidPoint {
        let mut k0 = 0.0;
        let mut kp = C64::new(0.0, 0.0);
        for (m, c) in psi.iter().enumerate() {
            k0 += self.k0(m) * c.norm_sqr();
            if let Some(next) = psi.get(m + 1) {
                kp += next.conj() * c * self.raise(m);
            }
        }
        // K₋ = K₊†, so K₁ = Re⟨K₊⟩ and K₂ = Im⟨K₊⟩
        HyperboloidPoint {
            k1: kp.re,
            k2: kp.im,
            k0,
        }
    }
}
