use crate::C64;

/// Errors produced by the walk, frame and oracle layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("`{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("invalid `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "coin amplitudes are not normalized (|a|^2 + |b|^2 = {norm_sqr}); \
         normalized suggestion: ({}, {})",
        fmt_c(suggestion.0),
        fmt_c(suggestion.1)
    )]
    UnnormalizedCoin {
        norm_sqr: f64,
        suggestion: (C64, C64),
    },

    #[error("coin operator is not unitary (max deviation {deviation:e})")]
    NonUnitaryCoin { deviation: f64 },

    #[error("site {site} outside [{min}, {max})")]
    SiteOutOfRange { site: i64, min: i64, max: i64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "ladder cutoff {cutoff} leaves tail {achieved_tail:e} above tolerance \
         {tolerance:e}; cutoff {required_cutoff} would suffice"
    )]
    Truncation {
        cutoff: usize,
        achieved_tail: f64,
        tolerance: f64,
        required_cutoff: usize,
    },

    #[error("Gram matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("Gram matrix is not Hermitian with unit diagonal (deviation {deviation:e})")]
    MalformedGram { deviation: f64 },

    #[error("coin expectation has imaginary part {imag:e}")]
    ComplexExpectation { imag: f64 },

    #[error("Bloch vector length {length} exceeds 1")]
    BlochOverflow { length: f64 },

    #[error("state has zero weight on every site")]
    ZeroNormalizer,

    #[error("{0}")]
    Realization(&'static str),
}

fn fmt_c(z: C64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}
