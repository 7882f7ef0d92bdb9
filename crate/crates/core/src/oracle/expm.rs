//! Dense matrix exponential by scaling and squaring of a Taylor series.

use nalgebra::DMatrix;

use crate::C64;

fn one_norm(a: &DMatrix<C64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)`.
///
/// The matrix is scaled by `2^{-s}` until its 1-norm is at most 1/2, the
/// series is summed until a term drops below `f64::EPSILON` relative to the
/// partial sum, and the result is squared `s` times.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * C64::new(0.5f64.powi(squarings), 0.0);

    let mut sum = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    for j in 1..=60 {
        term = &term * &scaled * C64::new(1.0 / j as f64, 0.0);
        sum += &term;
        if one_norm(&term) <= f64::EPSILON * one_norm(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
