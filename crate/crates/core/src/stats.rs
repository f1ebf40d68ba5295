//! Scalar correlation and vectorization primitives.
//!
//! All accumulations run left to right over the input so that a result never
//! depends on how callers schedule work.

use crate::error::{Error, Result};

/// Pearson correlation of two equal-length samples.
///
/// Uses the two-pass centered form. The result is clamped to `[-1, 1]` to
/// absorb rounding overshoot. A zero-variance input is an error rather than
/// a silent zero.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Contract(format!(
            "pearson: length mismatch ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::Contract(format!(
            "pearson: need at least 2 observations, got {}",
            x.len()
        )));
    }
    if let Some(v) = x.iter().chain(y).find(|v| !v.is_finite()) {
        return Err(Error::Contract(format!("pearson: non-finite value {v}")));
    }
    let cx = Centered::new(x);
    let cy = Centered::new(y);
    if cx.is_constant() {
        return Err(Error::Degenerate("pearson: first vector has zero variance".into()));
    }
    if cy.is_constant() {
        return Err(Error::Degenerate("pearson: second vector has zero variance".into()));
    }
    Ok(cx.correlate(&cy))
}

/// A sample with its mean removed, plus the sum of squared deviations.
///
/// Correlating two `Centered` values gives bit-for-bit the same result as
/// [`pearson`] on the raw samples, so callers that correlate one vector
/// against many can center once.
#[derive(Debug, Clone)]
pub struct Centered {
    deviations: Vec<f64>,
    sum_sq: f64,
}

impl Centered {
    pub fn new(values: &[f64]) -> Self {
        let m = sum(values) / values.len() as f64;
        let deviations: Vec<f64> = values.iter().map(|v| v - m).collect();
        let sum_sq = deviations.iter().fold(0.0, |acc, d| acc + d * d);
        Centered { deviations, sum_sq }
    }

    pub fn is_constant(&self) -> bool {
        self.sum_sq == 0.0
    }

    pub fn len(&self) -> usize {
        self.deviations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deviations.is_empty()
    }

    /// Pearson correlation, clamped to `[-1, 1]`. Both sides must be
    /// non-constant and of equal length.
    pub fn correlate(&self, other: &Centered) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        let sxy = self
            .deviations
            .iter()
            .zip(&other.deviations)
            .fold(0.0, |acc, (a, b)| acc + a * b);
        (sxy / (self.sum_sq * other.sum_sq).sqrt()).clamp(-1.0, 1.0)
    }
}

/// Arithmetic mean with a fixed summation order.
pub fn mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Contract("mean of empty list".into()));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Contract(format!("mean: non-finite value {v}")));
    }
    Ok(sum(values) / values.len() as f64)
}

fn sum(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |acc, v| acc + v)
}

/// Number of strictly-upper-triangle entries of an `n x n` matrix.
pub const fn triangle_len(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Strictly-upper-triangle entries `(i < j)` of a row-major square matrix,
/// in row-major order.
pub fn upper_triangle(values: &[f64], n: usize) -> Result<Vec<f64>> {
    if values.len() != n * n {
        return Err(Error::Contract(format!(
            "upper_triangle: expected a square {n}x{n} matrix, got {} values",
            values.len()
        )));
    }
    if n < 3 {
        return Err(Error::Contract(format!(
            "upper_triangle: need n >= 3, got {n}"
        )));
    }
    let mut out = Vec::with_capacity(triangle_len(n));
    for i in 0..n {
        out.extend_from_slice(&values[i * n + i + 1..(i + 1) * n]);
    }
    Ok(out)
}
