//! Distances, spreads and curve fits.

use nalgebra::{DMatrix, DVector};

use crate::embedding::NodeDistribution;
use crate::state::ProbabilityVector;
use crate::{Error, Result};

/// `½ Σ |p_i − q_i|`.
pub fn total_variation(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    total_variation_slices(p.as_slice(), q.as_slice())
}

pub fn total_variation_slices(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Standard deviation of the node label under the distribution.
pub fn spread_sigma(dist: &NodeDistribution) -> f64 {
    let p = dist.probabilities().as_slice();
    let labels = dist.labels();
    let mean: f64 = labels.iter().zip(p).map(|(&i, &w)| w * i as f64).sum();
    let second: f64 = labels
        .iter()
        .zip(p)
        .map(|(&i, &w)| w * (i * i) as f64)
        .sum();
    (second - mean * mean).max(0.0).sqrt()
}

/// Pearson correlation of `(x, y)` pairs.
pub fn linear_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidSize(
            "correlation needs at least two points".into(),
        ));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Least-squares `y ≈ c0 + c1·x + c2·x²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFit {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// RMS of the fit residuals.
    pub residual: f64,
}

impl QuadraticFit {
    pub fn fit(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        if x.len() < 3 {
            return Err(Error::InvalidSize(
                "quadratic fit needs at least three points".into(),
            ));
        }
        // centre and scale x so the Vandermonde columns stay well conditioned
        let n = x.len();
        let shift = x.iter().sum::<f64>() / n as f64;
        let scale = x
            .iter()
            .map(|v| (v - shift).abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let a = DMatrix::from_fn(n, 3, |i, j| ((x[i] - shift) / scale).powi(j as i32));
        let b = DVector::from_column_slice(y);
        let coef = a
            .clone()
            .svd(true, true)
            .solve(&b, 1e-14)
            .map_err(|e| Error::InvalidParameter(format!("quadratic fit failed: {e}")))?;
        let (a0, a1, a2) = (coef[0], coef[1] / scale, coef[2] / (scale * scale));
        let fit = Self {
            c0: a0 - a1 * shift + a2 * shift * shift,
            c1: a1 - 2.0 * a2 * shift,
            c2: a2,
            residual: 0.0,
        };
        let rss: f64 = x
            .iter()
            .zip(y)
            .map(|(&xi, &yi)| (fit.eval(xi) - yi).powi(2))
            .sum();
        Ok(Self {
            residual: (rss / n as f64).sqrt(),
            ..fit
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.c0 + self.c1 * x + self.c2 * x * x
    }
}
