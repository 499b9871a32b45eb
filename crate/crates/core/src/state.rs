//! Amplitude and probability vectors shared by every engine.

use num_complex::Complex64;

use crate::{Error, Result};

/// Complex amplitude vector over grid elements or nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexState {
    amplitudes: Vec<Complex64>,
}

impl ComplexState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty()
            || amplitudes
                .iter()
                .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::EmptyState);
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// One-hot state with amplitude 1 at `index`.
    pub fn basis(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(Error::IndexOutOfRange { index, len });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); len];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns `self / ‖self‖`.
    pub fn normalize(&self) -> Result<Self> {
        let norm = self.l2_norm();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / norm;
        Ok(Self {
            amplitudes: self.amplitudes.iter().map(|a| a * inv).collect(),
        })
    }

    /// `|a_i|² / Σ|a_j|²`.
    pub fn probabilities(&self) -> Result<ProbabilityVector> {
        let total = self.norm_sqr();
        if total == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(ProbabilityVector {
            probabilities: self
                .amplitudes
                .iter()
                .map(|a| a.norm_sqr() / total)
                .collect(),
        })
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Non-negative real distribution. Constructors do not force the sum to one;
/// use [`ProbabilityVector::normalized`] for that.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    probabilities: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::EmptyState);
        }
        if let Some(bad) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "probabilities must be finite and non-negative, got {bad}"
            )));
        }
        Ok(Self { probabilities })
    }

    pub fn normalized(values: Vec<f64>) -> Result<Self> {
        let mut pv = Self::new(values)?;
        let total = pv.total();
        if total == 0.0 {
            return Err(Error::ZeroNorm);
        }
        pv.probabilities.iter_mut().for_each(|p| *p /= total);
        Ok(pv)
    }

    /// Point mass at `index`.
    pub fn delta(len: usize, index: usize) -> Result<Self> {
        if index >= len {
            return Err(Error::IndexOutOfRange { index, len });
        }
        let mut probabilities = vec![0.0; len];
        probabilities[index] = 1.0;
        Ok(Self { probabilities })
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probabilities
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// Row-major `nx × ny` amplitude grid; element `(i, j)` lives at `i * ny + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2DState {
    nx: usize,
    ny: usize,
    amplitudes: Vec<Complex64>,
}

impl Grid2DState {
    pub fn new(nx: usize, ny: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidSize(format!(
                "grid must be non-empty, got {nx}x{ny}"
            )));
        }
        if amplitudes.len() != nx * ny {
            return Err(Error::DimensionMismatch {
                expected: nx * ny,
                found: amplitudes.len(),
            });
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::InvalidParameter(
                "grid amplitudes must be finite".into(),
            ));
        }
        Ok(Self { nx, ny, amplitudes })
    }

    /// `u ⊗ v`, with `u` along x (rows) and `v` along y (columns).
    pub fn outer(u: &ComplexState, v: &ComplexState) -> Self {
        let amplitudes = u
            .amplitudes()
            .iter()
            .flat_map(|a| v.amplitudes().iter().map(move |b| a * b))
            .collect();
        Self {
            nx: u.len(),
            ny: v.len(),
            amplitudes,
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.amplitudes[i * self.ny + j]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.nx != other.nx || self.ny != other.ny {
            return Err(Error::DimensionMismatch {
                expected: self.nx * self.ny,
                found: other.nx * other.ny,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}
