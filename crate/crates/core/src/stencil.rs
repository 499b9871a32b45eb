//! Transition-rate sets and the Hamiltonians built from them.
//!
//! Finite-difference Laplacian stencils are stored as exact rationals and are
//! turned into transition rates by dividing every coefficient by `-2`. Rates
//! are then placed either on a dense matrix (for the direct oracle) or
//! consumed by the spectral kernel in [`crate::propagate`].

use nalgebra::DMatrix;
use num_rational::Rational64;

use crate::embedding::EmbeddingSpec;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StencilOrder {
    First,
    Tenth,
}

impl StencilOrder {
    pub fn from_number(order: u32) -> Result<Self> {
        match order {
            1 => Ok(Self::First),
            10 => Ok(Self::Tenth),
            other => Err(Error::UnknownOrder(other)),
        }
    }

    pub fn number(self) -> u32 {
        match self {
            Self::First => 1,
            Self::Tenth => 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    Truncated,
}

/// Sign convention for the nearest-neighbour line Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineConvention {
    /// Diagonal `-2γ`, neighbours `+γ`; the matrix used for the quantum walk.
    Quantum,
    /// Diagonal `+2γ`, neighbours `-γ`; rows sum to zero, as the classical
    /// master equation requires.
    Conservative,
}

/// Symmetric finite-difference stencil with grid spacing fixed at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StencilCoefficients {
    order: StencilOrder,
    half_width: usize,
    // index s + half_width
    coefficients: Vec<Rational64>,
}

impl StencilCoefficients {
    pub fn order(&self) -> StencilOrder {
        self.order
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Coefficient of `ψ(i + s)`; zero outside the stencil.
    pub fn coeff(&self, s: i64) -> Rational64 {
        if s.unsigned_abs() as usize > self.half_width {
            return Rational64::from_integer(0);
        }
        self.coefficients[(s + self.half_width as i64) as usize]
    }

    pub fn offsets(&self) -> impl Iterator<Item = i64> {
        let d = self.half_width as i64;
        -d..=d
    }

    pub fn sum(&self) -> Rational64 {
        self.coefficients.iter().copied().sum()
    }

    /// Transition rate for offset `s`, exactly: `coeff(s) / -2`.
    pub fn rate(&self, s: i64) -> Rational64 {
        self.coeff(s) / Rational64::from_integer(-2)
    }

    /// Multiple of `f''` the stencil approximates, `½ Σ coeff(s)·s²`.
    /// `1/2` for the first-order stencil as printed, `1` for the tenth-order one.
    pub fn derivative_scale(&self) -> Rational64 {
        let second: Rational64 = self
            .offsets()
            .map(|s| self.coeff(s) * Rational64::from_integer(s * s))
            .sum();
        second / Rational64::from_integer(2)
    }

    /// Applies the stencil to `samples` at index `i`. Panics if the stencil
    /// reaches outside `samples`.
    pub fn apply(&self, samples: &[f64], i: usize) -> f64 {
        self.offsets()
            .map(|s| {
                let c = self.coeff(s);
                let x = samples[(i as i64 + s) as usize];
                (*c.numer() as f64 / *c.denom() as f64) * x
            })
            .sum()
    }
}

pub fn laplacian_stencil(order: StencilOrder) -> StencilCoefficients {
    let (den, raw): (i64, &[i64]) = match order {
        StencilOrder::First => (2, &[1, -2, 1]),
        StencilOrder::Tenth => (
            25200,
            &[
                8, -125, 1000, -6000, 42000, -73766, 42000, -6000, 1000, -125, 8,
            ],
        ),
    };
    StencilCoefficients {
        order,
        half_width: raw.len() / 2,
        coefficients: raw.iter().map(|&c| Rational64::new(c, den)).collect(),
    }
}

/// Symmetric banded rate set `{γ_s : s ∈ [-d, d]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionRates {
    half_width: usize,
    rates: Vec<f64>,
}

impl TransitionRates {
    /// `rates[k]` is `γ_{k - d}`; the length must be odd.
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.len().is_multiple_of(2) {
            return Err(Error::InvalidSize(format!(
                "rate vector must have odd length 2d+1, got {}",
                rates.len()
            )));
        }
        if rates.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidParameter("rates must be finite".into()));
        }
        Ok(Self {
            half_width: rates.len() / 2,
            rates,
        })
    }

    /// Builds a symmetric set from `γ_0, γ_1, ..., γ_d`.
    pub fn symmetric(one_sided: &[f64]) -> Result<Self> {
        if one_sided.is_empty() {
            return Err(Error::InvalidSize("need at least γ_0".into()));
        }
        let rates = one_sided
            .iter()
            .rev()
            .chain(one_sided.iter().skip(1))
            .copied()
            .collect();
        Self::new(rates)
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn rate(&self, s: i64) -> f64 {
        if s.unsigned_abs() as usize > self.half_width {
            return 0.0;
        }
        self.rates[(s + self.half_width as i64) as usize]
    }

    /// `(s, γ_s)` pairs for `s = -d..=d`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let d = self.half_width as i64;
        self.rates
            .iter()
            .enumerate()
            .map(move |(k, &g)| (k as i64 - d, g))
    }

    /// Largest `|γ_s - γ_{-s}|`.
    pub fn asymmetry(&self) -> f64 {
        self.iter()
            .map(|(s, g)| (g - self.rate(-s)).abs())
            .fold(0.0, f64::max)
    }

    /// Rates with every hop stretched to `lambda·s`; offsets in between carry no rate.
    pub fn dilate(&self, lambda: usize) -> Result<Self> {
        if lambda == 0 {
            return Err(Error::InvalidParameter("lambda must be at least 1".into()));
        }
        let d = self.half_width * lambda;
        let mut rates = vec![0.0; 2 * d + 1];
        for (s, g) in self.iter() {
            rates[(s * lambda as i64 + d as i64) as usize] = g;
        }
        Ok(Self {
            half_width: d,
            rates,
        })
    }

    /// Coefficient `c` in the long-wavelength limit `H ≈ -c ∂²`, i.e. `-½ Σ γ_s s²`.
    pub fn diffusion_coefficient(&self) -> f64 {
        -0.5 * self.iter().map(|(s, g)| g * (s * s) as f64).sum::<f64>()
    }
}

pub fn stencil_to_rates(stencil: &StencilCoefficients) -> TransitionRates {
    let rates = stencil
        .offsets()
        .map(|s| {
            let r = stencil.rate(s);
            *r.numer() as f64 / *r.denom() as f64
        })
        .collect();
    TransitionRates {
        half_width: stencil.half_width(),
        rates,
    }
}

/// Real-symmetric `N × N` operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    entries: DMatrix<f64>,
    boundary: Boundary,
}

impl DenseOperator {
    pub fn new(entries: DMatrix<f64>, boundary: Boundary) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::InvalidSize(format!(
                "operator must be square and non-empty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self { entries, boundary })
    }

    pub fn from_rows(rows: &[&[f64]], boundary: Boundary) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSize("rows must form a square matrix".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]), boundary)
    }

    pub fn zeros(n: usize, boundary: Boundary) -> Result<Self> {
        Self::new(DMatrix::zeros(n, n), boundary)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.row_iter().map(|r| r.sum()).collect()
    }

    pub fn negated(&self) -> Self {
        Self {
            entries: -&self.entries,
            boundary: self.boundary,
        }
    }
}

/// Nearest-neighbour Hamiltonian on a line (`Truncated`) or ring (`Periodic`).
///
/// Truncated lines keep the diagonal at `∓2γ` at the end points too, as in
/// the printed tridiagonal matrix. A periodic ring of two nodes has a single
/// edge, so its diagonal is `∓γ` and rows still sum to zero.
pub fn line_hamiltonian(
    n: usize,
    gamma: f64,
    convention: LineConvention,
    boundary: Boundary,
) -> Result<DenseOperator> {
    if n < 2 {
        return Err(Error::InvalidSize(format!(
            "line needs at least 2 nodes, got {n}"
        )));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let sign = match convention {
        LineConvention::Quantum => 1.0,
        LineConvention::Conservative => -1.0,
    };
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n - 1 {
        m[(i, i + 1)] = sign * gamma;
        m[(i + 1, i)] = sign * gamma;
    }
    if boundary == Boundary::Periodic && n > 2 {
        m[(0, n - 1)] = sign * gamma;
        m[(n - 1, 0)] = sign * gamma;
    }
    let diag = if boundary == Boundary::Periodic && n == 2 {
        -sign * gamma
    } else {
        -2.0 * sign * gamma
    };
    for i in 0..n {
        m[(i, i)] = diag;
    }
    DenseOperator::new(m, boundary)
}

/// Places `γ_s` at `(i, i + s)`: wrapped modulo `n` for `Periodic`, dropped
/// when out of range for `Truncated`.
pub fn rates_to_dense(
    rates: &TransitionRates,
    n: usize,
    boundary: Boundary,
) -> Result<DenseOperator> {
    let d = rates.half_width();
    if n == 0 {
        return Err(Error::InvalidSize(
            "operator dimension must be positive".into(),
        ));
    }
    if boundary == Boundary::Periodic && n <= 2 * d {
        return Err(Error::SizeTooSmall { n, min: 2 * d });
    }
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for (s, g) in rates.iter() {
            if g == 0.0 {
                continue;
            }
            let j = i as i64 + s;
            match boundary {
                Boundary::Periodic => m[(i, j.rem_euclid(n as i64) as usize)] += g,
                Boundary::Truncated if (0..n as i64).contains(&j) => m[(i, j as usize)] += g,
                Boundary::Truncated => {}
            }
        }
    }
    DenseOperator::new(m, boundary)
}

/// Block-embedded Hamiltonian over `N·λ` grid elements: every node-to-node
/// rate `h[i][j]` becomes `h[i][j]·I` on an `m × m` block centred on the
/// node centres. Overlapping blocks accumulate.
pub fn embed_block_hamiltonian(h: &DenseOperator, spec: &EmbeddingSpec) -> Result<DenseOperator> {
    if h.dim() != spec.node_count() {
        return Err(Error::SpecMismatch(format!(
            "operator has {} nodes, embedding has {}",
            h.dim(),
            spec.node_count()
        )));
    }
    let n = spec.total_len() as i64;
    let m = spec.segment_width() as i64;
    let (lo, hi) = (-(m / 2), (m + 1) / 2);
    let mut out = DMatrix::zeros(n as usize, n as usize);
    for i in 0..spec.node_count() {
        let ki = spec.center(i) as i64;
        for j in 0..spec.node_count() {
            let g = h.get(i, j);
            if g == 0.0 {
                continue;
            }
            let kj = spec.center(j) as i64;
            for r in lo..hi {
                let (a, b) = (ki + r, kj + r);
                match h.boundary() {
                    Boundary::Periodic => {
                        out[(a.rem_euclid(n) as usize, b.rem_euclid(n) as usize)] += g;
                    }
                    Boundary::Truncated => {
                        if (0..n).contains(&a) && (0..n).contains(&b) {
                            out[(a as usize, b as usize)] += g;
                        }
                    }
                }
            }
        }
    }
    DenseOperator::new(out, h.boundary())
}
