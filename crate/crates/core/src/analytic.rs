//! Closed-form and classical reference dynamics.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::embedding::{extract_nodes, EmbeddingSpec, NodeDistribution};
use crate::propagate::SymmetricSpectrum;
use crate::state::{ComplexState, ProbabilityVector};
use crate::stencil::{DenseOperator, TransitionRates};
use crate::{Error, Result};

/// Row sums of a conservative rate matrix must vanish to this tolerance.
pub const CONSERVATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreePacketParams {
    pub width: f64,
    pub t: f64,
}

impl FreePacketParams {
    pub fn new(width: f64, t: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "packet width must be positive, got {width}"
            )));
        }
        Ok(Self { width, t })
    }

    pub fn amplitude(&self, x: f64) -> Complex64 {
        free_gaussian(x, self.t, self.width)
    }

    /// Standard deviation of `|ψ(x, t)|²`, `√(Δx² + t²/Δx²)`.
    pub fn sigma(&self) -> f64 {
        (self.width * self.width + (self.t / self.width).powi(2)).sqrt()
    }
}

/// Free Gaussian packet
/// `ψ(x,t) = (√(2π)(Δx + it/Δx))^{-1/2} · exp(−x² / (4(Δx² + it)))`,
/// the solution of `i∂ₜψ = −∂ₓ²ψ` with `|ψ(x,0)|²` of standard deviation Δx.
pub fn free_gaussian(x: f64, t: f64, width: f64) -> Complex64 {
    let spread = Complex64::new(width, t / width) * (2.0 * PI).sqrt();
    let denom = Complex64::new(width * width, t) * 4.0;
    (-x * x / denom).exp() / spread.sqrt()
}

/// Time at which the packet formula matches a walk with rates `rates` run
/// for `t`: the walk's long-wavelength generator is `−c∂²` with
/// `c = −½Σγ_s s²`, and the formula's generator is `−∂²`.
pub fn equivalent_free_time(rates: &TransitionRates, t: f64) -> f64 {
    rates.diffusion_coefficient() * t
}

/// The free packet centred on node 0, sampled on the grid with unit spacing
/// and summed over the same node windows as [`extract_nodes`].
pub fn analytic_node_distribution(
    spec: &EmbeddingSpec,
    width: f64,
    free_time: f64,
) -> Result<NodeDistribution> {
    let params = FreePacketParams::new(width, free_time)?;
    let j0 = spec.position(0)?;
    let samples = (0..spec.total_len())
        .map(|x| params.amplitude(spec.displacement(x, j0) as f64))
        .collect();
    extract_nodes(&ComplexState::new(samples)?, spec)
}

/// Master equation `P(t) = exp(−Ht) P(0)` for a conservative `H`.
/// Round-off negatives are clamped to zero; the output is not renormalized.
pub fn classical_evolve(
    h: &DenseOperator,
    p0: &ProbabilityVector,
    t: f64,
) -> Result<ProbabilityVector> {
    if h.dim() != p0.len() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: p0.len(),
        });
    }
    for (row, sum) in h.row_sums().into_iter().enumerate() {
        if sum.abs() > CONSERVATION_TOLERANCE {
            return Err(Error::NonConservative { row, sum });
        }
    }
    if h.max_asymmetry() > 1e-12 {
        return Err(Error::NonHermitian(
            "classical rate matrix must be symmetric".into(),
        ));
    }
    let spectrum = SymmetricSpectrum::of(h)?;
    let p = spectrum.apply_real(&DVector::from_column_slice(p0.as_slice()), |l| {
        (-l * t).exp()
    });
    ProbabilityVector::new(p.iter().map(|&v| v.max(0.0)).collect())
}
