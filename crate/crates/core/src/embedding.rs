//! Virtually-discrete state space.
//!
//! Each of the `N` nodes of the walk owns a window of `m` grid elements
//! centred on its element `κ_i`; consecutive centres are `λ` elements apart.
//! With `λ = m` the windows tile the grid and the walk is discrete. With
//! `λ < m` neighbouring windows overlap and the walk approaches a wave on a
//! continuous line.

use num_complex::Complex64;

use crate::propagate::{build_kernel, evolve_fourier, evolve_fourier_2d, SpectralKernel};
use crate::state::{ComplexState, Grid2DState, ProbabilityVector};
use crate::stencil::TransitionRates;
use crate::{Error, Result};

/// Geometry of the node-to-grid mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EmbeddingSpec {
    node_count: usize,
    lambda: usize,
    segment_width: usize,
}

impl EmbeddingSpec {
    pub fn new(node_count: usize, lambda: usize, segment_width: usize) -> Result<Self> {
        if node_count == 0 || lambda == 0 || segment_width == 0 {
            return Err(Error::InvalidParameter(format!(
                "nodes, lambda and m must be positive (got {node_count}, {lambda}, {segment_width})"
            )));
        }
        if lambda > segment_width {
            return Err(Error::InvalidParameter(format!(
                "lambda must not exceed m (lambda = {lambda}, m = {segment_width})"
            )));
        }
        if segment_width > node_count * lambda {
            return Err(Error::InvalidParameter(format!(
                "segment width {segment_width} exceeds the grid length {}",
                node_count * lambda
            )));
        }
        Ok(Self {
            node_count,
            lambda,
            segment_width,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn segment_width(&self) -> usize {
        self.segment_width
    }

    pub fn total_len(&self) -> usize {
        self.node_count * self.lambda
    }

    /// Grid element `κ_j` of node position `j` (0-based).
    pub fn center(&self, j: usize) -> usize {
        j * self.lambda + self.lambda / 2
    }

    /// Labels run `-(N-1)/2 ..= N/2`, i.e. `-79..=80` for 160 nodes.
    pub fn label(&self, j: usize) -> i64 {
        j as i64 - self.origin() as i64
    }

    pub fn labels(&self) -> Vec<i64> {
        (0..self.node_count).map(|j| self.label(j)).collect()
    }

    /// Node position of `label`.
    pub fn position(&self, label: i64) -> Result<usize> {
        let j = label + self.origin() as i64;
        if !(0..self.node_count as i64).contains(&j) {
            return Err(Error::NodeOutOfRange {
                node: label,
                min: self.label(0),
                max: self.label(self.node_count - 1),
            });
        }
        Ok(j as usize)
    }

    /// Grid elements and quadrature weights of the window of node position
    /// `j`, wrapped periodically. Odd `m` covers `κ ± (m-1)/2` with unit
    /// weights; even `m` covers `κ ± m/2` with half weights at both ends, so
    /// every window is symmetric about its centre and has total weight `m`.
    pub fn window(&self, j: usize) -> impl Iterator<Item = (usize, f64)> {
        let n = self.total_len() as i64;
        let m = self.segment_width as i64;
        let c = self.center(j) as i64;
        let half = m / 2;
        let even = m % 2 == 0;
        (-half..=half).map(move |r| {
            let w = if even && r.abs() == half { 0.5 } else { 1.0 };
            ((c + r).rem_euclid(n) as usize, w)
        })
    }

    /// Signed periodic displacement of element `x` from node position `j`, in `[-n/2, n/2)`.
    pub fn displacement(&self, x: usize, j: usize) -> i64 {
        let n = self.total_len() as i64;
        let d = (x as i64 - self.center(j) as i64).rem_euclid(n);
        if 2 * d >= n {
            d - n
        } else {
            d
        }
    }

    fn origin(&self) -> usize {
        (self.node_count - 1) / 2
    }
}

/// Gaussian walker profile placed on one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacketSpec {
    pub center_node: i64,
    /// Δx in grid elements.
    pub width: f64,
    /// Global phase applied after normalization.
    pub phase: Complex64,
}

impl GaussianPacketSpec {
    pub fn new(center_node: i64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "packet width must be positive, got {width}"
            )));
        }
        Ok(Self {
            center_node,
            width,
            phase: Complex64::new(1.0, 0.0),
        })
    }

    /// The packet stays inside its segment only when `m ≥ 4Δx`.
    pub fn fits_segment(&self, segment_width: usize) -> bool {
        segment_width as f64 >= 4.0 * self.width
    }
}

/// `exp(-d²/(4Δx²))` on `n` elements around `center`, periodic, unit norm.
pub fn gaussian_profile(n: usize, center: usize, width: f64) -> Result<ComplexState> {
    let spec = EmbeddingSpec {
        node_count: n,
        lambda: 1,
        segment_width: 1,
    };
    let values: Vec<f64> = (0..n)
        .map(|x| {
            let d = spec.displacement(x, center) as f64;
            (-d * d / (4.0 * width * width)).exp()
        })
        .collect();
    ComplexState::from_real(&values)?.normalize()
}

pub fn gaussian_init(spec: &EmbeddingSpec, packet: &GaussianPacketSpec) -> Result<ComplexState> {
    let j = spec.position(packet.center_node)?;
    if packet.width.is_nan() || packet.width <= 0.0 {
        return Err(Error::InvalidParameter(
            "packet width must be positive".into(),
        ));
    }
    let w = packet.width;
    let values: Vec<Complex64> = (0..spec.total_len())
        .map(|x| {
            let d = spec.displacement(x, j) as f64;
            Complex64::new((-d * d / (4.0 * w * w)).exp(), 0.0)
        })
        .collect();
    let state = ComplexState::new(values)?.normalize()?;
    if packet.phase == Complex64::new(1.0, 0.0) {
        return Ok(state);
    }
    let norm = packet.phase.norm();
    if norm == 0.0 {
        return Err(Error::InvalidParameter(
            "packet phase must be non-zero".into(),
        ));
    }
    let phase = packet.phase / norm;
    ComplexState::new(state.amplitudes().iter().map(|a| a * phase).collect())
}

/// Walker amplitudes and probabilities per node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeDistribution {
    labels: Vec<i64>,
    amplitudes: Option<Vec<Complex64>>,
    probabilities: ProbabilityVector,
}

impl NodeDistribution {
    /// Distribution without amplitudes, e.g. from a classical walk.
    pub fn from_probabilities(labels: Vec<i64>, probabilities: ProbabilityVector) -> Result<Self> {
        if labels.len() != probabilities.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: probabilities.len(),
            });
        }
        Ok(Self {
            labels,
            amplitudes: None,
            probabilities,
        })
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        self.amplitudes.as_deref()
    }

    pub fn probabilities(&self) -> &ProbabilityVector {
        &self.probabilities
    }

    pub fn probability(&self, label: i64) -> Option<f64> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|k| self.probabilities.as_slice()[k])
    }

    /// Largest `|p(i) - p(-i)|` over labels whose mirror image exists.
    pub fn parity_deviation(&self) -> f64 {
        self.labels
            .iter()
            .zip(self.probabilities.as_slice())
            .filter_map(|(&l, &p)| self.probability(-l).map(|q| (p - q).abs()))
            .fold(0.0, f64::max)
    }

    /// Labels attaining the maximum probability (within `tol`).
    pub fn argmax_labels(&self, tol: f64) -> Vec<i64> {
        let p = self.probabilities.as_slice();
        let max = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.labels
            .iter()
            .zip(p)
            .filter(|(_, &v)| v >= max - tol)
            .map(|(&l, _)| l)
            .collect()
    }
}

/// Node amplitude = coherent weighted sum over the node's window;
/// probabilities are renormalized since overlapping windows count elements
/// more than once.
pub fn extract_nodes(state: &ComplexState, spec: &EmbeddingSpec) -> Result<NodeDistribution> {
    if state.len() != spec.total_len() {
        return Err(Error::DimensionMismatch {
            expected: spec.total_len(),
            found: state.len(),
        });
    }
    let a = state.amplitudes();
    let amplitudes: Vec<Complex64> = (0..spec.node_count())
        .map(|j| spec.window(j).map(|(x, w)| a[x] * w).sum())
        .collect();
    let probabilities =
        ProbabilityVector::normalized(amplitudes.iter().map(|z| z.norm_sqr()).collect())?;
    Ok(NodeDistribution {
        labels: spec.labels(),
        amplitudes: Some(amplitudes),
        probabilities,
    })
}

/// Kernel for walking `rates` on the embedding's grid with hops stretched by λ.
pub fn embedded_kernel(rates: &TransitionRates, spec: &EmbeddingSpec) -> Result<SpectralKernel> {
    build_kernel(rates, spec.total_len(), spec.lambda())
}

/// Initializes the packet on the grid and evolves it to time `t`.
pub fn evolve_embedded(
    rates: &TransitionRates,
    spec: &EmbeddingSpec,
    packet: &GaussianPacketSpec,
    t: f64,
) -> Result<ComplexState> {
    let kernel = embedded_kernel(rates, spec)?;
    evolve_fourier(&gaussian_init(spec, packet)?, &kernel, t)
}

/// One λ of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub lambda: usize,
    pub distribution: NodeDistribution,
    /// l2 norm of the evolved grid state.
    pub state_norm: f64,
}

/// Runs the walk for each λ, keeping `N`, `m`, Δx and `t` fixed.
/// The packet starts on node 0.
pub fn sweep_points(
    base_rates: &TransitionRates,
    nodes: usize,
    m: usize,
    lambdas: &[usize],
    dx: f64,
    t: f64,
) -> Result<Vec<SweepPoint>> {
    let packet = GaussianPacketSpec::new(0, dx)?;
    lambdas
        .iter()
        .map(|&lambda| {
            let spec = EmbeddingSpec::new(nodes, lambda, m)?;
            let state = evolve_embedded(base_rates, &spec, &packet, t)?;
            Ok(SweepPoint {
                lambda,
                distribution: extract_nodes(&state, &spec)?,
                state_norm: state.l2_norm(),
            })
        })
        .collect()
}

pub fn lambda_sweep(
    base_rates: &TransitionRates,
    nodes: usize,
    m: usize,
    lambdas: &[usize],
    dx: f64,
    t: f64,
) -> Result<Vec<NodeDistribution>> {
    Ok(sweep_points(base_rates, nodes, m, lambdas, dx, t)?
        .into_iter()
        .map(|p| p.distribution)
        .collect())
}

/// Node probabilities on a 2D mesh, row-major over (x label, y label).
#[derive(Debug, Clone, PartialEq)]
pub struct NodeGrid {
    pub labels_x: Vec<i64>,
    pub labels_y: Vec<i64>,
    pub probabilities: ProbabilityVector,
}

impl NodeGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.probabilities.as_slice()[i * self.labels_y.len() + j]
    }

    /// Σ_j p(i, j).
    pub fn x_marginal(&self) -> Vec<f64> {
        self.probabilities
            .as_slice()
            .chunks_exact(self.labels_y.len())
            .map(|row| row.iter().sum())
            .collect()
    }

    pub fn y_marginal(&self) -> Vec<f64> {
        let ny = self.labels_y.len();
        let mut out = vec![0.0; ny];
        for row in self.probabilities.as_slice().chunks_exact(ny) {
            out.iter_mut().zip(row).for_each(|(o, p)| *o += p);
        }
        out
    }
}

/// Product packet `G_x ⊗ G_y` on the 2D grid.
pub fn gaussian_init_2d(
    spec_x: &EmbeddingSpec,
    spec_y: &EmbeddingSpec,
    packet: &GaussianPacketSpec,
) -> Result<Grid2DState> {
    let u = gaussian_init(spec_x, packet)?;
    let v = gaussian_init(spec_y, packet)?;
    Ok(Grid2DState::outer(&u, &v))
}

pub fn extract_nodes_2d(
    state: &Grid2DState,
    spec_x: &EmbeddingSpec,
    spec_y: &EmbeddingSpec,
) -> Result<NodeGrid> {
    if state.nx() != spec_x.total_len() || state.ny() != spec_y.total_len() {
        return Err(Error::DimensionMismatch {
            expected: spec_x.total_len() * spec_y.total_len(),
            found: state.nx() * state.ny(),
        });
    }
    let windows_y: Vec<Vec<(usize, f64)>> = (0..spec_y.node_count())
        .map(|j| spec_y.window(j).collect())
        .collect();
    let ny = state.ny();
    let mut probs = Vec::with_capacity(spec_x.node_count() * spec_y.node_count());
    for i in 0..spec_x.node_count() {
        // sum each x window once, then the y windows of that partial sum
        let mut partial = vec![Complex64::new(0.0, 0.0); ny];
        for (x, wx) in spec_x.window(i) {
            partial
                .iter_mut()
                .zip(&state.amplitudes()[x * ny..(x + 1) * ny])
                .for_each(|(p, a)| *p += a * wx);
        }
        for w in &windows_y {
            let amp: Complex64 = w.iter().map(|&(y, wy)| partial[y] * wy).sum();
            probs.push(amp.norm_sqr());
        }
    }
    Ok(NodeGrid {
        labels_x: spec_x.labels(),
        labels_y: spec_y.labels(),
        probabilities: ProbabilityVector::normalized(probs)?,
    })
}

/// Full 2D walk: product packet on node (0, 0), `rates_x` along x and
/// `rates_y` along y. Returns the evolved grid state.
pub fn evolve_embedded_2d(
    rates_x: &TransitionRates,
    rates_y: &TransitionRates,
    spec_x: &EmbeddingSpec,
    spec_y: &EmbeddingSpec,
    packet: &GaussianPacketSpec,
    t: f64,
) -> Result<Grid2DState> {
    let kx = embedded_kernel(rates_x, spec_x)?;
    let ky = embedded_kernel(rates_y, spec_y)?;
    evolve_fourier_2d(&gaussian_init_2d(spec_x, spec_y, packet)?, &kx, &ky, t)
}
