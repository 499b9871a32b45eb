//! Continuous-time quantum random walks on lines, rings and 2D meshes.
//!
//! The crate provides two propagation engines for circulant Hamiltonians
//! built from symmetric transition rates: a dense Hermitian-exponential
//! oracle and the Fourier-shift spectral method, which diagonalizes the
//! circulant operator with the discrete Fourier transform. On top of these
//! sits the virtually-discrete embedding, where every node of the walk owns a
//! segment of a fine grid and the node spacing `lambda` can be shrunk below
//! the segment width `m` to drive the walk towards a continuum.

pub mod analytic;
pub mod bench;
pub mod embedding;
mod error;
pub mod metrics;
pub mod propagate;
pub mod state;
pub mod stencil;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod prelude {
    pub use crate::analytic::{
        analytic_node_distribution, classical_evolve, free_gaussian, FreePacketParams,
    };
    pub use crate::bench::{benchmark_efficiency, run_benchmark, BenchEngine, BenchRecord};
    pub use crate::embedding::{
        evolve_embedded, extract_nodes, gaussian_init, lambda_sweep, EmbeddingSpec,
        GaussianPacketSpec, NodeDistribution,
    };
    pub use crate::metrics::{spread_sigma, total_variation, QuadraticFit};
    pub use crate::propagate::{
        build_kernel, evolve_direct, evolve_fourier, evolve_fourier_2d, fourier_phase, shift_state,
        PhaseFactors, SpectralKernel,
    };
    pub use crate::state::{ComplexState, Grid2DState, ProbabilityVector};
    pub use crate::stencil::{
        embed_block_hamiltonian, laplacian_stencil, line_hamiltonian, rates_to_dense,
        stencil_to_rates, Boundary, DenseOperator, LineConvention, StencilCoefficients,
        StencilOrder, TransitionRates,
    };
    pub use crate::{Complex64, Error, Result};
}
