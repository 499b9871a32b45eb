//! Time evolution under `exp(-iHt)`.
//!
//! Two independent engines are provided. [`evolve_direct`] exponentiates a
//! dense real-symmetric operator through its eigendecomposition and serves
//! as the oracle. [`evolve_fourier`] uses the shift theorem: a circulant
//! `H = Σ γ_s S^s` is diagonal in the Fourier basis with eigenphases
//! `q_k = Σ γ_s p_k(s)`, so evolution is a forward transform, a pointwise
//! multiply by `exp(-i q_k t)` and an inverse transform.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::state::{ComplexState, Grid2DState};
use crate::stencil::{DenseOperator, TransitionRates};
use crate::{Error, Result};

/// Imaginary residue of an eigenphase above this is treated as asymmetric rates.
pub const KERNEL_IMAG_TOLERANCE: f64 = 1e-10;

/// Signed frequency: `k` for `k ≤ n/2`, `k - n` above.
pub fn signed_frequency(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Shift-theorem phase `p_k(s) = exp(2πi·k̃·s/n)`.
pub fn fourier_phase(k: usize, s: i64, n: usize) -> Result<Complex64> {
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, len: n });
    }
    // reduce k̃·s mod n first so large shifts keep full precision
    let m = (signed_frequency(k, n) as i128 * s as i128).rem_euclid(n as i128) as f64;
    Ok(Complex64::from_polar(1.0, 2.0 * PI * m / n as f64))
}

/// Cyclic shift with `out[i] = psi[(i + s) mod n]`.
pub fn shift_state(psi: &ComplexState, s: i64) -> ComplexState {
    let n = psi.len() as i64;
    let a = psi.amplitudes();
    let out = (0..n).map(|i| a[(i + s).rem_euclid(n) as usize]).collect();
    ComplexState::new(out).expect("permutation of a valid state")
}

/// Eigenphases of a circulant Hamiltonian together with the transform plans
/// needed to apply it. Immutable and cheap to share between threads.
#[derive(Clone)]
pub struct SpectralKernel {
    q: Vec<f64>,
    lambda: usize,
    description: String,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralKernel")
            .field("n", &self.q.len())
            .field("lambda", &self.lambda)
            .field("description", &self.description)
            .finish()
    }
}

impl SpectralKernel {
    /// Wraps precomputed eigenphases.
    pub fn from_eigenphases(q: Vec<f64>, description: impl Into<String>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidSize("kernel length must be positive".into()));
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("eigenphases must be finite".into()));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(q.len());
        let inverse = planner.plan_fft_inverse(q.len());
        Ok(Self {
            q,
            lambda: 1,
            description: description.into(),
            forward,
            inverse,
        })
    }

    /// Kernel of the zero Hamiltonian.
    pub fn zero(n: usize) -> Result<Self> {
        Self::from_eigenphases(vec![0.0; n], "zero")
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn eigenphases(&self) -> &[f64] {
        &self.q
    }

    pub fn phase_factors(&self, t: f64) -> PhaseFactors {
        PhaseFactors {
            r: self
                .q
                .iter()
                .map(|&q| Complex64::from_polar(1.0, -q * t))
                .collect(),
            t,
        }
    }

    /// Applies `H` itself (not the exponential): `F⁻¹{F{ψ}·Q}`.
    pub fn apply(&self, psi: &ComplexState) -> Result<ComplexState> {
        self.check_len(psi.len())?;
        let mut buf = psi.amplitudes().to_vec();
        self.forward.process(&mut buf);
        buf.iter_mut().zip(&self.q).for_each(|(b, &q)| *b *= q);
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.len() as f64;
        buf.iter_mut().for_each(|b| *b *= scale);
        ComplexState::new(buf)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: len,
            });
        }
        Ok(())
    }
}

/// `r_k = exp(-i q_k t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFactors {
    pub r: Vec<Complex64>,
    pub t: f64,
}

/// Eigenphases `q_k = Σ_s γ_s p_k(λs)` of the circulant operator whose hops
/// are the given rates stretched by `lambda` on a ring of `n` elements.
pub fn build_kernel(rates: &TransitionRates, n: usize, lambda: usize) -> Result<SpectralKernel> {
    if lambda == 0 {
        return Err(Error::InvalidParameter("lambda must be at least 1".into()));
    }
    let reach = 2 * rates.half_width() * lambda;
    if n <= reach {
        return Err(Error::SizeTooSmall { n, min: reach });
    }
    let asym = rates.asymmetry();
    if asym > 0.0 {
        return Err(Error::NonHermitian(format!("max |γ_s - γ_-s| = {asym:e}")));
    }
    let mut q = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, g) in rates.iter() {
            if g != 0.0 {
                acc += g * fourier_phase(k, s * lambda as i64, n)?;
            }
        }
        if acc.im.abs() > KERNEL_IMAG_TOLERANCE {
            return Err(Error::NonHermitian(format!(
                "eigenphase {k} has imaginary part {:e}",
                acc.im
            )));
        }
        q.push(acc.re);
    }
    let mut kernel =
        SpectralKernel::from_eigenphases(q, format!("d={} lambda={lambda}", rates.half_width()))?;
    kernel.lambda = lambda;
    Ok(kernel)
}

/// `F⁻¹{F{ψ(0)} ⊗ R(t)}`.
pub fn evolve_fourier(
    psi0: &ComplexState,
    kernel: &SpectralKernel,
    t: f64,
) -> Result<ComplexState> {
    kernel.check_len(psi0.len())?;
    let mut buf = psi0.amplitudes().to_vec();
    kernel.forward.process(&mut buf);
    let scale = 1.0 / kernel.len() as f64;
    for (b, &q) in buf.iter_mut().zip(&kernel.q) {
        *b *= Complex64::from_polar(scale, -q * t);
    }
    kernel.inverse.process(&mut buf);
    ComplexState::new(buf)
}

/// Separable 2D evolution: `kx` acts along rows (x), `ky` along columns (y).
pub fn evolve_fourier_2d(
    psi0: &Grid2DState,
    kx: &SpectralKernel,
    ky: &SpectralKernel,
    t: f64,
) -> Result<Grid2DState> {
    let (nx, ny) = (psi0.nx(), psi0.ny());
    kx.check_len(nx)?;
    ky.check_len(ny)?;
    let mut buf = psi0.amplitudes().to_vec();

    transform_2d(&mut buf, nx, ny, &kx.forward, &ky.forward);
    let scale = 1.0 / (nx * ny) as f64;
    for (i, row) in buf.chunks_exact_mut(ny).enumerate() {
        let qx = kx.q[i];
        for (b, &qy) in row.iter_mut().zip(&ky.q) {
            *b *= Complex64::from_polar(scale, -(qx + qy) * t);
        }
    }
    transform_2d(&mut buf, nx, ny, &kx.inverse, &ky.inverse);

    Grid2DState::new(nx, ny, buf)
}

fn transform_2d(
    buf: &mut [Complex64],
    nx: usize,
    ny: usize,
    fx: &Arc<dyn Fft<f64>>,
    fy: &Arc<dyn Fft<f64>>,
) {
    // rows are contiguous; rustfft processes back-to-back chunks of length ny
    fy.process(buf);
    let mut column = vec![Complex64::new(0.0, 0.0); nx];
    for j in 0..ny {
        for (i, c) in column.iter_mut().enumerate() {
            *c = buf[i * ny + j];
        }
        fx.process(&mut column);
        for (i, c) in column.iter().enumerate() {
            buf[i * ny + j] = *c;
        }
    }
}

/// Eigendecomposition `H = V Λ Vᵀ` of a real-symmetric operator.
#[derive(Debug, Clone)]
pub struct SymmetricSpectrum {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl SymmetricSpectrum {
    pub fn of(h: &DenseOperator) -> Result<Self> {
        let n = h.dim();
        let m = h.matrix();
        let a = faer::Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
        let evd = a
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|_| Error::EigSolverFailure)?;
        let (u, s) = (evd.U(), evd.S());
        let values = DVector::from_fn(n, |k, _| s[k]);
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::EigSolverFailure);
        }
        Ok(Self {
            values,
            vectors: DMatrix::from_fn(n, n, |i, j| u[(i, j)]),
        })
    }

    /// `V f(Λ) Vᵀ x` for real `x` and real-valued `f`.
    pub fn apply_real(&self, x: &DVector<f64>, f: impl Fn(f64) -> f64) -> DVector<f64> {
        let mut w = self.vectors.tr_mul(x);
        w.iter_mut()
            .zip(self.values.iter())
            .for_each(|(w, &l)| *w *= f(l));
        &self.vectors * w
    }

    /// `V exp(-iΛt) Vᵀ ψ`.
    pub fn evolve(&self, psi: &ComplexState, t: f64) -> Result<ComplexState> {
        let n = self.values.len();
        if psi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: psi.len(),
            });
        }
        let re = DVector::from_iterator(n, psi.amplitudes().iter().map(|a| a.re));
        let im = DVector::from_iterator(n, psi.amplitudes().iter().map(|a| a.im));
        let mut wr = self.vectors.tr_mul(&re);
        let mut wi = self.vectors.tr_mul(&im);
        for k in 0..n {
            let (s, c) = (-self.values[k] * t).sin_cos();
            let (a, b) = (wr[k], wi[k]);
            wr[k] = a * c - b * s;
            wi[k] = a * s + b * c;
        }
        let out_re = &self.vectors * wr;
        let out_im = &self.vectors * wi;
        ComplexState::new(
            out_re
                .iter()
                .zip(out_im.iter())
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect(),
        )
    }
}

/// Dense oracle: `exp(-iHt) ψ(0)` via symmetric eigendecomposition.
pub fn evolve_direct(h: &DenseOperator, psi0: &ComplexState, t: f64) -> Result<ComplexState> {
    if h.dim() != psi0.len() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi0.len(),
        });
    }
    SymmetricSpectrum::of(h)?.evolve(psi0, t)
}
