//! Direct-vs-Fourier timing harness.
//!
//! Each call is timed as the median of `repeats` samples after one discarded
//! warm-up. Calls much shorter than [`MIN_SAMPLE`] are batched and the batch
//! time divided by the batch size, so microsecond transforms are not lost in
//! timer granularity.

use std::time::{Duration, Instant};

use crate::embedding::gaussian_profile;
use crate::metrics::QuadraticFit;
use crate::propagate::{build_kernel, evolve_direct, evolve_fourier, SpectralKernel};
use crate::state::ComplexState;
use crate::stencil::{rates_to_dense, Boundary, DenseOperator, TransitionRates};
use crate::{Error, Result};

pub const MIN_REPEATS: usize = 3;
pub const MIN_SAMPLE: Duration = Duration::from_millis(10);

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    /// Seconds per direct evolution.
    pub t_direct: f64,
    /// Seconds per Fourier evolution.
    pub t_fourier: f64,
    pub efficiency: f64,
    pub repeats: usize,
    pub max_abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    /// Efficiency as a quadratic in `n`.
    pub fit: QuadraticFit,
}

/// A pair of engines timed against each other at a given problem size.
pub trait BenchEngine {
    type Prepared;

    /// Set-up work excluded from the timings.
    fn prepare(&self, n: usize) -> Result<Self::Prepared>;
    fn direct(&self, prepared: &Self::Prepared) -> Result<ComplexState>;
    fn fourier(&self, prepared: &Self::Prepared) -> Result<ComplexState>;
}

/// Dense eigendecomposition against the Fourier-shift kernel, both on a ring
/// built from the same rates and started from the same Gaussian.
#[derive(Debug, Clone)]
pub struct DenseVsSpectral {
    pub rates: TransitionRates,
    pub t: f64,
    pub width: f64,
}

pub struct PreparedProblem {
    operator: DenseOperator,
    kernel: SpectralKernel,
    psi0: ComplexState,
}

impl BenchEngine for DenseVsSpectral {
    type Prepared = PreparedProblem;

    fn prepare(&self, n: usize) -> Result<PreparedProblem> {
        Ok(PreparedProblem {
            operator: rates_to_dense(&self.rates, n, Boundary::Periodic)?,
            kernel: build_kernel(&self.rates, n, 1)?,
            psi0: gaussian_profile(n, n / 2, self.width)?,
        })
    }

    // the eigendecomposition is part of the direct method's cost
    fn direct(&self, p: &PreparedProblem) -> Result<ComplexState> {
        evolve_direct(&p.operator, &p.psi0, self.t)
    }

    fn fourier(&self, p: &PreparedProblem) -> Result<ComplexState> {
        evolve_fourier(&p.psi0, &p.kernel, self.t)
    }
}

/// Control engine: both sides busy-wait for the same duration and return the
/// same state, so the measured efficiency should be 1.
#[derive(Debug, Clone, Copy)]
pub struct FixedCostEngine {
    pub cost: Duration,
}

impl BenchEngine for FixedCostEngine {
    type Prepared = ComplexState;

    fn prepare(&self, n: usize) -> Result<ComplexState> {
        ComplexState::basis(n, 0)
    }

    fn direct(&self, p: &ComplexState) -> Result<ComplexState> {
        spin(self.cost);
        Ok(p.clone())
    }

    fn fourier(&self, p: &ComplexState) -> Result<ComplexState> {
        spin(self.cost);
        Ok(p.clone())
    }
}

fn spin(d: Duration) {
    let start = Instant::now();
    while start.elapsed() < d {
        std::hint::spin_loop();
    }
}

/// Median per-call seconds and the warm-up output.
fn time_call<F>(repeats: usize, mut f: F) -> Result<(f64, ComplexState)>
where
    F: FnMut() -> Result<ComplexState>,
{
    let start = Instant::now();
    let out = f()?;
    let warm = start.elapsed().max(Duration::from_nanos(1));
    let batch = (MIN_SAMPLE.as_nanos() / warm.as_nanos()).clamp(1, 100_000) as usize;

    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        for _ in 0..batch {
            std::hint::black_box(f()?);
        }
        samples.push(start.elapsed().as_secs_f64() / batch as f64);
    }
    Ok((median(&mut samples), out))
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Times both engines at every size, sequentially on the calling thread,
/// and fits the efficiency `t_direct / t_fourier` with a quadratic in `n`.
pub fn run_benchmark<E: BenchEngine>(
    engine: &E,
    n_values: &[usize],
    repeats: usize,
) -> Result<BenchReport> {
    if repeats < MIN_REPEATS {
        return Err(Error::InvalidParameter(format!(
            "repeats must be at least {MIN_REPEATS}, got {repeats}"
        )));
    }
    if n_values.len() < 3 {
        return Err(Error::InvalidSize(
            "benchmark needs at least three sizes for the fit".into(),
        ));
    }
    let mut records = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let prepared = engine.prepare(n)?;
        let (t_direct, a) = time_call(repeats, || engine.direct(&prepared))?;
        let (t_fourier, b) = time_call(repeats, || engine.fourier(&prepared))?;
        let t_direct = t_direct.max(f64::MIN_POSITIVE);
        let t_fourier = t_fourier.max(f64::MIN_POSITIVE);
        records.push(BenchRecord {
            n,
            t_direct,
            t_fourier,
            efficiency: t_direct / t_fourier,
            repeats,
            max_abs_diff: a.max_abs_diff(&b)?,
        });
    }
    let x: Vec<f64> = records.iter().map(|r| r.n as f64).collect();
    let y: Vec<f64> = records.iter().map(|r| r.efficiency).collect();
    let fit = QuadraticFit::fit(&x, &y)?;
    Ok(BenchReport { records, fit })
}

/// Benchmark of the dense oracle against the Fourier-shift method, started
/// from a Gaussian of width 2.
pub fn benchmark_efficiency(
    n_values: &[usize],
    t: f64,
    rates: &TransitionRates,
    repeats: usize,
) -> Result<BenchReport> {
    let engine = DenseVsSpectral {
        rates: rates.clone(),
        t,
        width: 2.0,
    };
    run_benchmark(&engine, n_values, repeats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stencil::{laplacian_stencil, stencil_to_rates, StencilOrder};

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn too_few_repeats_rejected() {
        let rates = stencil_to_rates(&laplacian_stencil(StencilOrder::First));
        assert!(matches!(
            benchmark_efficiency(&[10, 20, 30], 1.0, &rates, 2),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn control_engine_has_unit_efficiency() {
        let engine = FixedCostEngine {
            cost: Duration::from_micros(300),
        };
        let report = run_benchmark(&engine, &[10, 20, 30, 40], 3).unwrap();
        for r in &report.records {
            assert!((r.efficiency - 1.0).abs() < 0.3, "{r:?}");
            assert_eq!(r.max_abs_diff, 0.0);
        }
        assert!(report.fit.c2.abs() < 1e-3);
    }

    #[test]
    fn disagreement_does_not_depend_on_repeats() {
        let rates = stencil_to_rates(&laplacian_stencil(StencilOrder::First));
        let a = benchmark_efficiency(&[16, 24, 32], 2.0, &rates, 3).unwrap();
        let b = benchmark_efficiency(&[16, 24, 32], 2.0, &rates, 5).unwrap();
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!(x.max_abs_diff, y.max_abs_diff);
            assert!(x.max_abs_diff <= 1e-10);
            assert!(x.t_direct > 0.0 && x.t_fourier > 0.0);
        }
    }
}
