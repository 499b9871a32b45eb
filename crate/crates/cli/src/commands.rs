use std::collections::BTreeSet;
use std::time::Duration;

use ctqw_core::analytic::{analytic_node_distribution, classical_evolve, equivalent_free_time};
use ctqw_core::bench::{
    benchmark_efficiency, run_benchmark, BenchReport, FixedCostEngine, MIN_REPEATS,
};
use ctqw_core::embedding::{
    embedded_kernel, extract_nodes, extract_nodes_2d, gaussian_init, gaussian_init_2d,
    EmbeddingSpec, GaussianPacketSpec, NodeDistribution,
};
use ctqw_core::metrics::{spread_sigma, total_variation};
use ctqw_core::propagate::{evolve_direct, evolve_fourier, evolve_fourier_2d, SpectralKernel};
use ctqw_core::state::ProbabilityVector;
use ctqw_core::stencil::{
    laplacian_stencil, line_hamiltonian, rates_to_dense, stencil_to_rates, Boundary, DenseOperator,
    LineConvention, StencilOrder, TransitionRates,
};
use serde::Serialize;

use crate::output::{ensure_dir, write_csv, write_json, RunManifest};
use crate::{BenchArgs, ClassicalArgs, CliError, Run1dArgs, Run2dArgs, SweepArgs, WalkArgs};

const DIST_HEADER: [&str; 2] = ["node_index", "probability"];

fn usage<T>(r: ctqw_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Usage(e.to_string()))
}

fn engine<T>(r: ctqw_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Engine(e.to_string()))
}

fn check_time(t: f64) -> Result<(), CliError> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("time must be finite, got {t}")))
    }
}

fn rates_for(order: StencilOrder) -> TransitionRates {
    stencil_to_rates(&laplacian_stencil(order))
}

fn packet_for(dx: f64, m: usize) -> Result<GaussianPacketSpec, CliError> {
    let packet = usage(GaussianPacketSpec::new(0, dx))?;
    if !packet.fits_segment(m) {
        eprintln!(
            "warning: m = {m} is below 4·dx = {}; the packet is wider than a node segment",
            4.0 * dx
        );
    }
    Ok(packet)
}

/// Evolution engine chosen by the boundary condition.
enum Propagator {
    Fourier(SpectralKernel),
    /// Dense operator on the open grid, for `--boundary truncated`.
    Dense(DenseOperator),
}

/// A validated 1D run: everything that can be rejected as bad input has
/// been checked by the time this exists.
struct Walk1d {
    spec: EmbeddingSpec,
    packet: GaussianPacketSpec,
    propagator: Propagator,
    t: f64,
}

impl Walk1d {
    fn prepare(args: &WalkArgs, lambda: usize) -> Result<Self, CliError> {
        check_time(args.time)?;
        let spec = usage(EmbeddingSpec::new(args.nodes, lambda, args.m))?;
        let packet = packet_for(args.dx, args.m)?;
        let rates = rates_for(args.order);
        let propagator = match args.boundary.boundary() {
            Boundary::Periodic => Propagator::Fourier(usage(embedded_kernel(&rates, &spec))?),
            Boundary::Truncated => {
                let dilated = usage(rates.dilate(lambda))?;
                Propagator::Dense(usage(rates_to_dense(
                    &dilated,
                    spec.total_len(),
                    Boundary::Truncated,
                ))?)
            }
        };
        Ok(Self {
            spec,
            packet,
            propagator,
            t: args.time,
        })
    }

    fn run(&self) -> Result<NodeDistribution, CliError> {
        let psi0 = engine(gaussian_init(&self.spec, &self.packet))?;
        let psi = match &self.propagator {
            Propagator::Fourier(k) => engine(evolve_fourier(&psi0, k, self.t))?,
            Propagator::Dense(h) => engine(evolve_direct(h, &psi0, self.t))?,
        };
        engine(extract_nodes(&psi, &self.spec))
    }
}

fn dist_rows(d: &NodeDistribution) -> impl Iterator<Item = (i64, f64)> + '_ {
    d.labels()
        .iter()
        .copied()
        .zip(d.probabilities().as_slice().iter().copied())
}

fn walk_manifest(command: &str, args: &WalkArgs, lambdas: Vec<usize>) -> RunManifest {
    let mut m = RunManifest::new(command, args.time);
    m.order = Some(args.order.number());
    m.nodes = Some(args.nodes);
    m.lambdas = lambdas;
    m.m = Some(args.m);
    m.dx = Some(args.dx);
    m.boundary = Some(args.boundary.name().to_owned());
    m.seed = args.seed;
    m
}

pub fn run1d(args: &Run1dArgs) -> Result<(), CliError> {
    let walk = Walk1d::prepare(&args.walk, args.lambda)?;
    let dist = walk.run()?;
    let out = &args.walk.out;
    ensure_dir(out)?;
    write_csv(out, "dist.csv", &DIST_HEADER, dist_rows(&dist))?;
    write_json(
        out,
        "manifest.json",
        &walk_manifest("run1d", &args.walk, vec![args.lambda]),
    )?;
    Ok(())
}

#[derive(Serialize)]
struct SummaryRow {
    lambda: usize,
    tv_distance_to_analytic: f64,
    sigma: f64,
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.lambdas.is_empty() {
        return Err(CliError::Usage("at least one lambda is required".into()));
    }
    let mut seen = BTreeSet::new();
    if let Some(dup) = args.lambdas.iter().find(|&&l| !seen.insert(l)) {
        return Err(CliError::Usage(format!("lambda {dup} listed twice")));
    }
    let walks = args
        .lambdas
        .iter()
        .map(|&l| Walk1d::prepare(&args.walk, l))
        .collect::<Result<Vec<_>, _>>()?;

    let rates = rates_for(args.walk.order);
    let free_time = equivalent_free_time(&rates, args.walk.time);
    let out = &args.walk.out;
    ensure_dir(out)?;
    let mut summary = Vec::with_capacity(walks.len());
    for walk in &walks {
        let lambda = walk.spec.lambda();
        let dist = walk.run()?;
        let reference = engine(analytic_node_distribution(
            &walk.spec,
            args.walk.dx,
            free_time,
        ))?;
        summary.push(SummaryRow {
            lambda,
            tv_distance_to_analytic: engine(total_variation(
                dist.probabilities(),
                reference.probabilities(),
            ))?,
            sigma: spread_sigma(&dist),
        });
        write_csv(
            out,
            &format!("dist_lambda{lambda}.csv"),
            &DIST_HEADER,
            dist_rows(&dist),
        )?;
    }
    write_csv(
        out,
        "summary.csv",
        &["lambda", "tv_distance_to_analytic", "sigma"],
        summary,
    )?;
    write_json(
        out,
        "manifest.json",
        &walk_manifest("sweep", &args.walk, args.lambdas.clone()),
    )?;
    Ok(())
}

pub fn run2d(args: &Run2dArgs) -> Result<(), CliError> {
    check_time(args.time)?;
    let nodes_y = args.nodes_y.unwrap_or(args.nodes);
    let spec_x = usage(EmbeddingSpec::new(args.nodes, args.lambda, args.m))?;
    let spec_y = usage(EmbeddingSpec::new(nodes_y, args.lambda, args.m))?;
    let packet = packet_for(args.dx, args.m)?;
    let kx = usage(embedded_kernel(&rates_for(args.order_x), &spec_x))
        .map_err(|e| CliError::Usage(format!("x kernel: {e}")))?;
    let ky = usage(embedded_kernel(&rates_for(args.order_y), &spec_y))
        .map_err(|e| CliError::Usage(format!("y kernel: {e}")))?;

    let psi0 = engine(gaussian_init_2d(&spec_x, &spec_y, &packet))?;
    let psi = engine(evolve_fourier_2d(&psi0, &kx, &ky, args.time))?;
    let grid = engine(extract_nodes_2d(&psi, &spec_x, &spec_y))?;

    ensure_dir(&args.out)?;
    let rows = grid
        .labels_x
        .iter()
        .enumerate()
        .flat_map(|(i, &lx)| {
            grid.labels_y
                .iter()
                .enumerate()
                .map(move |(j, &ly)| (i, j, lx, ly))
        })
        .map(|(i, j, lx, ly)| (lx, ly, grid.get(i, j)));
    write_csv(&args.out, "dist2d.csv", &["i", "j", "probability"], rows)?;

    let mut m = RunManifest::new("run2d", args.time);
    m.order = Some(args.order_x.number());
    m.order_y = Some(args.order_y.number());
    m.nodes = Some(args.nodes);
    m.nodes_y = Some(nodes_y);
    m.lambdas = vec![args.lambda];
    m.m = Some(args.m);
    m.dx = Some(args.dx);
    m.boundary = Some("periodic".into());
    m.seed = args.seed;
    write_json(&args.out, "manifest.json", &m)?;
    Ok(())
}

pub fn classical(args: &ClassicalArgs) -> Result<(), CliError> {
    check_time(args.time)?;
    if args.gamma.is_nan() || args.gamma <= 0.0 {
        return Err(CliError::Usage(format!(
            "gamma must be positive, got {}",
            args.gamma
        )));
    }
    if args.time < 0.0 {
        return Err(CliError::Usage(
            "classical walks cannot run backwards in time".into(),
        ));
    }
    let labels = usage(EmbeddingSpec::new(args.nodes, 1, 1))?;
    let h = usage(line_hamiltonian(
        args.nodes,
        args.gamma,
        LineConvention::Conservative,
        args.boundary.boundary(),
    ))?;
    let p0 = engine(ProbabilityVector::delta(
        args.nodes,
        engine(labels.position(0))?,
    ))?;
    let p = engine(classical_evolve(&h, &p0, args.time))?;

    ensure_dir(&args.out)?;
    let rows = labels
        .labels()
        .into_iter()
        .zip(p.as_slice().iter().copied());
    write_csv(&args.out, "classical.csv", &DIST_HEADER, rows)?;

    let mut m = RunManifest::new("classical", args.time);
    m.nodes = Some(args.nodes);
    m.gamma = Some(args.gamma);
    m.boundary = Some(args.boundary.name().to_owned());
    m.seed = args.seed;
    write_json(&args.out, "manifest.json", &m)?;
    Ok(())
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    t_direct_s: f64,
    t_fourier_s: f64,
    efficiency: f64,
    max_abs_diff: f64,
}

#[derive(Serialize)]
struct FitJson {
    c0: f64,
    c1: f64,
    c2: f64,
    residual: f64,
}

pub fn bench(args: &BenchArgs) -> Result<(), CliError> {
    check_time(args.time)?;
    if args.repeats < MIN_REPEATS {
        return Err(CliError::Usage(format!(
            "repeats must be at least {MIN_REPEATS}, got {}",
            args.repeats
        )));
    }
    let sizes = &args.n_values.0;
    if sizes.len() < 3 {
        return Err(CliError::Usage(
            "need at least three sizes for the quadratic fit".into(),
        ));
    }
    let rates = rates_for(args.order);
    let report: BenchReport = if args.stub {
        let stub = FixedCostEngine {
            cost: Duration::from_micros(200),
        };
        engine(run_benchmark(&stub, sizes, args.repeats))?
    } else {
        // reject sizes the kernel cannot hold before any timing starts
        for &n in sizes {
            usage(ctqw_core::propagate::build_kernel(&rates, n, 1))?;
        }
        engine(benchmark_efficiency(sizes, args.time, &rates, args.repeats))?
    };

    ensure_dir(&args.out)?;
    let rows = report.records.iter().map(|r| BenchRow {
        n: r.n,
        t_direct_s: r.t_direct,
        t_fourier_s: r.t_fourier,
        efficiency: r.efficiency,
        max_abs_diff: r.max_abs_diff,
    });
    write_csv(
        &args.out,
        "bench.csv",
        &[
            "n",
            "t_direct_s",
            "t_fourier_s",
            "efficiency",
            "max_abs_diff",
        ],
        rows,
    )?;
    let fit = &report.fit;
    write_json(
        &args.out,
        "fit.json",
        &FitJson {
            c0: fit.c0,
            c1: fit.c1,
            c2: fit.c2,
            residual: fit.residual,
        },
    )?;

    let mut m = RunManifest::new("bench", args.time);
    m.order = Some(args.order.number());
    m.n_values = sizes.clone();
    m.repeats = Some(args.repeats);
    m.boundary = Some("periodic".into());
    m.seed = args.seed;
    write_json(&args.out, "manifest.json", &m)?;
    Ok(())
}
