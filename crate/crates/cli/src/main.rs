//! `ctqw` — run quantum-walk experiments and write CSV/JSON artifacts.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctqw_core::stencil::{Boundary, StencilOrder};

mod commands;
mod output;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameter combinations; exit code 2.
    Usage(String),
    /// Failure while computing or writing; exit code 1.
    Engine(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Engine(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Engine(m) => f.write_str(m),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ctqw",
    version,
    about = "Continuous-time quantum walk experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single 1D walk on the embedded grid; writes dist.csv.
    Run1d(Run1dArgs),
    /// The same walk for several λ; writes dist_lambda{L}.csv and summary.csv.
    Sweep(SweepArgs),
    /// Separable 2D walk; writes dist2d.csv.
    Run2d(Run2dArgs),
    /// Classical master-equation walk on a line; writes classical.csv.
    Classical(ClassicalArgs),
    /// Times the dense oracle against the Fourier-shift method; writes bench.csv and fit.json.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Periodic,
    Truncated,
}

impl BoundaryArg {
    pub fn boundary(self) -> Boundary {
        match self {
            BoundaryArg::Periodic => Boundary::Periodic,
            BoundaryArg::Truncated => Boundary::Truncated,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundaryArg::Periodic => "periodic",
            BoundaryArg::Truncated => "truncated",
        }
    }
}

fn parse_order(s: &str) -> Result<StencilOrder, String> {
    let n: u32 = s
        .parse()
        .map_err(|_| format!("expected 1 or 10, got {s:?}"))?;
    StencilOrder::from_number(n).map_err(|e| e.to_string())
}

/// `lo:hi:step`, inclusive of `hi` when it lies on the grid.
fn parse_range(s: &str) -> Result<Sizes, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(format!("expected lo:hi:step, got {s:?}"));
    };
    let num = |p: &str| {
        p.trim()
            .parse::<usize>()
            .map_err(|_| format!("not a size: {p:?}"))
    };
    let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
    if lo == 0 || step == 0 || lo > hi {
        return Err(format!("need 0 < lo <= hi and step > 0, got {s:?}"));
    }
    Ok(Sizes((lo..=hi).step_by(step).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sizes(pub Vec<usize>);

/// Flags shared by the 1D walk commands.
#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    /// Stencil order: 1 or 10.
    #[arg(long, default_value = "1", value_parser = parse_order)]
    pub order: StencilOrder,
    /// Number of nodes N.
    #[arg(long, default_value_t = 160)]
    pub nodes: usize,
    /// Grid elements per node segment.
    #[arg(long, default_value_t = 16)]
    pub m: usize,
    /// Initial Gaussian width Δx, in grid elements.
    #[arg(long, default_value_t = 2.0)]
    pub dx: f64,
    #[arg(long, default_value_t = 15.0)]
    pub time: f64,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    pub boundary: BoundaryArg,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Recorded in the manifest; the walks themselves are deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct Run1dArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Dilation λ of the hops on the grid.
    #[arg(long, default_value_t = 16)]
    pub lambda: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long, value_delimiter = ',', default_value = "16,4,3,2,1")]
    pub lambdas: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct Run2dArgs {
    /// Stencil order along x.
    #[arg(long, default_value = "1", value_parser = parse_order)]
    pub order_x: StencilOrder,
    /// Stencil order along y.
    #[arg(long, default_value = "10", value_parser = parse_order)]
    pub order_y: StencilOrder,
    /// Nodes per axis.
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    /// Nodes along y, if different from x.
    #[arg(long)]
    pub nodes_y: Option<usize>,
    #[arg(long, default_value_t = 16)]
    pub lambda: usize,
    #[arg(long, default_value_t = 16)]
    pub m: usize,
    #[arg(long, default_value_t = 2.0)]
    pub dx: f64,
    #[arg(long, default_value_t = 15.0)]
    pub time: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct ClassicalArgs {
    #[arg(long, default_value_t = 160)]
    pub nodes: usize,
    /// Hopping rate γ (> 0).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 25.0)]
    pub time: f64,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    pub boundary: BoundaryArg,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "1", value_parser = parse_order)]
    pub order: StencilOrder,
    /// Problem sizes as lo:hi:step.
    #[arg(long = "n", default_value = "50:250:50", value_parser = parse_range)]
    pub n_values: Sizes,
    #[arg(long, default_value_t = 5.0)]
    pub time: f64,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Time two identical fixed-cost engines instead (control run).
    #[arg(long, hide = true)]
    pub stub: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run1d(a) => commands::run1d(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Run2d(a) => commands::run2d(&a),
        Command::Classical(a) => commands::classical(&a),
        Command::Bench(a) => commands::bench(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
