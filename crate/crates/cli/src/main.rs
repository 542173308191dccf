use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

#[derive(Parser, Debug)]
#[command(name = "systolica", version, about = "Systolic analysis of circle-invariant contact forms")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Largest rotation denominator enumerated before certification widens the search.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    pub q_max: u64,
    /// Grid points per branch used for root bracketing and invariant checks.
    #[arg(long, global = true, default_value_t = systolica::DEFAULT_GRID)]
    pub grid: usize,
    /// Absolute tolerance for volume quadrature.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a profile from one of the standard families.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Build a metric of revolution on the sphere.
    Metric {
        #[command(subcommand)]
        kind: MetricKind,
    },
    /// Check the invariants of a profile file.
    Validate { path: PathBuf },
    /// Systoles, volume, inequality margin, classification and orbit table.
    Analyze { path: PathBuf },
    /// Closed orbit table.
    Orbits { path: PathBuf },
    /// Systolic ratios along the eta family.
    SweepEta {
        #[arg(long, allow_negative_numbers = true)]
        e: i64,
        /// Comma separated; defaults to 0.1/e, 0.05/e, 0.01/e.
        #[arg(long, value_delimiter = ',')]
        eta: Vec<f64>,
    },
    /// Inequality, certificate and Reeb round-trip checks on random profiles.
    Audit {
        #[arg(long, value_delimiter = ',', default_values_t = [1i64, 2, 3, 5], allow_negative_numbers = true)]
        e: Vec<i64>,
        #[arg(long, default_value_t = 200)]
        count: u64,
        /// Run the Reeb round trip on every n-th profile; 0 disables it.
        #[arg(long, default_value_t = 25)]
        roundtrip_every: u64,
        #[arg(long, default_value_t = 10)]
        roundtrip_levels: usize,
    },
    /// Closed geodesics and the systolic ratio of a metric file.
    Revolution { path: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum Family {
    Zoll {
        #[arg(long, allow_negative_numbers = true)]
        e: i64,
        #[arg(long, default_value_t = 1.0)]
        period: f64,
    },
    Besse {
        #[arg(long, allow_negative_numbers = true)]
        e: i64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    Eta {
        #[arg(long, allow_negative_numbers = true)]
        e: i64,
        #[arg(long)]
        eta: f64,
    },
    Ellipsoid {
        #[arg(long)]
        a1: f64,
        #[arg(long)]
        a2: f64,
    },
    /// Random admissible profile; uses --seed.
    Random {
        #[arg(long, allow_negative_numbers = true)]
        e: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum MetricKind {
    Round,
    Perturbed {
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Sine series on [0, length], rescaled so the pole conditions hold.
    Sine {
        #[arg(long, default_value_t = std::f64::consts::PI)]
        length: f64,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        coefficients: Vec<f64>,
    },
}

fn configure_threads() {
    if let Some(n) = std::env::var("SYSTOLICA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let opts = &cli.opts;
    let result = match cli.command {
        Command::Construct { family } => commands::construct(opts, family),
        Command::Metric { kind } => commands::metric(opts, kind),
        Command::Validate { path } => commands::validate(opts, &path),
        Command::Analyze { path } => commands::analyze(opts, &path),
        Command::Orbits { path } => commands::orbits(opts, &path),
        Command::SweepEta { e, eta } => commands::sweep_eta(opts, e, eta),
        Command::Audit {
            e,
            count,
            roundtrip_every,
            roundtrip_levels,
        } => commands::audit(opts, &e, count, roundtrip_every, roundtrip_levels),
        Command::Revolution { path } => commands::revolution(opts, &path),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
