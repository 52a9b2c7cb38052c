//! `crosscap`: experiments on small nonorientable hyperbolic surfaces.
//!
//! Every subcommand accepts `--config FILE` (`key = value` lines named like
//! the long flags, plus the model keys); flags override the file. Reports go
//! to `--out-dir` / `$CROSSCAP_OUT_DIR` as `<subcommand>.json` and `.csv`,
//! or to stdout when neither is set.
//!
//! Exit codes: 0 success, 1 a check failed or a computation errored,
//! 2 usage error (unknown flag or config key, malformed value).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

mod commands;
mod report;
mod settings;

use settings::Settings;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{module}: {source}")]
    Module {
        module: &'static str,
        source: crosscap::Error,
    },
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "crosscap",
    version,
    about = "Experiments on small nonorientable hyperbolic surfaces"
)]
struct Cli {
    /// `key = value` config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for `<subcommand>.json` / `.csv`; stdout when unset.
    #[arg(long, global = true, env = "CROSSCAP_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Self-intersections and lengths of arcs in a crosscap collar.
    Collar(CollarArgs),
    /// Markoff triples / quadruples below a bound via Vieta moves.
    Markoff(MarkoffArgs),
    /// Simple closed geodesics of a builtin model up to a length.
    Enumerate(ModelArgs),
    /// Counting function, ν = N/L^d and the growth exponent of a model.
    Count(CountArgs),
    /// Growth exponent of a list of lengths from CSV.
    Fit(FitArgs),
    /// Integral multicurve count on the twice-holed projective plane.
    BxIdentity(BxArgs),
    /// Orbit closure of a point of PML(N21) under the mapping class group.
    PmlOrbit(PmlArgs),
    /// Norbury volume of the region {sys⁻ ≥ ε}.
    Volume(VolumeArgs),
}

#[derive(Debug, Args)]
pub struct CollarArgs {
    #[arg(long)]
    pub core: Option<f64>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub kmax: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p_offset: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q_offset: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MarkoffArgs {
    #[arg(long)]
    pub arity: Option<usize>,
    #[arg(long)]
    pub bound: Option<u64>,
    /// Cross-check against the exhaustive scan (default: when the bound
    /// allows it).
    #[arg(long)]
    pub bruteforce: Option<bool>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// N12, N21, N3 or N13.
    #[arg(long)]
    pub model: Option<String>,
    /// Full parameter vector, comma separated.
    #[arg(long)]
    pub params: Option<String>,
    /// one, two or all.
    #[arg(long)]
    pub sided: Option<String>,
    #[arg(long)]
    pub lmax: Option<f64>,
    /// Word length budget for the scan.
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Exponent in ν = N/L^d (default: dim ML of the surface).
    #[arg(long)]
    pub d: Option<i32>,
    /// Decades below L_max covered by the fit grid.
    #[arg(long)]
    pub decades: Option<f64>,
    /// Expected slope; adds a check.
    #[arg(long)]
    pub expect_slope: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with a `length` column (or lengths in the first column).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<i32>,
    #[arg(long)]
    pub decades: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BxArgs {
    #[arg(long)]
    pub l1: Option<f64>,
    #[arg(long)]
    pub l2: Option<f64>,
    /// Default 10^4·max(l1, l2).
    #[arg(long)]
    pub lmax: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PmlArgs {
    /// `inf`, `g<n>` or `<n>:<t>` with t in (0, 1).
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    #[arg(long)]
    pub depth: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub params: Option<String>,
    /// Comma separated list.
    #[arg(long)]
    pub eps: Option<String>,
    /// Length cap B (default 4·(largest boundary + 1)).
    #[arg(long)]
    pub cap: Option<f64>,
    /// quadrature or monte_carlo.
    #[arg(long)]
    pub method: Option<String>,
    /// Points per axis (quadrature) or samples (Monte Carlo).
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub word_budget: Option<usize>,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let mut s = Settings::load(cli.config.as_deref())?;
    let (report, table) = match cli.command {
        Command::Collar(a) => commands::collar(a, &mut s)?,
        Command::Markoff(a) => commands::markoff(a, &mut s)?,
        Command::Enumerate(a) => commands::enumerate(a, &mut s)?,
        Command::Count(a) => commands::count(a, &mut s)?,
        Command::Fit(a) => commands::fit(a, &mut s)?,
        Command::BxIdentity(a) => commands::bx_identity(a, &mut s)?,
        Command::PmlOrbit(a) => commands::pml_orbit(a, &mut s)?,
        Command::Volume(a) => commands::volume(a, &mut s)?,
    };
    report::emit(&report, Some(&table), cli.out_dir.as_deref())?;
    if !report.passed {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
        eprintln!("check failed: {}", failed.join(", "));
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
