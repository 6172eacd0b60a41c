//! `relmetric`: scene generation, distances, property checks, profile
//! comparison and one-shot reproductions of the construction bounds.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
mod report;
mod scene;
mod svg;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("i/o: {0}")]
    Io(String),
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}
input_error!(
    relmetric::GeomError,
    relmetric::PathError,
    relmetric::MetricError,
    relmetric::ConstructionError,
    relmetric::RigidityError
);

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Unreachable,
    Violation,
}

#[derive(Parser)]
#[command(name = "relmetric", version, about = "Boundary-relative metrics of planar domains")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Debug, Default)]
pub struct MetricFlags {
    /// Tolerance for metric checks and profile alignment.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Decreasing inward offsets, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub offsets: Option<Vec<f64>>,
    /// Sides of the polygon replacing the floor disk.
    #[arg(long)]
    pub m_circle: Option<usize>,
    /// closure, last-value or richardson.
    #[arg(long)]
    pub extrapolation: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GenKind {
    Comb,
    Family,
    Spiral,
    Strips,
    Random,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub kind: GenKind,
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Cap width; defaults to 1/(4N²).
    #[arg(long)]
    pub cap_width: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub levels: usize,
    /// Scale of the confining triangle.
    #[arg(long, default_value_t = 4.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 3)]
    pub coils: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub pitch: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho0: f64,
    /// Defaults to 64 for spirals and 16 for strips.
    #[arg(long)]
    pub samples_per_coil: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub vertices: usize,
    #[arg(long)]
    pub hole: bool,
    #[arg(long, default_value_t = 1)]
    pub boundary_slits: usize,
    #[arg(long, default_value_t = 1)]
    pub free_slits: usize,
    /// Number of random sample points.
    #[arg(long, default_value_t = 12)]
    pub points: usize,
    /// Scene output; the scene goes to stdout when absent.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DistArgs {
    pub scene: PathBuf,
    pub p: String,
    pub q: String,
    #[command(flatten)]
    pub metric: MetricFlags,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    pub scene: PathBuf,
    /// Point names, comma separated; all points when absent.
    #[arg(long, value_delimiter = ',')]
    pub points: Option<Vec<String>>,
    #[command(flatten)]
    pub metric: MetricFlags,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CheckKind {
    Metric,
    Geodesic,
    Convexity,
    Circ,
    Ambient,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub scene: PathBuf,
    pub check: CheckKind,
    /// Geodesic endpoints; the first two points when absent.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    /// Outer-boundary samples used when the scene names no points, and
    /// for the convexity checks.
    #[arg(long, default_value_t = 12)]
    pub m: usize,
    /// Arc length cut from each end of a geodesic before measuring clearance.
    #[arg(long, default_value_t = 1e-3)]
    pub eta: f64,
    #[arg(long, default_value_t = 11)]
    pub grid: usize,
    #[command(flatten)]
    pub metric: MetricFlags,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PaperTarget {
    Star1,
    Bound6,
    Thm22,
    Comb,
    Star2,
    Strips,
}

#[derive(Args, Debug)]
pub struct PaperArgs {
    pub target: PaperTarget,
    #[arg(long, default_value_t = 2)]
    pub levels: usize,
    #[arg(long, value_delimiter = ',', default_values_t = vec![4, 8, 16])]
    pub depths: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub rho0: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub pitch: f64,
    #[arg(long, default_value_t = 20)]
    pub max_coils: usize,
    /// Coils per strip.
    #[arg(long, default_value_t = 2)]
    pub coils: usize,
    #[arg(long, default_value_t = 16)]
    pub samples_per_coil: usize,
    /// Sampled triangles per trapezium.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub metric: MetricFlags,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, default_value_t = 16)]
    pub m: usize,
    /// Also run the convexity transfer test.
    #[arg(long)]
    pub transfer: bool,
    #[arg(long, default_value_t = 1e-3)]
    pub eta: f64,
    #[command(flatten)]
    pub metric: MetricFlags,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a construction as a scene file.
    Gen(GenArgs),
    /// Relative distance between two named points.
    Dist(DistArgs),
    /// Distance matrix over named points as CSV.
    Matrix(MatrixArgs),
    /// Run a property check; exit 3 on violation.
    Check(CheckArgs),
    /// Reproduce a construction bound with a verdict.
    Paper(PaperArgs),
    /// Compare the boundary profiles of two domains.
    Compare(CompareArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors share exit code 1 with input errors
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let res = match cli.cmd {
        Cmd::Gen(a) => commands::gen(&a),
        Cmd::Dist(a) => commands::dist(&a),
        Cmd::Matrix(a) => commands::matrix(&a),
        Cmd::Check(a) => commands::check(&a),
        Cmd::Paper(a) => commands::paper(&a),
        Cmd::Compare(a) => commands::compare(&a),
    };
    match res {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Unreachable) => ExitCode::from(2),
        Ok(Outcome::Violation) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
