//! `hnr`: profiles, meshes, heights, curvature norms, sweeps and the
//! invariant check suite for the translation-invariant H_r = 0 family.

mod check;
mod commands;
mod obj;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hnr_core::quadrature::QuadratureConfig;

#[derive(Parser, Debug)]
#[command(name = "hnr", version, about = "Invariant H_r = 0 hypersurfaces in H^n x R")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a profile curve with its curvatures (CSV).
    Profile(ProfileArgs),
    /// Half-height of a two-sheet member (JSON).
    Height(HeightArgs),
    /// Export a sampled hypersurface: OBJ for n = 2, vertex/edge CSV otherwise.
    Mesh(MeshArgs),
    /// Strong total curvature of a mesh (JSON).
    Stc(StcArgs),
    /// Decay of R^2 sup |A|^2 along a two-sheet member (JSON).
    Decay(DecayArgs),
    /// Barrier sweep toward a target point set (JSON).
    Sweep(SweepArgs),
    /// Run the invariant suite; exits with 4 if any check fails.
    Check(CheckArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct QuadArgs {
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    /// Maximum panel bisections per integral.
    #[arg(long, default_value_t = 2000)]
    pub max_subdivisions: usize,
}

impl QuadArgs {
    pub fn config(&self) -> hnr_core::Result<QuadratureConfig> {
        let tail = QuadratureConfig::default().tail_start;
        QuadratureConfig::new(self.rel_tol, self.abs_tol, self.max_subdivisions, tail)
    }
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub d: f64,
    #[arg(long, default_value_t = hnr_core::profile::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Reach of the grid past the singular end, or half-width of a symmetric grid.
    #[arg(long, default_value_t = hnr_core::profile::DEFAULT_EXTENT)]
    pub extent: f64,
    /// Vertical offset of the curve.
    #[arg(long, default_value_t = 0.0)]
    pub c: f64,
    /// Use the reflected branch t -> -t.
    #[arg(long)]
    pub negative_branch: bool,
    /// Base point of a half graph.
    #[arg(long, default_value_t = 1.0)]
    pub base_point: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Args, Debug)]
pub struct HeightArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long, conflicts_with = "a")]
    pub d: Option<f64>,
    /// Waist distance instead of d.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct MeshGenArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub d: Option<f64>,
    /// Profile samples per sheet.
    #[arg(long, default_value_t = 128)]
    pub rows: usize,
    /// Orbit samples.
    #[arg(long, default_value_t = 16)]
    pub columns: usize,
    #[arg(long, default_value_t = 4.0)]
    pub orbit_radius: f64,
    #[arg(long, default_value_t = 8.0)]
    pub extent: f64,
    #[arg(long, default_value_t = 1.0)]
    pub base_point: f64,
}

#[derive(Args, Debug)]
pub struct MeshArgs {
    #[command(flatten)]
    pub gen: MeshGenArgs,
    /// Defaults to obj for n = 2 and csv otherwise.
    #[arg(long, value_enum)]
    pub format: Option<MeshFormat>,
    /// OBJ output path (stdout if absent).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Vertex table path for CSV output.
    #[arg(long)]
    pub vertices: Option<PathBuf>,
    /// Edge table path for CSV output.
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Args, Debug)]
pub struct StcArgs {
    /// Vertex table written by `mesh`.
    #[arg(long, requires = "edges")]
    pub vertices: Option<PathBuf>,
    #[arg(long, requires = "vertices")]
    pub edges: Option<PathBuf>,
    #[command(flatten)]
    pub gen: MeshGenArgs,
    /// Integrability exponent, must exceed n; defaults to n + 1.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Args, Debug)]
pub struct DecayArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub d: f64,
    /// Intrinsic radii, strictly increasing.
    #[arg(long, value_delimiter = ',', default_values_t = [2.0, 4.0, 6.0, 8.0, 10.0])]
    pub radii: Vec<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureName {
    Containment,
    Violation,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Bundled sweep problem.
    #[arg(long, value_enum, conflicts_with = "target")]
    pub fixture: Option<FixtureName>,
    /// Target point CSV (`x_1..x_n,t[,boundary]`).
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Dimension of the bundled fixtures.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, default_value_t = 2.0)]
    pub d: f64,
    /// Normal direction of the base hyperplane, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub normal: Vec<f64>,
    /// Signed distance of the base hyperplane from the origin along the normal.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub offset: f64,
    /// Sweep on the side opposite to the normal.
    #[arg(long)]
    pub flip: bool,
    #[arg(long, default_value_t = 6.0)]
    pub s_start: f64,
    #[arg(long, default_value_t = 0.05)]
    pub s_step: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, default_value_t = hnr_core::barrier::DEFAULT_CONTACT_TOL)]
    pub contact_tol: f64,
    /// Also write the swept target as CSV.
    #[arg(long)]
    pub write_target: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Smaller grids.
    #[arg(long)]
    pub quick: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Failures of a command, each with its exit code.
#[derive(Debug)]
pub enum CliError {
    Core(hnr_core::Error),
    Usage(String),
    CheckFailed(usize),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_parameter_error() => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) | CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::CheckFailed(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::CheckFailed(k) => write!(f, "{k} check(s) failed"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<hnr_core::Error> for CliError {
    fn from(e: hnr_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(hnr_core::Error::Json(e))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Profile(a) => commands::profile(&a),
        Command::Height(a) => commands::height(&a),
        Command::Mesh(a) => commands::mesh(&a),
        Command::Stc(a) => commands::stc(&a),
        Command::Decay(a) => commands::decay(&a),
        Command::Sweep(a) => commands::sweep_cmd(&a),
        Command::Check(a) => check::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hnr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
