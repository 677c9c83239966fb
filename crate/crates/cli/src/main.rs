use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mrf_ptas::solver::DEFAULT_WIDTH_CAP;

mod cc;
mod failure;
mod gen;
mod solve;
mod stereo;
mod sweep;

/// MAP inference for pairwise MRFs on planar graphs.
#[derive(Debug, Parser)]
#[command(name = "mrf-ptas", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a model JSON with the PTAS or exactly.
    Solve(SolveArgs),
    /// Disparity map from a rectified PPM pair.
    Stereo(StereoArgs),
    /// Correlation clustering through the 4-label reduction.
    Cc(CcArgs),
    /// Score and runtime across several epsilon values.
    Sweep(SweepArgs),
    /// Write deterministic fixture files.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Args)]
struct SolverOpts {
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// BFS root vertex for the level classes (0-based id).
    #[arg(long)]
    root: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_WIDTH_CAP)]
    width_cap: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Debug, Args)]
struct SolveArgs {
    model: PathBuf,
    /// Assignment JSON to write.
    #[arg(long, short)]
    out: PathBuf,
    /// Diagnostics JSON; defaults to the output path with `.diag.json`.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    #[command(flatten)]
    opts: SolverOpts,
    /// Shift every table to a zero minimum first; scores are reported in
    /// the original units.
    #[arg(long)]
    shift: bool,
    /// Exact dynamic program over a branch decomposition of the whole graph.
    #[arg(long)]
    exact: bool,
    /// Check the result against brute-force enumeration.
    #[arg(long)]
    verify: bool,
    /// Per-slab CSV (PTAS only).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Rooted decomposition JSON (exact only).
    #[arg(long)]
    dump_decomp: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Pairwise {
    AsPublished,
    Agreement,
}

#[derive(Debug, Args)]
struct StereoArgs {
    left: PathBuf,
    right: PathBuf,
    #[arg(long)]
    labels: usize,
    /// Output disparity PGM.
    #[arg(long, short)]
    out: PathBuf,
    #[command(flatten)]
    opts: SolverOpts,
    /// Score offset, or `auto` for the smallest one keeping tables nonnegative.
    #[arg(long, default_value = "auto")]
    beta: String,
    #[arg(long)]
    two_pass: bool,
    /// Median filter radius.
    #[arg(long, default_value_t = 0)]
    smooth: usize,
    #[arg(long, value_enum, default_value_t = Pairwise::Agreement)]
    pairwise: Pairwise,
    #[arg(long, default_value_t = mrf_ptas::vision::DEFAULT_SMOOTHNESS)]
    smoothness: f64,
    /// Ground-truth PGM; prints the mislabel rate.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Tolerance for the mislabel rate, in labels.
    #[arg(long, default_value_t = 0)]
    tolerance: usize,
}

#[derive(Debug, Args)]
struct CcArgs {
    input: PathBuf,
    /// Clustering JSON to write.
    #[arg(long, short)]
    out: PathBuf,
    #[command(flatten)]
    opts: SolverOpts,
    /// Compare against the exhaustive partition optimum (small inputs only).
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Model JSON to sweep.
    #[arg(long, conflicts_with_all = ["left", "scene"])]
    model: Option<PathBuf>,
    /// Left PPM of a stereo pair (with --right and --labels).
    #[arg(long, requires_all = ["right", "labels"])]
    left: Option<PathBuf>,
    #[arg(long)]
    right: Option<PathBuf>,
    #[arg(long)]
    labels: Option<usize>,
    /// Synthetic stereo scene WIDTHxHEIGHT (with --labels and --seed).
    #[arg(long, requires = "labels")]
    scene: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated epsilon values, at least two.
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: gen::Kind,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve::run(a),
        Command::Stereo(a) => stereo::run(a),
        Command::Cc(a) => cc::run(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Gen(a) => gen::run(a.kind),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
