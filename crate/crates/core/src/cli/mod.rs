//! Command-line front end: build, decompose, reconstruct, vqe, spectrum,
//! wavefunction.
//!
//! Every command validates and parses all inputs before it writes anything,
//! and writes a `<output>.manifest.json` next to its primary output.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};

pub use commands::Outcome;

/// Default root for `build` outputs when `--out-dir` is not given.
pub const DEFAULT_RUNS_DIR: &str = "runs";

#[derive(Debug, Parser)]
#[command(name = "qhamil", version, about = "Matrix Hamiltonians, Pauli decomposition and VQE")]
pub struct Cli {
    /// Output directory (build: root of per-kind directories; others: replaces
    /// the input file's directory).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    /// Seed for VQE parameter initialization and SPSA perturbations.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Coefficient cutoff (decompose, default 1e-12) or relative-error
    /// threshold (spectrum, default 0.01).
    #[arg(long, global = true)]
    pub threshold: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a Hamiltonian matrix file.
    Build(BuildArgs),
    /// Decompose a 2^q x 2^q matrix file into a Pauli sum file.
    Decompose(DecomposeArgs),
    /// Rebuild a matrix file from a Pauli sum file.
    Reconstruct(ReconstructArgs),
    /// Run the variational eigensolver on a Pauli sum file.
    Vqe(VqeArgs),
    /// Compare a matrix spectrum against a reference curve.
    Spectrum(SpectrumArgs),
    /// Emit the site densities of one eigenstate.
    Wavefunction(WavefunctionArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// harmonic-xp, harmonic-ladder, harmonic-corrected, anharmonic-cubic,
    /// anharmonic-quartic, general-potential or susy-musin.
    #[arg(long)]
    pub kind: String,
    /// position or energy (ignored by susy-musin).
    #[arg(long, default_value = "energy")]
    pub basis: String,
    /// Bosonic dimension.
    #[arg(long, visible_alias = "nB")]
    pub n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub g: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega0: f64,
    /// Comma-separated c_0,c_1,... of V(X) = sum c_k X^k.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub coeffs: Vec<f64>,
    /// Explicit output path.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    pub matrix: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    pub pauli: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VqeArgs {
    pub pauli: PathBuf,
    /// Number of entangler + rotation layers after the first rotation layer.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// nelder-mead or spsa.
    #[arg(long, default_value = "nelder-mead")]
    pub optimizer: String,
    #[arg(long, default_value_t = 500)]
    pub max_iterations: usize,
    /// Required improvement of the best energy over the stall window.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    /// seeded-uniform or zeros.
    #[arg(long, default_value = "seeded-uniform")]
    pub init: String,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    pub matrix: PathBuf,
    /// exact, heisenberg-cubic, heisenberg-quartic or musin-susy.
    #[arg(long, default_value = "exact")]
    pub reference: String,
    /// Matrix coupling (alpha, beta or g), mapped to the formula's coupling.
    #[arg(long, allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// Formula coupling used as-is (overrides --coupling).
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Number of lowest levels to compare (default: all).
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    pub matrix: PathBuf,
    /// Eigenstate index, 0 = ground state.
    #[arg(long, default_value_t = 0)]
    pub state: usize,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&args).map_err(|e| Error::Config(e.to_string()))?;
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    run(&cli, &argv)
}

pub fn run(cli: &Cli, argv: &[String]) -> Result<Outcome> {
    let ctx = commands::Context {
        out_dir: cli.out_dir.clone(),
        seed: cli.seed,
        threshold: cli.threshold,
        argv: argv.to_vec(),
    };
    match &cli.command {
        Command::Build(a) => commands::build(&ctx, a),
        Command::Decompose(a) => commands::decompose(&ctx, a),
        Command::Reconstruct(a) => commands::reconstruct(&ctx, a),
        Command::Vqe(a) => commands::vqe(&ctx, a),
        Command::Spectrum(a) => commands::spectrum(&ctx, a),
        Command::Wavefunction(a) => commands::wavefunction(&ctx, a),
    }
}
