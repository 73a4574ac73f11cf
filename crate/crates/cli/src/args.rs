use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "shatterkit", version, about = "Combinatorial dimension, entropy and process suprema of finite function classes")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Cap on worker threads.
    #[arg(long, global = true, env = "SHATTERKIT_THREADS")]
    pub threads: Option<usize>,

    /// Calibration fixture to check against the pinned constants.
    #[arg(long, global = true)]
    pub fixture: Option<PathBuf>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Fat-shattering dimension v(F, t) with a witness.
    Dim(DimArgs),
    /// Packing entropy D(F, X, t).
    Entropy(EntropyArgs),
    /// Bounds on the covering number N(A, rB).
    Cover(CoverArgs),
    /// Cell content Σ(A).
    Cellcontent(CellArgs),
    /// A separating tree.
    Tree(TreeArgs),
    /// Lorentz norms and comparison functions.
    #[command(subcommand)]
    Lorentz(LorentzCommand),
    /// Gaussian process supremum E(F).
    Gauss(SupremumArgs),
    /// Rademacher process supremum.
    Rad(SupremumArgs),
    /// Entropy and dimension integrals.
    #[command(subcommand)]
    Integral(IntegralCommand),
    /// The random class with bounded sup t·sqrt(v) and growing supremum.
    Nosudakov(NoSudakovArgs),
    /// Random coordinate selection experiments.
    Select(SelectArgs),
    /// Coordinate sections of a symmetric polytope.
    Section(SectionArgs),
    /// Run property suites and check the calibration fixture.
    Verify(VerifyArgs),
    /// Replay an experiment manifest.
    Run(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dim(_) => "dim",
            Command::Entropy(_) => "entropy",
            Command::Cover(_) => "cover",
            Command::Cellcontent(_) => "cellcontent",
            Command::Tree(_) => "tree",
            Command::Lorentz(LorentzCommand::Norm(_)) => "lorentz norm",
            Command::Lorentz(LorentzCommand::Compare(_)) => "lorentz compare",
            Command::Gauss(_) => "gauss",
            Command::Rad(_) => "rad",
            Command::Integral(IntegralCommand::Comb(_)) => "integral comb",
            Command::Integral(IntegralCommand::Dudley(_)) => "integral dudley",
            Command::Nosudakov(_) => "nosudakov",
            Command::Select(_) => "select",
            Command::Section(_) => "section",
            Command::Verify(_) => "verify",
            Command::Run(_) => "run",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DimArgs {
    /// Class file, JSON or CSV.
    pub class: PathBuf,
    #[arg(long)]
    pub t: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PackingKind {
    Exact,
    Greedy,
    /// Lower bound on the sup over measures of the L2 entropy.
    Kp,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EntropyArgs {
    pub class: PathBuf,
    #[arg(long)]
    pub t: f64,
    /// `lp:<p>`, `linf`, `lorentz:<generator>`, `tower:<alpha>`,
    /// `ellipsoid:<d1,...>` or `cube`.
    #[arg(long, default_value = "lp:2")]
    pub body: String,
    #[arg(long, value_enum, default_value_t = PackingKind::Exact)]
    pub mode: PackingKind,
    /// Entropy evaluations for `--mode kp`.
    #[arg(long, default_value_t = 200)]
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverKind {
    Greedy,
    Sandwich,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoverArgs {
    pub class: PathBuf,
    #[arg(long)]
    pub radius: f64,
    #[arg(long, default_value = "lp:2")]
    pub body: String,
    #[arg(long, value_enum, default_value_t = CoverKind::Sandwich)]
    pub mode: CoverKind,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CellArgs {
    pub class: PathBuf,
    /// Only count cells inside the integer box `[lo, hi]^n`, given as `lo,hi`.
    #[arg(long)]
    pub bounds: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TreeArgs {
    pub class: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub gap: f64,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// `exhaustive`, `median` or `greedy-potential`.
    #[arg(long, default_value = "exhaustive")]
    pub strategy: String,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(untagged)]
pub enum LorentzCommand {
    /// ‖f‖ in Λ_φ(μ).
    Norm(NormArgs),
    /// The comparison function (φ|ψ)(t).
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NormArgs {
    /// Comma-separated values of f.
    #[arg(long, allow_hyphen_values = true)]
    pub vector: String,
    /// Comma-separated weights; uniform when absent.
    #[arg(long)]
    pub measure: Option<String>,
    /// `power:<p>`, `tower:<alpha>` or `table:<path>`.
    #[arg(long)]
    pub phi: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    #[arg(long)]
    pub phi: String,
    #[arg(long)]
    pub psi: String,
    #[arg(long)]
    pub t: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SupremumArgs {
    pub class: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(untagged)]
pub enum IntegralCommand {
    /// ∫ sqrt(v(F, t)) dt.
    Comb(IntegralArgs),
    /// ∫ sqrt(log N(F, L2(μ), t)) dt.
    Dudley(IntegralArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IntegralArgs {
    pub class: PathBuf,
    /// Comma-separated increasing grid; breakpoints of the integrand when absent.
    #[arg(long)]
    pub grid: Option<String>,
    /// Comma-separated weights for the Dudley integral; the class measure or
    /// uniform when absent.
    #[arg(long)]
    pub measure: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NoSudakovArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.125)]
    pub alpha_cap: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    /// Rows kept per summand, as a power of two.
    #[arg(long, default_value_t = 16)]
    pub cap_log2: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SelectArgs {
    /// Experiment as JSON, inline or a file path, e.g.
    /// `{"kind":"binomial","m":100,"delta":0.3,"epsilon":0.5,"t":15}`.
    pub experiment: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SectionArgs {
    /// Polytope file `{"vertices": [[...], ...]}`.
    pub polytope: PathBuf,
    /// The constant M; estimated by Monte Carlo when absent.
    #[arg(long = "m")]
    pub m: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub min_size: usize,
    /// `exhaustive` or `greedy-drop`.
    #[arg(long, default_value = "exhaustive")]
    pub mode: String,
    /// Samples for the estimate of M.
    #[arg(long, default_value_t = 2000)]
    pub samples: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Suites to run; all when absent.
    #[arg(long = "suite")]
    pub suites: Vec<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunArgs {
    pub manifest: PathBuf,
}
