use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "linvar", version, about = "Linear-invariant properties of Boolean functions over F2^n")]
pub struct Cli {
    /// Worker threads for parallel library operations.
    #[arg(long, global = true, env = "LINVAR_THREADS")]
    pub threads: Option<usize>,
    /// Add wall-clock timing to the JSON report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// A function given by `--fn` and, when the source needs it, `--n`.
#[derive(Args, Debug, Clone, Serialize)]
pub struct FnArgs {
    /// const0 | const1 | hyperplane:<bits> | bent | random:<seed>:<density> | anf:<expr> | file:<path>
    #[arg(long = "fn", value_name = "SOURCE")]
    #[serde(rename = "fn")]
    pub source: String,
    #[arg(long)]
    pub n: Option<usize>,
}

/// Forbidden systems: `--family` (JSON, `rm:<d>` or `@file`) or a single `--system`.
#[derive(Args, Debug, Clone, Serialize)]
pub struct FamilyArgs {
    #[arg(long, conflicts_with = "system")]
    pub family: Option<String>,
    /// JSON `{"rows": [...], "sigma": "..."}` or `@file`.
    #[arg(long)]
    pub system: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleModeArg {
    Subspace,
    Points,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Green,
    Functional,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleArg {
    /// E(k) = eps
    Const,
    /// E(k) = eps / 2^k
    Halving,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    /// f is constant
    Constant,
    /// f is identically zero
    Zero,
    /// algebraic degree at most 1
    Rm1,
    /// algebraic degree at most 2
    Rm2,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Density, spectrum summary and uniformity.
    Analyze(AnalyzeArgs),
    /// Exact number of tuples inducing a system.
    Count(CountArgs),
    /// Freeness from a family, with a witness when not free.
    Free(FreeArgs),
    /// Re-check a witness tuple against a system.
    Verify(VerifyArgs),
    /// Run the oblivious one-sided tester.
    Test(TestArgs),
    /// Estimate the single-trial rejection probability.
    Estimate(EstimateArgs),
    /// Regularity partition of a function.
    Regularize(RegularizeArgs),
    /// Cauchy-Schwarz complexity of a system.
    Complexity(ComplexityArgs),
    /// Subspace-free sets: the extremal construction or a search in a given set.
    Turan(TuranArgs),
    /// Monochromatic subspaces in 2-colourings.
    Ramsey(RamseyArgs),
    /// The Reed-Muller forbidden family.
    Rm(RmArgs),
    /// Forbidden family of a builtin property.
    Obstructions(ObstructionArgs),
    /// Exact distance to the nearest free function (small n).
    Distance(DistanceArgs),
    /// Write a function as a truth-table file.
    Table(TableArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub func: FnArgs,
    /// Uniformity threshold, e.g. 1/4 or 0.25.
    #[arg(long)]
    pub eps: Option<String>,
    /// Include every Fourier numerator (coefficient times 2^n).
    #[arg(long)]
    pub spectrum: bool,
    /// Include the algebraic normal form.
    #[arg(long)]
    pub anf: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct CountArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub func: FnArgs,
    #[arg(long)]
    pub system: String,
}

#[derive(Args, Debug, Serialize)]
pub struct FreeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub func: FnArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub func: FnArgs,
    #[arg(long)]
    pub system: String,
    /// Comma-separated bit strings, one per variable.
    #[arg(long)]
    pub witness: String,
}

#[derive(Args, Debug, Serialize)]
pub struct TestArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub func: FnArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value = "1/4")]
    pub eps: String,
    /// Dimension of the sampled subspace.
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Check exhaustively when n is at most this.
    #[arg(long, default_value_t = 0)]
    pub cutoff: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "subspace")]
    pub sample_mode: SampleModeArg,
}

#[derive(Args, Debug, Serialize)]
pub struct EstimateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub func: FnArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "subspace")]
    pub sample_mode: SampleModeArg,
}

#[derive(Args, Debug, Serialize)]
pub struct RegularizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub func: FnArgs,
    #[arg(long)]
    pub eps: String,
    #[arg(long, value_enum, default_value = "green")]
    pub method: Method,
    /// Codimension of the starting subspace.
    #[arg(long, default_value_t = 0)]
    pub codim: usize,
    #[arg(long)]
    pub max_order: Option<usize>,
    #[arg(long, default_value_t = 256)]
    pub max_rounds: usize,
    /// Parameter schedule for the functional method.
    #[arg(long, value_enum, default_value = "const")]
    pub schedule: ScheduleArg,
    /// Include per-coset densities and largest coefficients.
    #[arg(long)]
    pub cosets: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ComplexityArgs {
    #[arg(long)]
    pub system: String,
}

#[derive(Args, Debug, Serialize)]
pub struct TuranArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: Option<usize>,
    /// Search the support of this function instead of the extremal set.
    #[arg(long = "fn", value_name = "SOURCE")]
    #[serde(rename = "fn")]
    pub source: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct RamseyArgs {
    #[arg(long)]
    pub d: usize,
    /// Colouring given by the support of a function; without it the minimal N is computed.
    #[arg(long = "fn", value_name = "SOURCE")]
    #[serde(rename = "fn")]
    pub source: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Look for a flat not through 0 instead of a subspace.
    #[arg(long, requires = "source")]
    pub strict_affine: bool,
    /// Print the affine recursion value N_a(d).
    #[arg(long, conflicts_with = "source")]
    pub bound: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct RmArgs {
    #[arg(long)]
    pub d: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct ObstructionArgs {
    #[arg(long, value_enum)]
    pub property: Property,
    #[arg(long, default_value_t = 3)]
    pub max_d: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct DistanceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub func: FnArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct TableArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub func: FnArgs,
    /// Write the file here instead of embedding it in the report.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
