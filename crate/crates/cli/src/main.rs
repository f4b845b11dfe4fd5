mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Classify, construct and verify solutions of a + b + c = alpha I,
/// a^2 + b^2 + c^2 = beta I, a^3 + b^3 + c^3 = gamma I.
#[derive(Debug, Parser)]
#[command(name = "matsys", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Case analysis of (alpha, beta, gamma)
    Classify(ClassifyArgs),
    /// Build a solution and write it as JSON
    Construct(Box<ConstructArgs>),
    /// Check a solution file against a relation set
    Verify(VerifyArgs),
    /// Semigroup flag, algebra and center of a nilpotent solution
    Flag(FlagArgs),
    /// Truncated noncommutative Groebner basis and normal forms
    Ncgb(NcgbArgs),
    /// Noncommuting quaternion solutions for v = v1 + v2 i
    Quat(QuatArgs),
    /// Roots of a rational polynomial
    Roots(RootsArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    #[value(name = "generic")]
    Generic,
    #[value(name = "t2")]
    T2,
    #[value(name = "t3")]
    T3,
    #[value(name = "nil-n2")]
    NilN2,
    #[value(name = "nil-n3")]
    NilN3,
    #[value(name = "nil-n9")]
    NilN9,
    #[value(name = "real-even")]
    RealEven,
    #[value(name = "solve-u")]
    SolveU,
    #[value(name = "sigma-71")]
    Sigma71,
    #[value(name = "sigma-72")]
    Sigma72,
    #[value(name = "sigma-nonnil")]
    SigmaNonnil,
    #[value(name = "tsys")]
    Tsys,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub case: Case,
    /// Right-hand sides; complex values for solve-u are written "re,im"
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Size of the generic solution
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub phi: Option<usize>,
    #[arg(long)]
    pub psi: Option<usize>,
    #[arg(long)]
    pub theta: Option<usize>,
    /// Use a square-zero nilpotent block E_{1k} in each block of size k >= 2
    #[arg(long)]
    pub square_zero: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Size of the noncommuting block (t3), or of the blocks (real-even, tsys)
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of diagonal coordinates (t3)
    #[arg(long)]
    pub diag: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// Conjugate a triple by a random unimodular matrix
    #[arg(long)]
    pub conjugate: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; the document goes to standard output when absent
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: std::path::PathBuf,
    /// SYS, R21, R41, R51, THM4_DEG4, THM4_DEG5, SIGMA, TSYS or PATTERN_721
    #[arg(long)]
    pub relations: Option<String>,
    #[arg(long)]
    pub context: Option<std::path::PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct FlagArgs {
    #[arg(long = "in")]
    pub input: std::path::PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct NcgbArgs {
    /// Preset generator set: s4, s3, s2, s21, s21v or remark121
    #[arg(long, conflicts_with = "gens", required_unless_present = "gens")]
    pub system: Option<String>,
    /// File of generators, one polynomial per line
    #[arg(long)]
    pub gens: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 6)]
    pub maxdeg: u32,
    /// File of polynomials to reduce, one per line
    #[arg(long)]
    pub reduce: Option<std::path::PathBuf>,
    /// Print every basis element
    #[arg(long)]
    pub print_basis: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct QuatArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub v1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub v2: f64,
    /// Search for noncommuting solutions
    #[arg(long)]
    pub solve: bool,
    #[arg(long, default_value_t = 400)]
    pub attempts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    /// Coefficients, constant term first, e.g. -6,0,0,1
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub coeffs: Vec<String>,
    #[arg(long)]
    pub json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code.into(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
