use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_rational::BigRational;
use quperf_core::search::SearchMode;
use quperf_core::RingId;

#[derive(Parser, Debug)]
#[command(name = "quperf", version, about = "Unitary divisor functions and perfect-number searches in the nine imaginary quadratic UFDs")]
pub struct Cli {
    /// Ring O_Q(√d); one of -1, -2, -3, -7, -11, -19, -43, -67, -163.
    #[arg(long, global = true, allow_negative_numbers = true, value_parser = parse_ring)]
    pub ring: Option<RingId>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Suppress informational messages on standard error.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    /// Factor norms above 2^64 instead of refusing them.
    #[arg(long, global = true)]
    pub allow_large: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decomposition of an integer prime in the ring.
    Classify {
        #[arg(long)]
        prime: BigUint,
    },
    /// Unit and canonical prime factorization of an element.
    Factor(ElementArg),
    /// δ*_n(z), the sum of |d|^n over unitary divisors d.
    Delta(ElementPower),
    /// I*_n(z) = δ*_n(z) / |z|^n.
    Istar(ElementPower),
    /// Canonical unitary divisors of an element.
    Divisors(ElementArg),
    /// Search for z with I*_n(z) = t.
    Search(SearchArgs),
    /// Run a structural check and report violations.
    Verify(VerifyArgs),
    /// Image of a positive integer under the multiplicative lift g.
    Gmap {
        #[arg(long)]
        n: u64,
    },
    /// Unitary divisor sum σ*_k(n), or the set {n ≤ B : σ*(n) = b·n}.
    SigmaStar(SigmaArgs),
}

#[derive(Args, Debug)]
pub struct ElementArg {
    /// Element in basis form (`3+2w`) or with a square root (`1+i`, `(1+sqrt(-7))/2`).
    #[arg(long, allow_hyphen_values = true)]
    pub element: String,
}

#[derive(Args, Debug)]
pub struct ElementPower {
    #[arg(long, allow_hyphen_values = true)]
    pub element: String,
    #[arg(long, allow_negative_numbers = true)]
    pub power: i64,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Exponent n ≥ 1.
    #[arg(long)]
    pub power: u32,
    /// Rational target t > 1, e.g. `2` or `3/2`.
    #[arg(long, value_parser = parse_rational)]
    pub target: BigRational,
    /// Largest norm N(z) searched, at most 10^8.
    #[arg(long)]
    pub max_norm: u64,
    /// `elements` scans every sector element; `signatures` enumerates factorization shapes.
    #[arg(long, value_parser = parse_mode, default_value = "elements")]
    pub mode: SearchMode,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Progress file; an existing one is resumed if its parameters match.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Emit non-hit records too.
    #[arg(long)]
    pub verbose: bool,
    /// Norms per task in elements mode.
    #[arg(long)]
    pub chunk: Option<u64>,
    /// Finish at most this many tasks, then stop; resume with the same checkpoint.
    #[arg(long)]
    pub stop_after_tasks: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    /// Every hit with n ∈ {1, 2} and integer t has even norm.
    #[value(name = "thm2.2", alias = "even-norm")]
    EvenNorm,
    /// Prime-count bound for Gaussian hits with n = 2.
    #[value(name = "thm2.3", alias = "gaussian-count")]
    GaussianCount,
    /// Numerators of I*_2 over d = -3 are prime to 3.
    #[value(name = "thm2.4", alias = "eisenstein-numerator")]
    EisensteinNumerator,
    /// Mod-6 conditions on n = 2, t = 2 hits with 3 ∤ N(z).
    #[value(name = "thm2.5", alias = "mod6")]
    Mod6,
    /// The lift g maps unitary b-perfect integers to hits with n = 1.
    #[value(name = "thm2.6", alias = "lift")]
    Lift,
    /// Interval bounds on the zeta-quotient constants.
    Zeta,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: Check,
    /// Search bound for checks that collect hits.
    #[arg(long, default_value_t = 10_000)]
    pub max_norm: u64,
    /// Check saved search output (JSON lines) instead of searching.
    #[arg(long)]
    pub hits: Option<PathBuf>,
    /// Restrict the even-norm check to one power.
    #[arg(long)]
    pub power: Option<u32>,
    /// Integer target; defaults to 2..=6 for thm2.2 and 2 for thm2.3.
    #[arg(long)]
    pub target: Option<i64>,
    /// Ratio b for thm2.6.
    #[arg(long, value_parser = parse_rational)]
    pub ratio: Option<BigRational>,
    /// Sweep bound for U(b) in thm2.6.
    #[arg(long, default_value_t = 100_000)]
    pub bound: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("what").required(true).args(["n", "upto"])))]
pub struct SigmaArgs {
    #[arg(long)]
    pub n: Option<BigUint>,
    /// List every m ≤ UPTO with σ*(m) = ratio·m.
    #[arg(long)]
    pub upto: Option<u64>,
    /// Exponent k in σ*_k.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, value_parser = parse_rational)]
    pub ratio: Option<BigRational>,
}

fn parse_ring(s: &str) -> Result<RingId, String> {
    s.parse::<RingId>().map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.trim().parse::<BigRational>().map_err(|_| format!("{s:?} is not a rational number like 2 or 3/2"))
}

fn parse_mode(s: &str) -> Result<SearchMode, String> {
    s.parse::<SearchMode>().map_err(|e| e.to_string())
}
