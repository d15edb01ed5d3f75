//! `nkindex`: command-line access to necklace, Lyndon-word, irreducible
//! polynomial and BCH matrix indexing.
//!
//! Exit codes: 0 on success (including `TOO_LARGE`), 1 when `selftest`
//! finds a mismatch, 2 for malformed input, 3 for an invalid advice file,
//! 4 when a size guardrail is exceeded.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "nkindex", version, about = "Index necklaces, Lyndon words, irreducible polynomials and BCH matrices")]
pub struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Counting pipeline for q-ary words.
    #[arg(long, value_enum, default_value_t = PipelineArg::Auto, global = true)]
    pub pipeline: PipelineArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One JSON object per result: `{op, inputs, result}`.
    JsonLines,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PipelineArg {
    Auto,
    Direct,
    Encoded,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Necklaces: orbits of words under rotation, named by their least rotation.
    #[command(subcommand)]
    Necklace(FamilyCmd),
    /// Lyndon words: necklaces of size exactly n.
    #[command(subcommand)]
    Lyndon(FamilyCmd),
    /// Orbits with a member below WORD (or |G_{x,p}| and |G_{x,<=p}| with --period).
    ClassesLess {
        word: String,
        #[arg(short, long, default_value = "2")]
        q: String,
        #[arg(long)]
        period: Option<usize>,
    },
    /// Monic irreducible polynomials over F_q.
    #[command(subcommand)]
    Irred(IrredCmd),
    /// BCH generator and parity-check matrices.
    #[command(subcommand)]
    Bch(BchCmd),
    /// Top-heavy binary words.
    #[command(subcommand)]
    Topheavy(TopHeavyCmd),
    /// Compare every fast path with brute force at reduced bounds.
    #[command(hide = true)]
    Selftest {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    /// Total number of necklaces and of Lyndon words.
    Count { n: usize, q: String },
    /// The J-th member (1-based) in lexicographic order.
    Index { n: usize, q: String, j: String },
    /// Rank of the orbit of WORD, and its least rotation.
    Rank {
        word: String,
        #[arg(short, long, default_value = "2")]
        q: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum IrredCmd {
    /// |I_{q,n}|.
    Count { q_spec: String, n: usize },
    /// The I-th irreducible polynomial, as coefficients low degree first.
    Index {
        q_spec: String,
        n: usize,
        i: String,
        #[arg(long)]
        advice: String,
    },
    /// Search for a primitive polynomial and print it as an advice file.
    GenAdvice {
        q_spec: String,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Primes of q^n - 1, comma or space separated; factored here if absent.
        #[arg(long)]
        factors: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct BchArgs {
    #[arg(long)]
    pub advice: String,
    /// Degree bound.
    #[arg(long)]
    pub d: String,
}

#[derive(Subcommand, Debug)]
pub enum BchCmd {
    /// Row counts, or the description of one row with --row.
    Rows {
        #[command(flatten)]
        code: BchArgs,
        #[arg(long)]
        row: Option<String>,
    },
    /// Generator entry at row R and the column named by a field element.
    GenEntry {
        #[command(flatten)]
        code: BchArgs,
        #[arg(long)]
        row: String,
        /// `0`, `g^K`, or base-field coefficients low degree first.
        #[arg(long)]
        col: String,
    },
    /// Parity-check entry at row R and a nonzero column element.
    PcEntry {
        #[command(flatten)]
        code: BchArgs,
        #[arg(long)]
        row: String,
        #[arg(long)]
        col: String,
    },
    /// The whole generator matrix, one row per line.
    GenMatrix {
        #[command(flatten)]
        code: BchArgs,
    },
    /// The whole parity-check matrix, one row per line.
    PcMatrix {
        #[command(flatten)]
        code: BchArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum TopHeavyCmd {
    /// Whether WORD is top-heavy.
    Check { word: String },
    /// The unique top-heavy rotation of WORD (prime length).
    Canon { word: String },
    /// Number of top-heavy words of prime length N.
    Count { n: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
