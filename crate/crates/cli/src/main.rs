//! Command-line front end for the `diagonals` library.

mod commands;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "diagonals", version, about = "Exact diagonals, hypergeometric series and their congruences")]
pub struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write data to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ExprArgs {
    /// Expression such as `(1-x-y)^(1/3)/(1-x-y-z)`.
    #[arg(long)]
    expr: String,
    /// Comma-separated variable names.
    #[arg(long, value_delimiter = ',', default_value = "x,y,z")]
    vars: Vec<String>,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: i64,
    #[arg(long)]
    b: i64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Truncated expansion as a JSON series document.
    Expand {
        #[command(flatten)]
        expr: ExprArgs,
        /// Truncation order in every variable.
        #[arg(long)]
        order: u32,
    },
    /// Diagonal coefficients, one per line.
    Diag {
        #[command(flatten)]
        expr: ExprArgs,
        #[arg(long)]
        order: u32,
    },
    /// Hadamard product of univariate series (pFq specs or expressions in x).
    Hadamard {
        #[arg(long = "series", required = true, num_args = 1..)]
        series: Vec<String>,
        #[arg(long)]
        order: usize,
    },
    /// Coefficients of a pFq series.
    Hyp {
        /// Spec such as `3F2([2/9,5/9,8/9],[2/3,1];27)`.
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 10)]
        order: usize,
        /// Print the height instead of coefficients.
        #[arg(long)]
        height: bool,
    },
    /// Global-boundedness witness search and denominator heuristic.
    Gb {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 40)]
        order: usize,
        #[arg(long, default_value = "1000000")]
        c_max: String,
        #[arg(long, default_value = "1000000")]
        d_max: String,
        /// Primes above this bound count against boundedness.
        #[arg(long)]
        prime_bound: Option<u64>,
    },
    /// Hadamard-product splittings of `3F2([a,b,c],[1,e])`.
    Factorize {
        #[arg(long, value_delimiter = ',', num_args = 3)]
        upper: Vec<String>,
        #[arg(long)]
        lower: String,
        #[arg(long, default_value_t = 60)]
        order: usize,
    },
    /// Rational function in 2n variables whose diagonal is the expansion.
    Dl {
        #[command(flatten)]
        expr: ExprArgs,
        /// Compare diagonals through this order.
        #[arg(long)]
        verify: Option<u32>,
        /// Print the full numerator and denominators.
        #[arg(long)]
        full: bool,
    },
    /// Compare the six-variable family fixture against S(n).
    DlFixture {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 3)]
        order: u32,
    },
    /// Closed form, coefficient-sum oracle and series of the family agree.
    FamilyCheck {
        /// Comma-separated `a/b` pairs.
        #[arg(long, value_delimiter = ',', required = true)]
        pairs: Vec<String>,
        #[arg(long, default_value_t = 12)]
        order: u64,
    },
    /// Apply the family ODE to the family series.
    OdeCheck {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 45)]
        order: usize,
    },
    /// Symbolic check of the family recurrence, plus residuals at (a, b).
    RecuCheck {
        #[arg(long, allow_negative_numbers = true)]
        a: Option<i64>,
        #[arg(long)]
        b: Option<i64>,
        #[arg(long, default_value_t = 15)]
        order: usize,
    },
    /// Creative telescoping for a built-in summand.
    Zeilberger {
        /// `binomial`, `binomial-squared` or `family`.
        #[arg(long)]
        summand: String,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
        a: i64,
        #[arg(long, default_value_t = 3)]
        b: i64,
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        /// Verify on brute-force sums through this n.
        #[arg(long, default_value_t = 15)]
        verify: i64,
    },
    /// Series modulo p^r, functional-equation guessing and verification.
    Modp(commands::ModpArgs),
    /// Run an identity suite as JSON lines.
    Identities {
        /// `builtin`.
        #[arg(long, default_value = "builtin")]
        suite: String,
        /// JSON array of cases to run instead of the built-in suite.
        #[arg(long)]
        cases: Option<PathBuf>,
    },
}

/// Exit status classes.
#[derive(Debug)]
pub enum Failure {
    Mismatch(String),
    Usage(anyhow::Error),
    Resource(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
        }
    }
}

pub type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let argv: Vec<String> = std::env::args().collect();
    eprintln!("# diagonals {}: {}", diagonals::VERSION, argv.join(" "));
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(3);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = commands::run(&cli.command, &argv, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Ok(()), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        (Err(f), _) => {
            match &f {
                Failure::Mismatch(m) => eprintln!("mismatch: {m}"),
                Failure::Usage(e) | Failure::Resource(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
