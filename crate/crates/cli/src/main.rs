mod commands;
mod config;
mod expr;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Overrides, Settings};

/// Exact digital sums, digit-count certificates and gap statistics.
#[derive(Debug, Parser)]
#[command(name = "digitsum", version)]
struct Cli {
    /// key = value configuration file (default: $DIGITSUM_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    max_factorial_n: Option<u64>,
    #[arg(long, global = true)]
    max_sparse_n: Option<u32>,
    #[arg(long, global = true)]
    max_exponent: Option<u64>,
    #[arg(long, global = true)]
    factor_limit: Option<u64>,
    /// Starting precision in bits for certified logarithms.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Largest precision tried before reporting an indeterminate result.
    #[arg(long, global = true)]
    max_precision: Option<u32>,
    /// Print the certified radius next to every rigorous value.
    #[arg(long, global = true)]
    show_radius: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Base-b digits of an expression with s_b and c_b.
    Digits {
        expr: String,
        #[arg(long, default_value_t = 10)]
        base: u32,
    },
    /// Minimal exponent ladder for (a, b).
    Ladder {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        k: usize,
    },
    /// Build and validate a certificate; exits 0 only on PASS.
    #[command(subcommand)]
    Certify(CertifyCommand),
    #[command(subcommand)]
    Stewart(StewartCommand),
    /// Digit statistics table over a range of n.
    Scan(ScanArgs),
    #[command(subcommand)]
    Oeis(OeisCommand),
    /// Least k with 3^n | 10^k + 8.
    SparseMultiple {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Debug, Subcommand)]
enum CertifyCommand {
    /// c_b(N) ≥ k from a^{e_k} | N.
    Blocks {
        #[arg(long)]
        n: String,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        /// Ladder length (default: long enough for ν_a(N)).
        #[arg(long)]
        k: Option<usize>,
    },
    /// s_b(m) ≥ (b−1)·r when (b^r − 1) | m.
    Stolarsky {
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 10)]
        base: u32,
        #[arg(long)]
        r: u32,
    },
    /// c_10(a^n) ≥ ⌈log_4 n⌉ for even a not divisible by 10.
    Corollary {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        n: u64,
    },
    /// s_b(n!) and s_b(lcm(1..n)) ≥ (b−1)·⌊log_b(n+1)⌋.
    Special {
        #[arg(long, value_enum)]
        kind: SpecialArg,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 10)]
        base: u32,
    },
    /// c_b(a^n) ≥ k through the reduced divisor of a.
    Power {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpecialArg {
    Factorial,
    Lcm,
}

#[derive(Debug, Subcommand)]
enum StewartCommand {
    /// CSV of the gaps m_{i+1}/m_i of a^n.
    Gaps(RangeArgs),
    /// Exact split chains, ratio estimates and |Λ| < 2r/a^n over a range.
    Check(RangeArgs),
    /// Λ for one split.
    LinearForm {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        i: usize,
    },
    /// −(16nd)^{2(n+2)}·∏ log A_i·log B.
    Baker {
        /// Number of logarithms.
        #[arg(long)]
        n: u64,
        /// Degree of the number field.
        #[arg(long, default_value_t = 1)]
        d: u64,
        /// Heights A_1..A_n (integers, p/q, or `e`).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        heights: Vec<String>,
        #[arg(long = "B")]
        coefficient_bound: String,
        /// Raise heights and B below e to e instead of rejecting them.
        #[arg(long)]
        clamp: bool,
    },
    /// log n/(log log n + C) for one n.
    Floor {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "0")]
        c: String,
    },
    /// CSV of c_b(a^n)·log log n/log n over a range, with its minimum.
    FloorReport(RangeArgs),
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
    #[arg(long)]
    n_from: u64,
    #[arg(long)]
    n_to: u64,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(value_enum)]
    kind: ScanKindArg,
    /// Base of the power (power scans only).
    #[arg(long)]
    a: Option<u64>,
    #[arg(long, default_value_t = 10)]
    b: u64,
    #[arg(long, default_value_t = 0)]
    from: u64,
    #[arg(long)]
    to: u64,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    out: OutFormat,
    /// File for the heuristic curve (required with --out plotdata).
    #[arg(long)]
    heuristic_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanKindArg {
    Power,
    Factorial,
    Lcm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Plotdata,
}

#[derive(Debug, Subcommand)]
enum OeisCommand {
    /// Compare a b-file with a computed sequence.
    Check {
        id: String,
        /// pow:A, digitsum-pow:A:B, nonzero-pow:A:B, factorial, lcm,
        /// digitsum-factorial:B, digitsum-lcm:B
        #[arg(long)]
        gen: String,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Fetch from the network through the cache instead of fixtures.
        #[arg(long)]
        online: bool,
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long)]
        url_template: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        max_factorial_n: cli.max_factorial_n,
        max_sparse_n: cli.max_sparse_n,
        max_exponent: cli.max_exponent,
        factor_limit: cli.factor_limit,
        precision: cli.precision,
        max_precision: cli.max_precision,
        show_radius: cli.show_radius,
    };
    let result = Settings::load(cli.config.as_deref())
        .map_err(commands::CliError::Usage)
        .and_then(|s| commands::run(cli.command, &s.apply(&overrides)));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, commands::CliError::Fail) {
                eprintln!("error: kind={} message={}", e.kind(), e);
            }
            ExitCode::from(e.exit_code())
        }
    }
}
