use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tmtower::pte::DEFAULT_BUDGET;

/// Thue-Morse transform tower: sequences, identity checks, PTE verdicts and
/// factor complexity.
#[derive(Debug, Parser)]
#[command(name = "tmtower", version)]
pub struct Cli {
    /// Maximum number of points a sweep may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,

    /// Worker threads for interval sweeps (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Emit the report as a JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the first terms of a sequence.
    Seq(SeqArgs),
    /// Apply the Thue-Morse transform to a seed.
    Transform(TransformArgs),
    /// Check an identity family and report violations.
    #[command(subcommand)]
    Verify(Verify),
    /// Factor complexity profile of a tower level.
    Complexity(ComplexityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Bfile,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// `a_m(n)`.
    Level,
    /// Positions where `a_m` is 0.
    Evil,
    /// Positions where `a_m` is 1.
    Odious,
    /// The correction `c_m(n)`.
    Correction,
    /// `a_m(n) XOR a_m(n+1)`.
    Derived,
    /// Fibonacci-Thue-Morse.
    Ftm,
    /// Meta-Thue-Morse.
    M2,
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    #[arg(long, default_value_t = 0)]
    pub level: u64,
    #[arg(long)]
    pub count: u64,
    #[arg(long, value_enum, default_value_t = Kind::Level)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
pub struct TransformArgs {
    /// Built-in seed: `tm`, `ftm`, `m2` or `level:<m>`.
    #[arg(long, group = "source")]
    pub seed: Option<String>,
    /// File holding a 0/1 word or a b-file.
    #[arg(long, group = "source")]
    pub seed_file: Option<PathBuf>,
    #[arg(long)]
    pub count: u64,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Iterated operator against the bitmask closed form.
    ClosedForm {
        #[arg(long)]
        level: u64,
        #[arg(long, default_value_t = 1 << 16)]
        count: u64,
    },
    /// Same-level composition identities.
    Composition {
        #[arg(long)]
        level: u64,
        #[arg(long, default_value_t = 10_000)]
        max_n: u64,
    },
    /// Cross-level composition identities, outer level `--level`.
    Cross {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        inner: u64,
        #[arg(long, default_value_t = 10_000)]
        max_n: u64,
    },
    /// Correction of the Mersenne level `2^k - 1` as a shifted level.
    Mersenne {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1 << 16)]
        max_n: u64,
    },
    /// The three-level identity relating levels 3, 5 and 7.
    EquivalenceM7 {
        #[arg(long, default_value_t = 1 << 12)]
        max_n: u64,
    },
    /// Equal power sums for the partition by one level on `[0, B^L)`.
    Pte {
        #[arg(long)]
        level: u64,
        #[arg(long = "L")]
        l: u64,
    },
    /// Equal power sums for the partition by several levels on `[0, 2^L)`.
    Multi {
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<u64>,
        #[arg(long = "L")]
        l: u64,
    },
    /// Equal power sums for the base-d partition.
    PteD {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        level: u64,
        /// Number of periods; the interval is `d^(2^K L)`.
        #[arg(long = "L", conflicts_with = "digits")]
        l: Option<u64>,
        /// Interval exponent; the interval is `d^digits`.
        #[arg(long)]
        digits: Option<u64>,
    },
    /// Base-d level-0 composition identities.
    Alpha {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 10_000)]
        max_n: u64,
    },
    /// Meta-Thue-Morse: dual construction and equal power sums on `[0, 2^L)`.
    M2 {
        #[arg(long = "L")]
        l: u64,
        #[arg(long, default_value_t = 1 << 16)]
        max_n: u64,
    },
    /// Fibonacci-Thue-Morse balance (degree 0) or defects (1, 2) on `[0, F_3r)`.
    Fib {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=2))]
        degree: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Formula,
    Desub,
    All,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    #[arg(long)]
    pub level: u64,
    #[arg(long)]
    pub max: usize,
    #[arg(long, value_enum, default_value_t = Method::Brute)]
    pub method: Method,
    /// Largest n brute-forced when `--method all`.
    #[arg(long, default_value_t = 200)]
    pub brute_max: usize,
    /// Prefix cap for brute-force counting.
    #[arg(long, default_value_t = tmtower::complexity::DEFAULT_PREFIX_CAP)]
    pub prefix_cap: u64,
    /// Print the piecewise formula instead of the values.
    #[arg(long)]
    pub pieces: bool,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
}
