//! `mersexp`: closed-form inverses modulo `2^n - 1`, carry certificates and
//! small-field S-box checks from the command line.
//!
//! Exit codes: 0 success, 2 not invertible, 3 bad parameters, 4 congruence
//! failure, 5 audit mismatch or internal inconsistency.

mod commands;
mod numbers;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use numbers::{parse_big, parse_u32, parse_u64};

#[derive(Debug, Parser)]
#[command(
    name = "mersexp",
    version,
    about = "Inverses of Gold, Kasami and Bracken-Leander exponents modulo 2^n-1"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Text mode: print only the headline value. Suppresses warnings on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Gold,
    Kasami,
    Bl,
    Raw,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form inverse of a family exponent (raw: extended Euclid).
    Inverse {
        #[arg(value_enum)]
        family: FamilyArg,
        /// Family parameter (gold, kasami, bl).
        #[arg(long, value_parser = parse_u64)]
        r: Option<u64>,
        /// Modulus exponent; bl defaults to 4r.
        #[arg(long, value_parser = parse_u32)]
        n: Option<u32>,
        /// Exponent to invert (raw only).
        #[arg(long, value_parser = parse_big)]
        l: Option<BigUint>,
    },
    /// Carry sequence certifying s ≡ l·a (mod 2^n - 1).
    Carry {
        /// gold<r>, kasami<r>, bl<r>, raw<l>, or a signed power form like "2^6-2^3+2^0".
        lspec: String,
        #[arg(long, value_parser = parse_big)]
        a: BigUint,
        #[arg(long, value_parser = parse_big)]
        s: BigUint,
        #[arg(long, value_parser = parse_u32)]
        n: u32,
        /// Decimation step for the matrix view and pairwise check; defaults to the family parameter, else 1.
        #[arg(long, value_parser = parse_u64)]
        r: Option<u64>,
    },
    /// Sweeps every closed form against the extended-Euclid reference.
    Audit {
        #[arg(long = "n-min", value_parser = parse_u32)]
        n_min: u32,
        #[arg(long = "n-max", value_parser = parse_u32)]
        n_max: u32,
    },
    /// Differential uniformity and degree of x -> x^l over GF(2^n).
    Analyze {
        #[arg(long, value_parser = parse_big)]
        l: BigUint,
        #[arg(long, value_parser = parse_u32)]
        n: u32,
        /// Reduction polynomial as an (n+1)-bit word; defaults to the smallest irreducible.
        #[arg(long, value_parser = parse_u64)]
        poly: Option<u64>,
    },
    /// Known APN / 4-uniform exponent families instantiated at n.
    Catalog {
        #[arg(long, value_parser = parse_u32)]
        n: u32,
    },
}

/// Why a command stopped.
#[derive(Debug)]
pub enum Failure {
    Core(mersexp::Error),
    Usage(String),
}

impl From<mersexp::Error> for Failure {
    fn from(e: mersexp::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        use mersexp::Error::*;
        match self {
            Failure::Usage(_) => 3,
            Failure::Core(NotInvertible { .. }) => 2,
            Failure::Core(InvalidParameter(_) | ModulusMismatch { .. } | AllOnesWord(_)) => 3,
            Failure::Core(Inconsistent(_)) => 4,
            Failure::Core(Internal(_)) => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json_mode = cli.format == Format::Json;
    let outcome = match cli.command {
        Command::Inverse { family, r, n, l } => commands::inverse(family, r, n, l),
        Command::Carry { lspec, a, s, n, r } => commands::carry(&lspec, &a, &s, n, r),
        Command::Audit { n_min, n_max } => commands::audit(n_min, n_max),
        Command::Analyze { l, n, poly } => commands::analyze(&l, n, poly),
        Command::Catalog { n } => commands::catalog(n),
    };
    match outcome {
        Ok((doc, code)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(doc.render(json_mode, cli.quiet).as_bytes());
            if !json_mode && !cli.quiet {
                for w in &doc.warnings {
                    eprintln!("warning: {w}");
                }
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
