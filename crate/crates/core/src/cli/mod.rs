//! Command-line front end: `bench`, `verify`, `find-prime`, `transform`.

pub mod bench;
pub mod transform;
pub mod vecio;
pub mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use crate::ntt::{PlanOptions, Strategy};
use crate::prime::{find_ntt_prime, SearchDirection};
use crate::word::WordParams;
use bench::BenchConfig;
use transform::{Direction, TransformJob};
use verify::VerifyLevel;

#[derive(Debug, Parser)]
#[command(name = "lazy-ntt", version, about = "Word-size NTTs with lazy-reduction butterflies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time forward transforms and report cost per butterfly.
    Bench(BenchArgs),
    /// Run the built-in correctness checks.
    Verify(VerifyArgs),
    /// Print a prime p ≡ 1 mod 2^ell with the given bit length.
    FindPrime(FindPrimeArgs),
    /// Transform a vector file.
    Transform(TransformArgs),
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// log2 of the transform length.
    #[arg(long, default_value_t = 11)]
    pub ell: u32,
    /// Strategies to time; repeat or comma-separate. Defaults to all.
    #[arg(long, value_delimiter = ',')]
    pub strategy: Vec<Strategy>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 50)]
    pub warmup: usize,
    /// Modulus (default: largest 62-bit prime ≡ 1 mod 2^ell).
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Print CSV instead of a table.
    #[arg(long)]
    pub csv: bool,
    /// Also write the CSV to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Use the dedicated W = 1 butterfly for the first twiddle of each block.
    #[arg(long)]
    pub fast_unit: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = VerifyLevel::Quick)]
    pub level: VerifyLevel,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Write butterfly counterexamples as CSV to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FindPrimeArgs {
    #[arg(long)]
    pub bits: u32,
    #[arg(long)]
    pub ell: u32,
    /// Smallest prime in the window instead of the largest.
    #[arg(long)]
    pub smallest: bool,
    #[arg(long, default_value_t = 64)]
    pub word_bits: u32,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub ell: u32,
    #[arg(long, value_enum, default_value_t = Direction::Forward)]
    pub direction: Direction,
    #[arg(long, default_value_t = Strategy::ShoupLazy)]
    pub strategy: Strategy,
    /// Raw little-endian 8-byte words instead of text.
    #[arg(long)]
    pub binary: bool,
    /// Multiply the inverse output by 1/L.
    #[arg(long)]
    pub scale: bool,
}

fn run_bench(args: BenchArgs) -> anyhow::Result<ExitCode> {
    if let Some(cpu) = bench::pin_from_env() {
        eprintln!("pinned to cpu {cpu}");
    }
    let cfg = BenchConfig {
        ell: args.ell,
        strategies: if args.strategy.is_empty() { Strategy::ALL.to_vec() } else { args.strategy },
        trials: args.trials,
        warmup: args.warmup,
        p: args.p,
        seed: args.seed,
        options: PlanOptions { unit_twiddle_fast_path: args.fast_unit },
    };
    let report = bench::run_bench(&cfg)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.csv {
        report.write_csv(&mut out)?;
    } else {
        report.write_table(&mut out)?;
    }
    if let Some(path) = args.out {
        let mut f = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
        report.write_csv(&mut f)?;
        f.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let report = verify::run_verify(args.level, args.seed)?;
    report.write_text(&mut io::stdout().lock())?;
    if let Some(path) = args.report {
        let mut f = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
        report.write_violation_csv(&mut f)?;
        f.flush()?;
    }
    if report.passed() {
        println!("all checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("verification FAILED");
        Ok(ExitCode::FAILURE)
    }
}

fn run_find_prime(args: FindPrimeArgs) -> anyhow::Result<ExitCode> {
    let wp = WordParams::new(args.word_bits)?;
    let dir = if args.smallest { SearchDirection::SmallestAbove } else { SearchDirection::LargestBelow };
    println!("{}", find_ntt_prime(wp, args.bits, args.ell, dir)?);
    Ok(ExitCode::SUCCESS)
}

fn run_transform(args: TransformArgs) -> anyhow::Result<ExitCode> {
    let job = TransformJob {
        p: args.p,
        ell: args.ell,
        direction: args.direction,
        strategy: args.strategy,
        scale: args.scale,
    };
    transform::transform_file(&args.input, &args.output, args.binary, &job)?;
    Ok(ExitCode::SUCCESS)
}

/// Run a parsed command line. Errors are for bad input; failed checks are
/// reported through the exit code.
pub fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Bench(a) => run_bench(a),
        Command::Verify(a) => run_verify(a),
        Command::FindPrime(a) => run_find_prime(a),
        Command::Transform(a) => run_transform(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from(["lazy-ntt", "bench", "--strategy", "baseline,shoup", "--trials", "3"]).unwrap();
        match cli.command {
            Command::Bench(a) => {
                assert_eq!(a.strategy, vec![Strategy::Baseline, Strategy::ShoupLazy]);
                assert_eq!(a.ell, 11);
                assert_eq!(a.trials, 3);
            }
            other => panic!("{other:?}"),
        }
        let cli = Cli::try_parse_from(["lazy-ntt", "verify", "--level", "exhaustive"]).unwrap();
        assert!(matches!(cli.command, Command::Verify(VerifyArgs { level: VerifyLevel::Exhaustive, .. })));
        assert!(Cli::try_parse_from(["lazy-ntt", "find-prime", "--bits", "7"]).is_err());
        assert!(Cli::try_parse_from(["lazy-ntt", "bench", "--strategy", "nope"]).is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
