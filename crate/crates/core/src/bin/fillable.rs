use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fillable::harness::{self, BackendKind, BenchConfig, Dist, FuzzConfig, Mix, PermTestConfig};

/// Fillable-array harness: differential fuzzing, cost measurement, trace
/// replay and permutation statistics.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run random sequences against the oracle and report mismatches.
    Fuzz {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        ops: usize,
        #[arg(long, default_value_t = 100)]
        seqs: usize,
        #[arg(long)]
        backend: BackendKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fill the arena with garbage before construction.
        #[arg(long)]
        garbage: bool,
        /// Operation weights as write:read:fill.
        #[arg(long, default_value = "60:35:5")]
        mix: Mix,
        #[arg(long, default_value_t = 64)]
        width: u32,
    },
    /// Measure access counts and latency per operation kind.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        ops: usize,
        #[arg(long, default_value_t = 1)]
        seqs: usize,
        #[arg(long)]
        backend: BackendKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// uniform, sequential or lowblock.
        #[arg(long, default_value = "uniform")]
        dist: Dist,
        #[arg(long)]
        garbage: bool,
        #[arg(long, default_value = "60:35:5")]
        mix: Mix,
        #[arg(long, default_value_t = 64)]
        width: u32,
    },
    /// Replay a trace file, checking expected read values.
    Replay {
        trace: PathBuf,
        /// Override the backend named in the trace header.
        #[arg(long)]
        backend: Option<BackendKind>,
    },
    /// Check bijectivity and pairwise statistics of the permutation family.
    PermTest {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Fuzz { n, ops, seqs, backend, seed, garbage, mix, width } => {
            let cfg = FuzzConfig { backend, n, w: width, ops, seqs, seed, garbage, mix };
            harness::fuzz(&cfg).map(|r| (r.render(), r.passed()))
        }
        Command::Bench { n, ops, seqs, backend, seed, dist, garbage, mix, width } => {
            let cfg = BenchConfig { backend, n, w: width, ops, seqs, seed, dist, garbage, mix };
            harness::bench(&cfg).map(|r| (r.render(), r.passed()))
        }
        Command::Replay { trace, backend } => {
            harness::replay(&trace, backend).map(|r| (r.render(), r.passed()))
        }
        Command::PermTest { n, samples, seed, threshold } => {
            let cfg = PermTestConfig { seed, threshold, ..PermTestConfig::new(n, samples) };
            harness::perm_test(&cfg).map(|r| (r.render(), r.passed()))
        }
    };
    match outcome {
        Ok((text, passed)) => {
            print!("{text}");
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
