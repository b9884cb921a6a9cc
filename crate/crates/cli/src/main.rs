//! `ctqw` — compile sparse-graph quantum-walk operators into elementary
//! gate circuits and verify them against dense exact-evolution references.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use ctqw_core::SegmentMode;

#[derive(Parser)]
#[command(
    name = "ctqw",
    version,
    about = "Quantum-walk circuit compiler and verifier for sparse graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a graph into rooted forests, color them, and list the star
    /// forests one star per line.
    Decompose(DecomposeArgs),
    /// Compile a circuit approximating exp(-i*gamma*A*t) and write it to a
    /// file, reporting plan and cost figures as key=value lines.
    Synthesize(SynthesizeArgs),
    /// Measure the spectral distance between a circuit file and the exact
    /// walk operator of a graph.
    Verify(VerifyArgs),
    /// Compare both compilation methods across a graph family; emit CSV.
    Benchmark(BenchmarkArgs),
}

/// Parameters of the walk operator and of the accuracy target.
#[derive(Args, Clone, Copy)]
struct WalkParams {
    /// Coupling strength multiplying the adjacency matrix.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,
    /// Evolution time.
    #[arg(long = "time", default_value_t = 1.0, allow_negative_numbers = true)]
    time: f64,
    /// Target spectral-norm accuracy, in (0, 1].
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    /// Product-formula order parameter k (the schedule has order 2k).
    #[arg(long = "order-k", default_value_t = 1)]
    order_k: usize,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Graph file: `N M` header, then M lines `u v`.
    graph: PathBuf,
    /// Write the star dump here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthesizeArgs {
    /// Graph file: `N M` header, then M lines `u v`.
    graph: PathBuf,
    #[command(flatten)]
    walk: WalkParams,
    /// How the segment count is chosen.
    #[arg(long, value_enum, default_value_t = ModeArg::Adaptive)]
    mode: ModeArg,
    /// Which term decomposition to compile.
    #[arg(long, value_enum, default_value_t = MethodArg::Star)]
    method: MethodArg,
    /// Write the circuit text here.
    #[arg(long)]
    out: PathBuf,
    /// Refuse to materialize circuits with more gates than this.
    #[arg(long = "max-gates", default_value_t = 10_000_000)]
    max_gates: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph file: `N M` header, then M lines `u v`.
    graph: PathBuf,
    /// Circuit file in the text format produced by `synthesize`.
    circuit: PathBuf,
    /// Coupling strength multiplying the adjacency matrix.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,
    /// Evolution time.
    #[arg(long = "time", default_value_t = 1.0, allow_negative_numbers = true)]
    time: f64,
    /// Accept the circuit if the measured distance is at most this.
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Graph family to sweep.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Vertex counts, comma separated (e.g. 8,16,32).
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Degree for the random-regular family.
    #[arg(long, default_value_t = 2)]
    degree: usize,
    #[command(flatten)]
    walk: WalkParams,
    /// Seed for the random-regular family.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Bound,
    Adaptive,
}

impl ModeArg {
    fn to_mode(self) -> SegmentMode {
        match self {
            ModeArg::Bound => SegmentMode::Bound,
            ModeArg::Adaptive => SegmentMode::Adaptive,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ModeArg::Bound => "bound",
            ModeArg::Adaptive => "adaptive",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Star,
    Pauli,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Star => "star",
            MethodArg::Pauli => "pauli",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Cycle,
    RandomRegular,
    Path,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_help =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if is_help { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };

    let result = match cli.command {
        Command::Decompose(args) => commands::cmd_decompose(&args),
        Command::Synthesize(args) => commands::cmd_synthesize(&args),
        Command::Verify(args) => commands::cmd_verify(&args),
        Command::Benchmark(args) => commands::cmd_benchmark(&args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
