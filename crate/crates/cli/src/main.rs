//! `sbc`: compress, analyse and simulate streaming BWT-style compressors.

mod bench;
mod commands;
mod error;
mod io;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::builder::BoolishValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sbc_core::pipelines::PipelineId;
use sbc_core::ModelKind;

#[derive(Debug, Parser)]
#[command(
    name = "sbc",
    version,
    about = "Streaming BWT compressors on simulated tape machines"
)]
pub struct Cli {
    /// Print a single-line JSON report on stderr.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print per-pass machine traces (and per-round tapes for `simulate`).
    #[arg(long, global = true, env = "SBC_TRACE", value_parser = BoolishValueParser::new())]
    pub trace: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compress bytes into an SBC1 container.
    Compress(CompressArgs),
    /// Restore the bytes of a container.
    Decompress(IoArgs),
    /// Empirical entropies H_0..H_max-k, one JSON object per input.
    Entropy(EntropyArgs),
    /// Apply one transform to raw bytes (sentinel written as 0xFF).
    Transform(TransformArgs),
    /// Run a Read-Write model algorithm or a sorting reduction.
    Simulate(SimulateArgs),
    /// Generate De Bruijn powers or run the separation experiment.
    Adversary(AdversaryArgs),
    /// Compress every file of a corpus under a configuration matrix, CSV out.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// Input file [default: stdin].
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    /// Output file [default: stdout].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// A context order or `auto`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KChoice {
    Auto,
    Fixed(usize),
}

impl FromStr for KChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(KChoice::Auto);
        }
        s.parse()
            .map(KChoice::Fixed)
            .map_err(|_| format!("expected a non-negative integer or `auto`, got `{s}`"))
    }
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// bwt-mtf-rle-ac, bwt-dc-ac, st-dc-ac (encode only), block-kth or kth-order.
    #[arg(long, default_value = "bwt-dc-ac")]
    pub pipeline: PipelineId,
    /// Context order, or `auto` to try every admissible k (st-dc-ac only)
    /// [default: auto for st-dc-ac, 2 for kth-order].
    #[arg(long)]
    pub k: Option<KChoice>,
    /// Block memory exponent (block-kth).
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    /// Block slack, with 1 - epsilon > c > epsilon > 0 (block-kth).
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    /// Memory budget of the simulated machine [default: unbounded].
    #[arg(long)]
    pub memory_budget_bits: Option<u64>,
    /// standard, multipass, wstreams, streamsort or readwrite
    /// [default: streamsort for st-dc-ac, standard otherwise].
    #[arg(long)]
    pub model: Option<ModelKind>,
    /// Use the alphabet 0..sigma instead of the bytes present in the input.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=256))]
    pub sigma: Option<u32>,
    /// Size blocks from a doubling estimate of n (block-kth).
    #[arg(long)]
    pub unknown_n: bool,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Files to analyse [default: stdin].
    pub files: Vec<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub max_k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformOp {
    Bwt,
    Unbwt,
    St,
    Mtf,
    Dc,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, value_enum)]
    pub op: TransformOp,
    /// Context order for `st`.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    RwBwt,
    RwUnbwt,
    RwSa,
    SortChars,
    SortNumbers,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// rw-unbwt reads `#` as the sentinel; sort-numbers reads
    /// whitespace-separated integers.
    #[arg(long, value_enum)]
    pub algo: Algo,
    /// Memory budget of the Read-Write machine [default: unbounded].
    #[arg(long)]
    pub memory_budget_bits: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AdversaryArgs {
    /// Run the separation experiment instead of emitting a string.
    #[arg(long, conflicts_with_all = ["sigma", "k", "power"], requires = "n")]
    pub experiment: bool,
    #[arg(long, required_unless_present = "experiment")]
    pub sigma: Option<u32>,
    #[arg(long, required_unless_present = "experiment")]
    pub k: Option<u32>,
    /// Number of copies of the De Bruijn prefix.
    #[arg(long, default_value_t = 1)]
    pub power: usize,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    /// Output file [default: stdout].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Pipelines to run [default: all].
    #[arg(long, value_delimiter = ',')]
    pub pipeline: Vec<PipelineId>,
    /// Context orders [default: the pipeline default].
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<KChoice>,
    /// Block memory exponents (block-kth).
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub c: Vec<f64>,
    /// Block slacks (block-kth).
    #[arg(long, value_delimiter = ',', default_value = "0.25")]
    pub epsilon: Vec<f64>,
    /// Models [default: the pipeline default]. Incompatible cells are skipped.
    #[arg(long, value_delimiter = ',')]
    pub model: Vec<ModelKind>,
    #[arg(long)]
    pub memory_budget_bits: Option<u64>,
    /// Output file [default: stdout].
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sbc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
