//! Command-line driver: enumerate, simulate, corrupt, mine, relevance,
//! baseline and dot.

pub mod commands;
pub mod formats;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EMPTY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hasse_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    /// Mining finished but selected no set; the report is still printed.
    #[error("no cluster meets the threshold")]
    Empty(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(_) => EXIT_USAGE,
            CliError::Io { .. } => 1,
            CliError::Empty(_) => EXIT_EMPTY,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hasse", version, about = "Extract before-and-after concepts from event sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate all Hasse diagrams on m labels.
    Enumerate(EnumerateArgs),
    /// Generate game episodes as a JSONL sequence file.
    Simulate(SimulateArgs),
    /// Mutate a fraction of the sequences in a file.
    Corrupt(CorruptArgs),
    /// Hasse clustering.
    Mine(MineArgs),
    /// Relevance scores of "always before" pairs between won and lost episodes.
    Relevance(RelevanceArgs),
    /// DBSCAN or average-linkage clustering of sequence matrices.
    Baseline(BaselineArgs),
    /// Render a matrix CSV as a DOT graph of its Hasse diagram.
    Dot(DotArgs),
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
    pub m: u8,
    /// Write one DOT file per graph into this directory.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Write one CSV row per graph (index, arrows, path matrix).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub version: u8,
    #[arg(long, default_value_t = 100)]
    pub episodes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// random, scripted-mixed, scripted:ROUTE (door-1..3, coin, coin-key-1..3)
    #[arg(long, default_value = "scripted-mixed")]
    pub policy: String,
    /// Also append this many random-policy episodes.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    /// Step cap of random-policy episodes.
    #[arg(long)]
    pub step_cap: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorruptArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "swap,delete,insert")]
    pub ops: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Minimal,
    Literal,
}

#[derive(Debug, Args)]
pub struct MineArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Comma-separated label order; fixes matrix rows and columns.
    #[arg(long, value_delimiter = ',', required = true)]
    pub labels: Vec<String>,
    /// Coverage threshold in percent.
    #[arg(long, default_value = "100")]
    pub t: String,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, value_enum, default_value_t = Mode::Minimal)]
    pub mode: Mode,
    /// Keep only records with this class label.
    #[arg(long)]
    pub only_label: Option<u8>,
    /// Drop sequences whose matrix over the labels is all zero.
    #[arg(long)]
    pub drop_empty: bool,
    /// Write the Hasse diagram of every selected graph into this directory.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RelevanceArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Dbscan,
    Hier,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub labels: Vec<String>,
    /// DBSCAN radius (L1, inclusive).
    #[arg(long)]
    pub eps: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub min_samples: usize,
    /// Dendrogram cut height, decimal or `a/b`.
    #[arg(long)]
    pub threshold: Option<String>,
    #[arg(long)]
    pub only_label: Option<u8>,
    #[arg(long)]
    pub drop_empty: bool,
    /// Directory for `clusters.csv` and one `common_<k>.csv` per cluster.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Write the merge list here (hier only).
    #[arg(long)]
    pub dendrogram: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DotArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "G")]
    pub name: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs a parsed command and returns what goes to stdout.
pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Enumerate(a) => commands::enumerate(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Corrupt(a) => commands::corrupt(&a),
        Command::Mine(a) => commands::mine(&a),
        Command::Relevance(a) => commands::relevance(&a),
        Command::Baseline(a) => commands::baseline(&a),
        Command::Dot(a) => commands::dot(&a),
    }
}
