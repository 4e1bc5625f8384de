//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "rho", version, about = "Rainbow induced subgraph numbers: bounds, arrow checks, exact search")]
pub struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (overrides RHO_THREADS; default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArrowMode {
    /// Rainbow induced copy anywhere in the host.
    #[value(name = "r")]
    Induced,
    /// Rainbow transversal of a replication graph.
    #[value(name = "R")]
    Transversal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionKind {
    /// Cliques sized by non-degrees; arrows in both senses.
    Nonedge,
    /// Replication over closed-neighborhood classes with extra clique vertices.
    ReplicationCliques,
    /// Plain replication graph of `--h` with `--sizes`.
    Replication,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BlockOrder {
    Increasing,
    Exhaustive,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Target graph.
    #[arg(long)]
    pub h: String,
    /// Largest order (or total) to examine.
    #[arg(long, default_value_t = rho_core::search::ENUMERATION_GUARD)]
    pub max_order: usize,
    /// Arrow-engine node budget for the whole search.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Checkpoint file; resumed from when it exists.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Verdict cache (JSON lines).
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Permit graph enumeration above the default order guard.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower and upper bounds for a target graph.
    Bounds {
        /// Target graph.
        h: String,
    },
    /// Decide whether a host graph arrows a target.
    Verify {
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        h: String,
        #[arg(long, value_enum, default_value = "r")]
        mode: ArrowMode,
        /// Clique sizes of the replication graph of `--h` (mode R, or to build `--g`).
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Use the brute-force checker (small hosts only).
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Exact rainbow number by exhaustive search over host graphs.
    Rho(SearchArgs),
    /// Exact replication rainbow number by search over size vectors.
    RhoR(SearchArgs),
    /// Build a host graph that arrows the target.
    Construct {
        #[arg(value_enum)]
        kind: ConstructionKind,
        #[arg(long)]
        h: String,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value = "exhaustive")]
        block_order: BlockOrder,
    },
    /// Inspect a verdict cache.
    Cache {
        path: PathBuf,
        #[arg(long, requires = "h")]
        g: Option<String>,
        #[arg(long, requires = "g")]
        h: Option<String>,
        #[arg(long, value_enum, default_value = "r")]
        mode: ArrowMode,
    },
}
