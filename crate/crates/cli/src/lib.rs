//! Command-line front end: argument types, graph inputs, reports, and the
//! command runner behind the `rho` binary.

pub mod args;
pub mod input;
pub mod report;
pub mod run;

use thiserror::Error;

use rho_core::arrow::ArrowError;
use rho_core::bounds::BoundsError;
use rho_core::cache::CacheError;
use rho_core::constructions::ConstructionError;
use rho_core::graph::GraphError;
use rho_core::search::SearchError;

pub use args::{Cli, Command};
pub use report::Report;
pub use run::{execute, Outcome};

/// Process exit status for each kind of result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    /// A definitive negative answer, such as a graph that does not arrow.
    Negative = 1,
    Usage = 2,
    BudgetExhausted = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{token}: {source}")]
    Graph { token: String, source: GraphError },
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid option: {0}")]
    Option(String),
    #[error(transparent)]
    Arrow(#[from] ArrowError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("JSON encoding: {0}")]
    Json(#[from] serde_json::Error),
}
