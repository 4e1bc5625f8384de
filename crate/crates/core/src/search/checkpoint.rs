//! On-disk search state, written atomically between batches.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{OrderSummary, SearchError, SearchMode};

pub const CHECKPOINT_VERSION: u32 = 1;

/// Position within the candidate list of the current order. `last` names the
/// candidate at `index - 1` so a resumed search can detect a shifted list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointCursor {
    pub index: usize,
    pub last: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchCheckpoint {
    pub format_version: u32,
    pub mode: SearchMode,
    /// Canonical graph6 of the target.
    pub target: String,
    /// graph6 of the target as given; size vectors refer to this labeling.
    pub labeled_target: String,
    pub current_order: usize,
    pub cursor: CheckpointCursor,
    pub orders_exhausted: Vec<usize>,
    pub candidates_tested: u64,
    pub nodes_used: u64,
    pub cache_hits: u64,
    pub per_order: Vec<OrderSummary>,
    pub elapsed_ms: f64,
}

pub fn save_checkpoint(path: &Path, cp: &SearchCheckpoint) -> Result<(), SearchError> {
    let io = |source| SearchError::Io { path: path.to_path_buf(), source };
    let text = serde_json::to_string_pretty(cp)?;
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

pub fn load_checkpoint(path: &Path) -> Result<SearchCheckpoint, SearchError> {
    let text = fs::read_to_string(path).map_err(|source| SearchError::Io { path: path.to_path_buf(), source })?;
    Ok(serde_json::from_str(&text)?)
}
