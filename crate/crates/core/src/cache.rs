//! Persistent JSON-lines store of arrow verdicts.
//!
//! Each line is one [`CacheRecord`]. Unreadable lines are skipped with a
//! warning. Appends rewrite the file through a temporary sibling and a
//! rename, so readers never see a half-written line.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrow::Verdict;

/// Bumped whenever a change could alter verdicts or bad colorings.
pub const ENGINE_VERSION: &str = "rho-engine-1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cache record encoding: {0}")]
    Encode(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CacheMode {
    #[serde(rename = "r")]
    Induced,
    #[serde(rename = "R")]
    Transversal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub g_canonical: String,
    pub h_canonical: String,
    pub mode: CacheMode,
    pub verdict: Verdict,
    pub engine_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bad_coloring: Option<Vec<usize>>,
}

type Key = (String, String, CacheMode);

#[derive(Debug)]
pub struct ResultCache {
    path: PathBuf,
    engine_version: String,
    records: Mutex<HashMap<Key, CacheRecord>>,
}

impl ResultCache {
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, CacheError> {
        Self::open_with_version(path, ENGINE_VERSION)
    }

    /// Opens the cache, treating records from other engine versions as absent.
    pub fn open_with_version(path: impl Into<PathBuf>, engine_version: &str) -> Result<Self, CacheError> {
        let path = path.into();
        let mut records = HashMap::new();
        for (i, line) in read_lines(&path)?.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(line) {
                Ok(r) if r.engine_version == engine_version => {
                    records.insert((r.g_canonical.clone(), r.h_canonical.clone(), r.mode), r);
                }
                Ok(_) => {}
                Err(e) => log::warn!("{}: skipping corrupt cache line {}: {e}", path.display(), i + 1),
            }
        }
        Ok(Self { path, engine_version: engine_version.to_string(), records: Mutex::new(records) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn engine_version(&self) -> &str {
        &self.engine_version
    }

    pub fn len(&self) -> usize {
        self.records.lock().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lookup(&self, g_canonical: &str, h_canonical: &str, mode: CacheMode) -> Option<CacheRecord> {
        let key = (g_canonical.to_string(), h_canonical.to_string(), mode);
        self.records.lock().expect("cache lock poisoned").get(&key).cloned()
    }

    /// Builds a record stamped with this cache's engine version.
    pub fn record(
        &self,
        g_canonical: &str,
        h_canonical: &str,
        mode: CacheMode,
        verdict: Verdict,
        bad_coloring: Option<Vec<usize>>,
    ) -> CacheRecord {
        CacheRecord {
            g_canonical: g_canonical.to_string(),
            h_canonical: h_canonical.to_string(),
            mode,
            verdict,
            engine_version: self.engine_version.clone(),
            bad_coloring,
        }
    }

    pub fn append(&self, record: CacheRecord) -> Result<(), CacheError> {
        self.append_all(vec![record])
    }

    /// Appends records in one atomic file replacement.
    pub fn append_all(&self, new: Vec<CacheRecord>) -> Result<(), CacheError> {
        if new.is_empty() {
            return Ok(());
        }
        let mut records = self.records.lock().expect("cache lock poisoned");
        let io = |source| CacheError::Io { path: self.path.clone(), source };
        let mut text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(io(e)),
        };
        if !text.is_empty() && !text.ends_with('\n') {
            text.push('\n');
        }
        for r in &new {
            text.push_str(&serde_json::to_string(r)?);
            text.push('\n');
        }
        let tmp = self.path.with_extension(format!("tmp{}", std::process::id()));
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(io)?;
        }
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(text.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        fs::rename(&tmp, &self.path).map_err(io)?;
        for r in new {
            records.insert((r.g_canonical.clone(), r.h_canonical.clone(), r.mode), r);
        }
        Ok(())
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>, CacheError> {
    match fs::read_to_string(path) {
        Ok(t) => Ok(t.lines().map(str::to_string).collect()),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
        Err(source) => Err(CacheError::Io { path: path.to_path_buf(), source }),
    }
}
