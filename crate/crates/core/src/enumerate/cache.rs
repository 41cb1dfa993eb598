//! On-disk cache of enumeration results: one JSON-lines file per query, each
//! line the canonical hex of one graph.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::canon::CanonicalGraph;
use crate::error::Result;

use super::{enumerate_graphs, EnumerationQuery};

pub const CACHE_ENV: &str = "SPINELAB_CACHE";

/// Bumped whenever the canonical byte layout or the generator changes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct EnumerationCache {
    dir: PathBuf,
}

impl EnumerationCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        EnumerationCache { dir: dir.into() }
    }

    /// `$SPINELAB_CACHE` if set, otherwise `.spinelab-cache` in the working
    /// directory.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) => Self::new(dir),
            None => Self::new(".spinelab-cache"),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, q: &EnumerationQuery) -> PathBuf {
        let degree = q.degree_max.map_or("any".to_string(), |k| k.to_string());
        let loops = match (q.require_basepoint_loop, q.forbid_basepoint_loop) {
            (true, _) => "req",
            (_, true) => "forbid",
            _ => "any",
        };
        self.dir.join(format!(
            "graphs-v{}-{}-n{}-s{}-{}-deg{}-loop{}.jsonl",
            FORMAT_VERSION,
            env!("CARGO_PKG_VERSION"),
            q.n,
            q.s,
            if q.reduced { "reduced" } else { "bridged" },
            degree,
            loops
        ))
    }

    pub fn load(&self, q: &EnumerationQuery) -> Result<Option<Vec<CanonicalGraph>>> {
        let path = self.path_for(q);
        if !path.exists() {
            return Ok(None);
        }
        let reader = BufReader::new(fs::File::open(&path)?);
        let mut out = Vec::new();
        for line in reader.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let hex: String = serde_json::from_str(&line)?;
            match CanonicalGraph::from_hex(&hex) {
                Ok(c) => out.push(c),
                // stale or corrupt entry: treat the file as a miss
                Err(_) => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    pub fn store(&self, q: &EnumerationQuery, graphs: &[CanonicalGraph]) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(q);
        let tmp = path.with_extension("jsonl.tmp");
        {
            let mut w = BufWriter::new(fs::File::create(&tmp)?);
            for g in graphs {
                writeln!(w, "{}", serde_json::to_string(&g.hex())?)?;
            }
            w.flush()?;
        }
        fs::rename(tmp, path)?;
        Ok(())
    }

    /// Loads from the cache or enumerates and stores. The flag reports a hit.
    pub fn get_or_enumerate(&self, q: &EnumerationQuery) -> Result<(Vec<CanonicalGraph>, bool)> {
        if let Some(graphs) = self.load(q)? {
            return Ok((graphs, true));
        }
        let graphs = enumerate_graphs(q)?;
        self.store(q, &graphs)?;
        Ok((graphs, false))
    }
}
