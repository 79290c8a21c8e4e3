//! Content-addressed store of measure reports.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use parikill_core::solvers::{Budget, Measure, MeasureReport, SOLVER_VERSION};
use parikill_core::BooleanFunction;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub solver_version: String,
    pub budget: Budget,
    pub created_at: u64,
    pub report: MeasureReport,
}

pub struct Cache {
    dir: PathBuf,
}

/// What a cached report depends on besides the function itself.
#[derive(Clone, Debug)]
pub struct Request<'a> {
    pub which: &'a [Measure],
    pub budget: Budget,
    pub witnesses: bool,
}

pub fn key(f: &BooleanFunction, req: &Request) -> String {
    let mut which = req.which.to_vec();
    which.sort();
    which.dedup();
    let names: Vec<&str> = which.iter().map(|m| m.name()).collect();
    let b = req.budget;
    let text = format!(
        "{f}\nsolver={SOLVER_VERSION}\nmax_codim={} max_systems={} max_tree_nodes={}\nwhich={}\nwitnesses={}\n",
        b.max_codim,
        b.max_systems,
        b.max_tree_nodes,
        names.join(","),
        req.witnesses
    );
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl Cache {
    /// `PARIKILL_CACHE_DIR`, else `$XDG_CACHE_HOME/parikill`, else
    /// `~/.cache/parikill`.
    pub fn default_dir() -> PathBuf {
        if let Some(d) = std::env::var_os("PARIKILL_CACHE_DIR") {
            return d.into();
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return Path::new(&d).join("parikill");
        }
        std::env::var_os("HOME")
            .map(|h| Path::new(&h).join(".cache"))
            .unwrap_or_else(std::env::temp_dir)
            .join("parikill")
    }

    pub fn open(dir: PathBuf) -> std::io::Result<Self> {
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Unreadable or mismatched entries count as misses.
    pub fn get(&self, key: &str, budget: &Budget) -> Option<CacheEntry> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.key == key && entry.solver_version == SOLVER_VERSION && entry.budget == *budget)
            .then_some(entry)
    }

    /// Writes the entry unless one already exists.
    pub fn put(&self, entry: &CacheEntry) -> std::io::Result<()> {
        let path = self.path(&entry.key);
        if path.exists() {
            return Ok(());
        }
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, entry)?;
        tmp.flush()?;
        tmp.persist_noclobber(&path).map(|_| ()).or_else(|e| {
            if path.exists() {
                Ok(())
            } else {
                Err(e.error)
            }
        })
    }

    pub fn entries(&self) -> std::io::Result<Vec<CacheEntry>> {
        let mut out = Vec::new();
        let mut paths: Vec<PathBuf> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "json"))
            .collect();
        paths.sort();
        for p in paths {
            if let Ok(entry) = fs::read_to_string(&p)
                .map_err(|e| e.to_string())
                .and_then(|t| serde_json::from_str::<CacheEntry>(&t).map_err(|e| e.to_string()))
            {
                out.push(entry);
            }
        }
        Ok(out)
    }

    /// Removes every entry and returns how many were removed.
    pub fn clear(&self) -> std::io::Result<usize> {
        let mut n = 0;
        for e in fs::read_dir(&self.dir)? {
            let p = e?.path();
            if p.extension().is_some_and(|e| e == "json") {
                fs::remove_file(p)?;
                n += 1;
            }
        }
        Ok(n)
    }
}
