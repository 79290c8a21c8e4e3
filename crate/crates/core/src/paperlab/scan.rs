//! Exhaustive and random searches for functions with a large parity
//! decision tree depth relative to their spectrum.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::solvers::{pc_min, pdt_depth, Budget, Measured};
use crate::spectral::{Dyadic, FourierSpectrum};

pub const MAX_EXHAUSTIVE_ARITY: usize = 4;
pub const MAX_RANDOM_ARITY: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive,
    Random { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub function: String,
    pub arity: usize,
    pub pdt: Measured,
    pub pc_min: Measured,
    pub sparsity: usize,
    pub log2_sparsity: f64,
    pub l1: Dyadic,
    pub log2_l1: f64,
    /// `ln(pdt) / ln(log₂ sparsity)`, absent when either side is not
    /// exact or the denominator vanishes.
    pub ratio: Option<f64>,
    /// `ln(pc_min) / ln(log₂ ‖f̂‖₁)`, same conventions.
    pub pc_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub timestamp: u64,
}

impl ScanRecord {
    pub fn function(&self) -> Result<BooleanFunction> {
        self.function.parse()
    }

    /// Whether `self` is at least as good as `other` on both ratios and
    /// better on one.
    fn dominates(&self, other: &ScanRecord) -> bool {
        let key = |v: Option<f64>| v.unwrap_or(f64::NEG_INFINITY);
        let (a, b) = (key(self.ratio), key(self.pc_ratio));
        let (c, d) = (key(other.ratio), key(other.pc_ratio));
        a >= c && b >= d && (a > c || b > d)
    }

    fn same_ratios(&self, other: &ScanRecord) -> bool {
        self.ratio == other.ratio && self.pc_ratio == other.pc_ratio
    }
}

fn log_ratio(num: &Measured, log_den: f64) -> Option<f64> {
    let v = num.exact()? as f64;
    (log_den > 1.0 && v > 0.0).then(|| v.ln() / log_den.ln())
}

fn record(f: &BooleanFunction, budget: &Budget, seed: Option<u64>, timestamp: u64) -> Result<ScanRecord> {
    let spectrum = FourierSpectrum::of(f);
    let sparsity = spectrum.sparsity();
    let l1 = spectrum.spectral_l1();
    let pdt = pdt_depth(f, budget)?.measured;
    let pc = pc_min(f, budget)?.measured;
    let log2_sparsity = (sparsity as f64).log2();
    let log2_l1 = l1.to_f64().log2();
    Ok(ScanRecord {
        function: f.to_string(),
        arity: f.arity(),
        ratio: log_ratio(&pdt, log2_sparsity),
        pc_ratio: log_ratio(&pc, log2_l1),
        pdt,
        pc_min: pc,
        sparsity,
        log2_sparsity,
        l1,
        log2_l1,
        seed,
        timestamp,
    })
}

/// Scans non-parity functions of the given arity. The output order depends
/// only on `mode`.
pub fn scan(arity: usize, mode: ScanMode, budget: &Budget, timestamp: u64) -> Result<Vec<ScanRecord>> {
    if arity == 0 {
        return Err(Error::InvalidParam("scan arity must be positive".into()));
    }
    let size = 1usize << arity;
    let mask = |w: u64| if size >= 64 { w } else { w & ((1u64 << size) - 1) };
    let (tables, seed): (Vec<BooleanFunction>, Option<u64>) = match mode {
        ScanMode::Exhaustive => {
            if arity > MAX_EXHAUSTIVE_ARITY {
                return Err(Error::ArityTooLarge { arity, max: MAX_EXHAUSTIVE_ARITY });
            }
            let t = (0..1u64 << size)
                .map(|t| BooleanFunction::from_words(arity, vec![t]))
                .collect::<Result<_>>()?;
            (t, None)
        }
        ScanMode::Random { count, seed } => {
            if arity > MAX_RANDOM_ARITY {
                return Err(Error::ArityTooLarge { arity, max: MAX_RANDOM_ARITY });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let words = size.div_ceil(64);
            let t = (0..count)
                .map(|_| {
                    let w = (0..words).map(|_| mask(rng.gen())).collect();
                    BooleanFunction::from_words(arity, w)
                })
                .collect::<Result<_>>()?;
            (t, Some(seed))
        }
    };
    tables
        .into_par_iter()
        .filter(|f| !f.is_parity())
        .map(|f| record(&f, budget, seed, timestamp))
        .collect()
}

/// Pareto-maximal records per arity, one `arity-<n>.jsonl` file each.
pub struct RecordStore {
    dir: PathBuf,
}

impl RecordStore {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(RecordStore {
            dir: dir.as_ref().to_path_buf(),
        })
    }

    fn path(&self, arity: usize) -> PathBuf {
        self.dir.join(format!("arity-{arity}.jsonl"))
    }

    pub fn load(&self, arity: usize) -> Result<Vec<ScanRecord>> {
        let path = self.path(arity);
        if !path.exists() {
            return Ok(Vec::new());
        }
        fs::read_to_string(&path)?
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| Error::Parse {
                    line: i + 1,
                    column: e.column(),
                    message: e.to_string(),
                })
            })
            .collect()
    }

    /// Merges `records` into the stored front and returns how many of them
    /// remain on it.
    pub fn offer(&self, arity: usize, records: &[ScanRecord]) -> Result<usize> {
        let mut front: Vec<(ScanRecord, bool)> = self.load(arity)?.into_iter().map(|r| (r, false)).collect();
        let mut changed = false;
        for r in records.iter().filter(|r| r.arity == arity) {
            if front.iter().any(|(s, _)| s.dominates(r) || s.same_ratios(r)) {
                continue;
            }
            front.retain(|(s, _)| !r.dominates(s));
            front.push((r.clone(), true));
            changed = true;
        }
        let kept = front.iter().filter(|f| f.1).count();
        if changed {
            let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
            for (r, _) in &front {
                let line = serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?;
                writeln!(tmp, "{line}")?;
            }
            tmp.persist(self.path(arity)).map_err(|e| Error::Io(e.to_string()))?;
        }
        Ok(kept)
    }
}
