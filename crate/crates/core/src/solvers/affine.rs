//! Parity certificates by ascending-codimension enumeration of canonical
//! affine systems.
//!
//! Levels are searched in order; within a level the canonical stream is cut
//! into contiguous chunks that workers scan independently, and the first hit
//! in stream order wins. Each linear part is checked on all of its cosets by
//! walking the coset in Gray-code order from a base point, stopping at the
//! first disagreement.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Budget, Limit, Measured};
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::f2linalg::{
    count_linear_parts, count_systems, parity, pivot_sets, AffineSystem, F2Vector, LinearParts,
};

/// Chunks smaller than this are not split further.
const CHUNK: u128 = 1 << 12;
/// Levels with fewer systems than this run on the calling thread.
const PARALLEL_THRESHOLD: u128 = 1 << 14;

/// An affine subspace on which `f` is constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCertificate {
    pub system: AffineSystem,
    pub value: bool,
    /// The point being certified, for anchored searches.
    pub anchor: Option<F2Vector>,
}

impl ParityCertificate {
    pub fn codim(&self) -> usize {
        self.system.codim()
    }

    /// Whether `f` is constantly `value` on the system (and the anchor lies
    /// in it).
    pub fn verify(&self, f: &BooleanFunction) -> bool {
        let anchored = self
            .anchor
            .as_ref()
            .is_none_or(|x| self.system.contains(x).unwrap_or(false));
        anchored
            && f.restrict(&self.system)
                .map(|r| r.quotient().constant_value() == Some(self.value))
                .unwrap_or(false)
    }
}

/// Outcome of a certificate search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParitySearch {
    pub measured: Measured,
    pub witness: Option<ParityCertificate>,
    /// Systems (or linear parts) in the levels that were searched. A bound
    /// on the work, independent of scheduling.
    pub systems_budgeted: u128,
}

#[derive(Clone, Copy)]
enum Target {
    Any,
    Value(bool),
}

impl Target {
    fn accepts(self, v: bool) -> bool {
        match self {
            Target::Any => true,
            Target::Value(b) => b == v,
        }
    }
}

/// Work units for one level: (pivot set index, start, end) in stream order.
fn chunks(n: usize, sets: &[Vec<usize>]) -> Vec<(usize, u128, u128)> {
    let mut out = Vec::new();
    for (i, p) in sets.iter().enumerate() {
        let total = 1u128 << LinearParts::new(n, p).free_entries();
        let mut start = 0;
        while start < total {
            let end = (start + CHUNK).min(total);
            out.push((i, start, end));
            start = end;
        }
    }
    out
}

/// Direction vectors of the linear subspace `{x : rows·x = 0}`, one per
/// free column.
fn directions(n: usize, rows: &[u64], pivots: &[usize]) -> Vec<u64> {
    let pivot_mask: u64 = pivots.iter().fold(0, |m, &p| m | (1 << p));
    (0..n)
        .filter(|c| (pivot_mask >> c) & 1 == 0)
        .map(|c| {
            rows.iter()
                .zip(pivots)
                .filter(|(r, _)| (*r >> c) & 1 == 1)
                .fold(1u64 << c, |v, (_, &p)| v | (1 << p))
        })
        .collect()
}

/// Whether `f` is constant on `base + span(dirs)`; returns the value.
#[inline]
fn coset_constant(f: &BooleanFunction, base: u64, dirs: &[u64]) -> Option<bool> {
    let v = f.get(base);
    let mut x = base;
    for k in 1u64..1 << dirs.len() {
        x ^= dirs[k.trailing_zeros() as usize];
        if f.get(x) != v {
            return None;
        }
    }
    Some(v)
}

/// Base point of the coset with right-hand side number `r` (σ₁ most
/// significant): free coordinates zero, pivots equal to σ.
#[inline]
fn coset_base(pivots: &[usize], r: u64) -> u64 {
    let d = pivots.len();
    pivots
        .iter()
        .enumerate()
        .fold(0, |x, (i, &p)| x | (((r >> (d - 1 - i)) & 1) << p))
}

fn rhs_of(rows: &[u64], x: u64) -> Vec<bool> {
    rows.iter().map(|&r| parity(r & x)).collect()
}

type Hit = (Vec<u64>, Vec<bool>, bool);

fn scan_chunk(
    f: &BooleanFunction,
    n: usize,
    pivots: &[usize],
    range: (u128, u128),
    target: Target,
    anchor: Option<u64>,
) -> Option<Hit> {
    let d = pivots.len();
    for rows in LinearParts::new(n, pivots).range(range.0, range.1) {
        let dirs = directions(n, &rows, pivots);
        match anchor {
            Some(x) => {
                if let Some(v) = coset_constant(f, x, &dirs) {
                    if target.accepts(v) {
                        let rhs = rhs_of(&rows, x);
                        return Some((rows, rhs, v));
                    }
                }
            }
            None => {
                for r in 0..1u64 << d {
                    let base = coset_base(pivots, r);
                    if !target.accepts(f.get(base)) {
                        continue;
                    }
                    if let Some(v) = coset_constant(f, base, &dirs) {
                        let rhs = (0..d).map(|i| (r >> (d - 1 - i)) & 1 == 1).collect();
                        return Some((rows, rhs, v));
                    }
                }
            }
        }
    }
    None
}

fn search_level(
    f: &BooleanFunction,
    d: usize,
    target: Target,
    anchor: Option<u64>,
    parallel: bool,
) -> Option<Hit> {
    let n = f.arity();
    let sets = pivot_sets(n, d);
    let units = chunks(n, &sets);
    let work = |&(i, s, e): &(usize, u128, u128)| scan_chunk(f, n, &sets[i], (s, e), target, anchor);
    if parallel {
        units.par_iter().find_map_first(work)
    } else {
        units.iter().find_map(work)
    }
}

fn search(
    f: &BooleanFunction,
    budget: &Budget,
    target: Target,
    anchor: Option<&F2Vector>,
) -> Result<ParitySearch> {
    let n = f.arity();
    if n == 0 {
        return Err(Error::InvalidParam("certificate search needs arity ≥ 1".into()));
    }
    if let Some(x) = anchor {
        x.check_width(n)?;
    }
    if let Target::Value(b) = target {
        let ones = f.count_ones();
        if (b && ones == 0) || (!b && ones == f.table_len()) {
            return Err(Error::Degenerate(format!("function never takes the value {}", b as u8)));
        }
    }
    let anchor_bits = anchor.map(|x| x.bits());
    let mut spent: u128 = 0;
    for d in 0..=n {
        let need = if anchor.is_some() {
            count_linear_parts(n, d)
        } else {
            count_systems(n, d)
        };
        let limit = if d > budget.max_codim {
            Some(Limit::MaxCodim)
        } else if spent.saturating_add(need) > budget.max_systems as u128 {
            Some(Limit::MaxSystems)
        } else {
            None
        };
        if let Some(limit) = limit {
            return Ok(ParitySearch {
                measured: Measured::Partial {
                    lower: d,
                    upper: Some(n),
                    limit,
                },
                witness: None,
                systems_budgeted: spent,
            });
        }
        spent += need;
        let parallel = need >= PARALLEL_THRESHOLD;
        if let Some((rows, rhs, value)) = search_level(f, d, target, anchor_bits, parallel) {
            let system = AffineSystem::canonical_unchecked(n, rows, rhs);
            return Ok(ParitySearch {
                measured: Measured::Exact { value: d },
                witness: Some(ParityCertificate {
                    system,
                    value,
                    anchor: anchor.copied(),
                }),
                systems_budgeted: spent,
            });
        }
    }
    unreachable!("a single point is a constant subspace")
}

/// `C⊕_min[f]`, with the first minimum certificate in enumeration order.
pub fn pc_min(f: &BooleanFunction, budget: &Budget) -> Result<ParitySearch> {
    search(f, budget, Target::Any, None)
}

/// Smallest codimension of a subspace on which `f` is constantly `value`.
pub fn pc_min_value(f: &BooleanFunction, value: bool, budget: &Budget) -> Result<ParitySearch> {
    search(f, budget, Target::Value(value), None)
}

/// `pCert[f, x]`, searching only subspaces through `x`.
pub fn pcert_at(f: &BooleanFunction, x: &F2Vector, budget: &Budget) -> Result<ParitySearch> {
    search(f, budget, Target::Any, Some(x))
}

/// `C⊕[f] = max_x pCert[f, x]`. Points are marked as covered level by
/// level; the answer is the first level after which every point is covered.
pub fn pc_max(f: &BooleanFunction, budget: &Budget) -> Result<ParitySearch> {
    let n = f.arity();
    if n == 0 {
        return Err(Error::InvalidParam("certificate search needs arity ≥ 1".into()));
    }
    let words = (f.table_len() as usize).div_ceil(64);
    let covered: Vec<AtomicU64> = (0..words).map(|_| AtomicU64::new(0)).collect();
    let count = AtomicUsize::new(0);
    let total = f.table_len() as usize;
    let mut spent: u128 = 0;
    for d in 0..=n {
        let need = count_systems(n, d);
        let limit = if d > budget.max_codim {
            Some(Limit::MaxCodim)
        } else if spent.saturating_add(need) > budget.max_systems as u128 {
            Some(Limit::MaxSystems)
        } else {
            None
        };
        if let Some(limit) = limit {
            return Ok(ParitySearch {
                measured: Measured::Partial {
                    lower: d,
                    upper: Some(n),
                    limit,
                },
                witness: None,
                systems_budgeted: spent,
            });
        }
        spent += need;
        let sets = pivot_sets(n, d);
        let units = chunks(n, &sets);
        let mark = |x: u64| {
            let bit = 1u64 << (x & 63);
            let prev = covered[(x >> 6) as usize].fetch_or(bit, Ordering::Relaxed);
            if prev & bit == 0 {
                count.fetch_add(1, Ordering::Relaxed);
            }
        };
        let work = |&(i, s, e): &(usize, u128, u128)| {
            let pivots = &sets[i];
            for rows in LinearParts::new(n, pivots).range(s, e) {
                let dirs = directions(n, &rows, pivots);
                for r in 0..1u64 << d {
                    let base = coset_base(pivots, r);
                    if coset_constant(f, base, &dirs).is_some() {
                        let mut x = base;
                        mark(x);
                        for k in 1u64..1 << dirs.len() {
                            x ^= dirs[k.trailing_zeros() as usize];
                            mark(x);
                        }
                    }
                }
            }
        };
        if need >= PARALLEL_THRESHOLD {
            units.par_iter().for_each(work);
        } else {
            units.iter().for_each(work);
        }
        if count.load(Ordering::Relaxed) == total {
            return Ok(ParitySearch {
                measured: Measured::Exact { value: d },
                witness: None,
                systems_budgeted: spent,
            });
        }
    }
    unreachable!("every point is covered at full codimension")
}
