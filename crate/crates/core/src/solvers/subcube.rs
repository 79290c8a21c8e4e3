//! Subcube measures: certificate complexity and ordinary decision trees.
//!
//! A subcube is indexed in base 3, digit `j` being 0, 1 (coordinate fixed)
//! or 2 (free). Freeing a digit raises the index, so a single ascending
//! sweep sees both halves of a cube before the cube itself.

use serde::{Deserialize, Serialize};

use super::tree::ParityDecisionTree;
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::f2linalg::{AffineSystem, F2Vector};

/// Largest arity handled by the subcube tables (3¹⁶ bytes each).
pub const MAX_SUBCUBE_ARITY: usize = 16;

const MIXED: u8 = 2;
const FREE: u8 = 2;

/// A subcube `{x : x_j = b_j for j ∈ coords}` on which `f` is constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeCertificate {
    /// 1-based coordinates, ascending.
    pub coords: Vec<usize>,
    pub values: Vec<bool>,
    /// The constant value of `f` on the subcube.
    pub value: bool,
}

impl CubeCertificate {
    pub fn codim(&self) -> usize {
        self.coords.len()
    }

    /// The subcube as an affine system over `arity` coordinates.
    pub fn to_system(&self, arity: usize) -> Result<AffineSystem> {
        let rows = self
            .coords
            .iter()
            .map(|&c| F2Vector::unit(arity, c))
            .collect::<Result<Vec<_>>>()?;
        AffineSystem::from_rows(arity, &rows, &self.values).map(|s| s.canonicalize())
    }
}

pub(crate) struct Subcubes {
    n: usize,
    pow3: Vec<usize>,
    status: Vec<u8>,
    depth: Vec<u8>,
}

fn check_arity(f: &BooleanFunction) -> Result<()> {
    if f.arity() > MAX_SUBCUBE_ARITY {
        return Err(Error::ArityTooLarge {
            arity: f.arity(),
            max: MAX_SUBCUBE_ARITY,
        });
    }
    Ok(())
}

impl Subcubes {
    /// Status of every subcube (0, 1 or mixed) and, if asked, the depth of
    /// an optimal decision tree on it.
    pub(crate) fn build(f: &BooleanFunction, with_depth: bool) -> Result<Self> {
        check_arity(f)?;
        let n = f.arity();
        let pow3: Vec<usize> = (0..=n).map(|i| 3usize.pow(i as u32)).collect();
        let total = pow3[n];
        let mut status = vec![0u8; total];
        let mut depth = if with_depth { vec![0u8; total] } else { Vec::new() };
        let mut digits = vec![0u8; n];
        let mut free: u32 = 0;
        let mut ones: u64 = 0;
        for c in 0..total {
            if free == 0 {
                status[c] = f.get(ones) as u8;
            } else {
                let i = free.trailing_zeros() as usize;
                let a = status[c - 2 * pow3[i]];
                let b = status[c - pow3[i]];
                status[c] = if a == b { a } else { MIXED };
                if with_depth && status[c] == MIXED {
                    let mut best = u8::MAX;
                    let mut m = free;
                    while m != 0 {
                        let j = m.trailing_zeros() as usize;
                        m &= m - 1;
                        let d = 1 + depth[c - 2 * pow3[j]].max(depth[c - pow3[j]]);
                        best = best.min(d);
                    }
                    depth[c] = best;
                }
            }
            let mut j = 0;
            while j < n && digits[j] == FREE {
                digits[j] = 0;
                free &= !(1 << j);
                j += 1;
            }
            if j < n {
                digits[j] += 1;
                if digits[j] == 1 {
                    ones |= 1 << j;
                } else {
                    ones &= !(1 << j);
                    free |= 1 << j;
                }
            }
        }
        Ok(Subcubes {
            n,
            pow3,
            status,
            depth,
        })
    }

    fn full(&self) -> usize {
        self.pow3[self.n] - 1
    }

    /// Index of the cube fixing `coords` (0-based) to `values`.
    fn index(&self, coords: &[usize], values: impl Fn(usize) -> bool) -> usize {
        let mut idx = self.full();
        for (k, &j) in coords.iter().enumerate() {
            idx -= (2 - values(k) as usize) * self.pow3[j];
        }
        idx
    }

    fn point_index(&self, x: u64) -> usize {
        (0..self.n)
            .filter(|&j| (x >> j) & 1 == 1)
            .map(|j| self.pow3[j])
            .sum()
    }

    /// For every point, the smallest codimension of a constant subcube
    /// containing it.
    fn certificate_sizes(&self) -> Vec<u8> {
        let n = self.n;
        let total = self.pow3[n];
        let mut g = vec![0u8; total];
        let mut digits = vec![FREE; n];
        let mut fixed = 0u8;
        for c in (0..total).rev() {
            let mut best = if self.status[c] != MIXED { fixed } else { u8::MAX };
            for (j, &d) in digits.iter().enumerate() {
                if d != FREE {
                    best = best.min(g[c + (2 - d as usize) * self.pow3[j]]);
                }
            }
            g[c] = best;
            let mut j = 0;
            while j < n && digits[j] == 0 {
                digits[j] = FREE;
                fixed -= 1;
                j += 1;
            }
            if j < n {
                if digits[j] == FREE {
                    fixed += 1;
                }
                digits[j] -= 1;
            }
        }
        (0..1u64 << n).map(|x| g[self.point_index(x)]).collect()
    }

    fn tree(&self, c: usize) -> ParityDecisionTree {
        let s = self.status[c];
        if s != MIXED {
            return ParityDecisionTree::Leaf(s == 1);
        }
        let target = self.depth[c];
        let j = (0..self.n)
            .find(|&j| {
                (c / self.pow3[j]) % 3 == FREE as usize
                    && 1 + self.depth[c - 2 * self.pow3[j]].max(self.depth[c - self.pow3[j]])
                        == target
            })
            .expect("a mixed cube has an optimal query");
        ParityDecisionTree::node(
            1 << j,
            self.tree(c - 2 * self.pow3[j]),
            self.tree(c - self.pow3[j]),
        )
    }

    fn constant(&self, idx: usize) -> Option<bool> {
        match self.status[idx] {
            MIXED => None,
            s => Some(s == 1),
        }
    }
}

/// Visits k-subsets of `0..n` in lexicographic order until `visit` returns
/// `Some`.
fn first_subset<T>(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> Option<T>) -> Option<T> {
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return None;
    }
    loop {
        if let Some(t) = visit(&cur) {
            return Some(t);
        }
        let i = (0..k).rev().find(|&i| cur[i] < n - k + i)?;
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// `C[f, x]` with the lexicographically first minimum subset of fixed
/// coordinates.
pub fn cert_at(f: &BooleanFunction, x: &F2Vector) -> Result<CubeCertificate> {
    if f.arity() == 0 {
        return Err(Error::InvalidParam("certificates need arity ≥ 1".into()));
    }
    x.check_width(f.arity())?;
    let t = Subcubes::build(f, false)?;
    let xb = x.bits();
    let n = f.arity();
    for k in 0..=n {
        let hit = first_subset(n, k, |coords| {
            let idx = t.index(coords, |i| (xb >> coords[i]) & 1 == 1);
            t.constant(idx).map(|value| CubeCertificate {
                coords: coords.iter().map(|c| c + 1).collect(),
                values: coords.iter().map(|&c| (xb >> c) & 1 == 1).collect(),
                value,
            })
        });
        if let Some(c) = hit {
            return Ok(c);
        }
    }
    unreachable!("a point is a constant subcube")
}

/// `C_min[f]`: the lexicographically first minimum constant subcube
/// (subsets in lexicographic order, then assignments with the first fixed
/// coordinate most significant).
pub fn c_min(f: &BooleanFunction) -> Result<CubeCertificate> {
    let t = Subcubes::build(f, false)?;
    let n = f.arity();
    for k in 0..=n {
        let hit = first_subset(n, k, |coords| {
            (0..1u64 << k).find_map(|a| {
                let bit = |i: usize| (a >> (k - 1 - i)) & 1 == 1;
                let idx = t.index(coords, bit);
                t.constant(idx).map(|value| CubeCertificate {
                    coords: coords.iter().map(|c| c + 1).collect(),
                    values: (0..k).map(bit).collect(),
                    value,
                })
            })
        });
        if let Some(c) = hit {
            return Ok(c);
        }
    }
    unreachable!("a point is a constant subcube")
}

/// `C[f, x]` for every `x`, indexed by the packed point.
pub fn pointwise_certificates(f: &BooleanFunction) -> Result<Vec<u8>> {
    Ok(Subcubes::build(f, false)?.certificate_sizes())
}

/// `C[f] = max_x C[f, x]` and the smallest maximizing point.
pub fn c_max(f: &BooleanFunction) -> Result<(usize, u64)> {
    let sizes = pointwise_certificates(f)?;
    let (x, &m) = sizes
        .iter()
        .enumerate()
        .rev()
        .max_by_key(|&(_, &s)| s)
        .expect("nonempty table");
    Ok((m as usize, x as u64))
}

/// Optimal decision tree depth (single-coordinate queries), with an optimal
/// tree that queries the smallest optimal coordinate at each node.
pub fn dt_depth(f: &BooleanFunction) -> Result<(usize, ParityDecisionTree)> {
    let t = Subcubes::build(f, true)?;
    let full = t.full();
    let tree = t.tree(full);
    let depth = if t.status[full] == MIXED { t.depth[full] as usize } else { 0 };
    Ok((depth, tree))
}
