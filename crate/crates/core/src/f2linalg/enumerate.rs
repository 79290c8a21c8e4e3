//! Deterministic enumeration of canonical affine systems.
//!
//! Order: pivot-column sets lexicographically, then the free entries of the
//! echelon form read column-major (first entry most significant), then the
//! right-hand side (σ₁ most significant). Each pivot set is an independent
//! chunk, which is how parallel consumers partition the stream.

use super::{AffineSystem, F2Vector};
use crate::error::{Error, Result};

/// Number of d-dimensional subspaces of F₂ⁿ, saturating at `u128::MAX`.
pub fn gaussian_binomial(n: usize, d: usize) -> u128 {
    if d > n {
        return 0;
    }
    let mut g: u128 = 1;
    for j in 0..d {
        let num = (1u128 << (n - j).min(127)) - 1;
        let den = (1u128 << (j + 1).min(127)) - 1;
        g = match g.checked_mul(num) {
            Some(p) => p / den,
            None => return u128::MAX,
        };
    }
    g
}

/// Number of canonical linear parts (row spaces) of codimension `d`.
pub fn count_linear_parts(n: usize, d: usize) -> u128 {
    gaussian_binomial(n, d)
}

/// Number of canonical affine systems of codimension `d` in F₂ⁿ.
pub fn count_systems(n: usize, d: usize) -> u128 {
    gaussian_binomial(n, d).saturating_mul(1u128 << d.min(127))
}

/// All 0-based pivot-column sets of size `d`, lexicographically.
pub fn pivot_sets(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if d > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..d).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..d).rev().find(|&i| cur[i] < n - d + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..d {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// The echelon row sets sharing one pivot-column set.
#[derive(Clone, Debug)]
pub struct LinearParts {
    base: Vec<u64>,
    entries: Vec<(usize, usize)>,
    next: u128,
    end: u128,
}

impl LinearParts {
    pub fn new(n: usize, pivots: &[usize]) -> Self {
        let pivot_mask: u64 = pivots.iter().fold(0, |m, &p| m | (1 << p));
        let mut entries = Vec::new();
        for col in 0..n {
            if (pivot_mask >> col) & 1 == 1 {
                continue;
            }
            for (row, &p) in pivots.iter().enumerate() {
                if p < col {
                    entries.push((row, col));
                }
            }
        }
        let end = if entries.len() >= 128 {
            u128::MAX
        } else {
            1u128 << entries.len()
        };
        Self {
            base: pivots.iter().map(|&p| 1u64 << p).collect(),
            entries,
            next: 0,
            end,
        }
    }

    /// Number of free entries; the chunk holds `2^free_entries` row sets.
    pub fn free_entries(&self) -> usize {
        self.entries.len()
    }

    /// Restricts the iterator to row sets `start..end` of the chunk, in the
    /// same order.
    pub fn range(mut self, start: u128, end: u128) -> Self {
        self.next = start.max(self.next);
        self.end = end.min(self.end);
        self
    }
}

impl Iterator for LinearParts {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.next >= self.end {
            return None;
        }
        let v = self.next;
        self.next += 1;
        let f = self.entries.len();
        let mut rows = self.base.clone();
        for (j, &(row, col)) in self.entries.iter().enumerate() {
            if (v >> (f - 1 - j)) & 1 == 1 {
                rows[row] |= 1 << col;
            }
        }
        Some(rows)
    }
}

/// Right-hand side number `r` (σ₁ most significant) for `d` rows.
#[inline]
pub(crate) fn rhs_bits(r: u64, d: usize) -> Vec<bool> {
    (0..d).map(|i| (r >> (d - 1 - i)) & 1 == 1).collect()
}

/// Every canonical affine system of one codimension, exactly once.
pub struct SystemIter {
    n: usize,
    d: usize,
    pivots: std::vec::IntoIter<Vec<usize>>,
    parts: Option<LinearParts>,
    rows: Option<Vec<u64>>,
    rhs: u64,
}

impl Iterator for SystemIter {
    type Item = AffineSystem;

    fn next(&mut self) -> Option<AffineSystem> {
        loop {
            if let Some(rows) = &self.rows {
                if self.rhs < 1 << self.d {
                    let sys = AffineSystem::canonical_unchecked(
                        self.n,
                        rows.clone(),
                        rhs_bits(self.rhs, self.d),
                    );
                    self.rhs += 1;
                    return Some(sys);
                }
                self.rows = None;
            }
            if let Some(parts) = &mut self.parts {
                if let Some(rows) = parts.next() {
                    self.rows = Some(rows);
                    self.rhs = 0;
                    continue;
                }
                self.parts = None;
            }
            let p = self.pivots.next()?;
            self.parts = Some(LinearParts::new(self.n, &p));
        }
    }
}

/// Enumerates all canonical systems of codimension `codim` over F₂ⁿ.
pub fn enumerate_systems(n: usize, codim: usize) -> Result<SystemIter> {
    if n == 0 || n > F2Vector::MAX_WIDTH {
        return Err(Error::InvalidWidth(n));
    }
    if codim > n {
        return Err(Error::CodimOutOfRange { codim, ambient: n });
    }
    Ok(SystemIter {
        n,
        d: codim,
        pivots: pivot_sets(n, codim).into_iter(),
        parts: None,
        rows: None,
        rhs: 0,
    })
}
