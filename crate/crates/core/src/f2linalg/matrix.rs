use serde::{Deserialize, Serialize};

use super::{parity, F2Vector};
use crate::error::{Error, Result};

/// Rank of a set of packed row vectors.
pub(crate) fn rank_of(rows: &[u64]) -> usize {
    // reduced basis: every element is zero on the other elements' pivots
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            if v & (b & b.wrapping_neg()) != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            let low = v & v.wrapping_neg();
            for b in basis.iter_mut() {
                if *b & low != 0 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis.len()
}

/// A square matrix over F₂ acting on column vectors: `(M x)_j = ⟨row_j, x⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct F2Matrix {
    size: usize,
    rows: Vec<u64>,
}

impl F2Matrix {
    pub fn identity(size: usize) -> Self {
        Self {
            size,
            rows: (0..size).map(|i| 1u64 << i).collect(),
        }
    }

    pub fn from_rows(rows: Vec<F2Vector>) -> Result<Self> {
        let size = rows.len();
        for r in &rows {
            r.check_width(size)?;
        }
        Ok(Self {
            size,
            rows: rows.iter().map(|r| r.bits()).collect(),
        })
    }

    pub(crate) fn from_raw(size: usize, rows: Vec<u64>) -> Self {
        debug_assert_eq!(rows.len(), size);
        Self { size, rows }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn row(&self, j: usize) -> F2Vector {
        F2Vector::new(self.size, self.rows[j]).expect("row fits matrix width")
    }

    pub fn apply(&self, x: &F2Vector) -> Result<F2Vector> {
        x.check_width(self.size)?;
        F2Vector::new(self.size, self.apply_raw(x.bits()))
    }

    #[inline]
    pub(crate) fn apply_raw(&self, x: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &r)| acc | ((parity(r & x) as u64) << j))
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.rows)
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.size
    }

    pub fn inverse(&self) -> Result<F2Matrix> {
        let n = self.size;
        let mut a = self.rows.clone();
        let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| (a[r] >> col) & 1 == 1) else {
                return Err(Error::InvalidParam("matrix is singular".into()));
            };
            a.swap(col, p);
            inv.swap(col, p);
            for r in 0..n {
                if r != col && (a[r] >> col) & 1 == 1 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Ok(F2Matrix { size: n, rows: inv })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = F2Matrix::from_raw(3, vec![0b011, 0b110, 0b001]);
        assert!(m.is_invertible());
        let inv = m.inverse().unwrap();
        for x in 0..8u64 {
            assert_eq!(inv.apply_raw(m.apply_raw(x)), x);
        }
        let singular = F2Matrix::from_raw(2, vec![0b11, 0b11]);
        assert_eq!(singular.rank(), 1);
        assert!(singular.inverse().is_err());
    }
}
