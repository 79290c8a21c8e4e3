//! Reference answers computed directly from the definitions, without the
//! canonical enumeration.

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};

/// Every affine subspace of F₂ⁿ (n ≤ 4) as a point mask, with its
/// codimension, found by testing every subset of points for closure under
/// `a + b + c`.
pub fn affine_subsets(n: usize) -> Result<Vec<(u64, usize)>> {
    if n == 0 || n > 4 {
        return Err(Error::ArityTooLarge { arity: n, max: 4 });
    }
    let size = 1u64 << n;
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << size) {
        let count = mask.count_ones();
        if !count.is_power_of_two() {
            continue;
        }
        let pts: Vec<u64> = (0..size).filter(|&x| (mask >> x) & 1 == 1).collect();
        let a = pts[0];
        if pts
            .iter()
            .all(|&p| pts.iter().all(|&q| (mask >> (a ^ p ^ q)) & 1 == 1))
        {
            out.push((mask, n - count.trailing_zeros() as usize));
        }
    }
    Ok(out)
}

/// `C⊕_min[f]` as the smallest codimension among constant subsets from
/// [`affine_subsets`].
pub fn naive_pc_min(f: &BooleanFunction, subsets: &[(u64, usize)]) -> usize {
    let ones: u64 = (0..f.table_len()).filter(|&x| f.get(x)).fold(0, |m, x| m | (1 << x));
    subsets
        .iter()
        .filter(|&&(s, _)| ones & s == 0 || ones & s == s)
        .map(|&(_, d)| d)
        .min()
        .unwrap_or(f.arity())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_counts() {
        // 16 points, 120 lines, 140 planes, 30 hyperplanes, 1 whole space
        let s = affine_subsets(4).unwrap();
        let count = |d| s.iter().filter(|x| x.1 == d).count();
        assert_eq!([count(4), count(3), count(2), count(1), count(0)], [16, 120, 140, 30, 1]);
    }

    #[test]
    fn and_needs_one_constraint() {
        let and = BooleanFunction::from_fn(2, |x| x == 3).unwrap();
        assert_eq!(naive_pc_min(&and, &affine_subsets(2).unwrap()), 1);
    }
}
