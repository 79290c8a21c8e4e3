//! Normal form for affine subspaces of F₂ⁿ × F₂ᵏ under block-diagonal
//! changes of basis `(x, y) ↦ (Lℓ x, Lᵣ y)`.
//!
//! Every constraint row `(α, β)` is rewritten so that the nonzero left parts
//! and the nonzero right parts are each linearly independent. A left
//! dependency `α_{i₁} + … + α_{iₘ} = 0` is broken by replacing one member
//! `(α_{i_j}, β_{i_j})` with `(0, β_{i₁} + … + β_{iₘ})` (right-hand sides
//! summed accordingly); right dependencies are handled symmetrically.
//! Dependencies are located by scanning rows in order; the replaced member is
//! the row that closed the dependency when its other half is nonzero,
//! otherwise the lowest-index member with a nonzero other half.
//!
//! After that, the point transforms are simply the matrices whose leading
//! rows are the independent halves: `⟨Lℓ x, e_j⟩ = ⟨α_j, x⟩`.

use serde::{Deserialize, Serialize};

use super::matrix::rank_of;
use super::{rref_raw, width_mask, AffineSystem, F2Matrix, Reduction};
use crate::error::{Error, Result};

/// Partitioned system `{(eᵢ,eᵢ)}ᵢ≤t ⊔ {(eⱼ,0)}_{t<j≤t′} ⊔ {(0,eₖ)}_{t<k≤t″}`
/// together with the transforms mapping the input subspace onto it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductBasisPartition {
    pub left_transform: F2Matrix,
    pub right_transform: F2Matrix,
    pub shared: usize,
    pub left_only: usize,
    pub right_only: usize,
    pub system: AffineSystem,
    /// Number of row replacements performed.
    pub replacements: usize,
}

impl ProductBasisPartition {
    /// `(Lℓ x, Lᵣ y)` for a point of the product space (x in the low bits).
    pub fn transform_point(&self, point: u64, split: (usize, usize)) -> u64 {
        let (n, _) = split;
        let x = point & width_mask(n);
        let y = point >> n;
        self.left_transform.apply_raw(x) | (self.right_transform.apply_raw(y) << n)
    }
}

/// Finds, scanning rows in order, the first row whose half (selected by
/// `half`) lies in the span of the nonzero halves before it. Returns the
/// indices of the dependent set.
fn find_dependency(halves: &[u64]) -> Option<Vec<usize>> {
    // (reduced vector, combination mask over row indices)
    let mut basis: Vec<(u64, u128)> = Vec::new();
    for (i, &h) in halves.iter().enumerate() {
        if h == 0 {
            continue;
        }
        let mut v = h;
        let mut combo: u128 = 1 << i;
        for &(b, c) in &basis {
            if v & (b & b.wrapping_neg()) != 0 {
                v ^= b;
                combo ^= c;
            }
        }
        if v == 0 {
            return Some((0..halves.len()).filter(|&j| (combo >> j) & 1 == 1).collect());
        }
        let low = v & v.wrapping_neg();
        for (b, c) in basis.iter_mut() {
            if *b & low != 0 {
                *b ^= v;
                *c ^= combo;
            }
        }
        basis.push((v, combo));
    }
    None
}

fn extend_to_basis(size: usize, mut rows: Vec<u64>) -> Vec<u64> {
    for i in 0..size {
        if rows.len() == size {
            break;
        }
        rows.push(1 << i);
        if rank_of(&rows) < rows.len() {
            rows.pop();
        }
    }
    rows
}

/// Computes the product-basis normal form of `system` over F₂ⁿ × F₂ᵏ, where
/// coordinates `1..=n` are the left block and `n+1..=n+k` the right block.
///
/// Accepts raw systems too; redundant rows are dropped first, keeping row
/// order.
pub fn product_canonicalize(
    system: &AffineSystem,
    split: (usize, usize),
) -> Result<ProductBasisPartition> {
    let (n, k) = split;
    if n == 0 || k == 0 {
        return Err(Error::InvalidParam("both blocks must be nonempty".into()));
    }
    if system.ambient() != n + k {
        return Err(Error::WidthMismatch {
            expected: n + k,
            found: system.ambient(),
        });
    }
    if system.len() > 128 {
        return Err(Error::InvalidParam("too many rows".into()));
    }
    // Drop rows dependent on earlier ones (consistent, hence redundant).
    let mut rows: Vec<u64> = Vec::new();
    let mut rhs: Vec<bool> = Vec::new();
    for (&r, &s) in system.raw_rows().iter().zip(system.rhs()) {
        rows.push(r);
        if rank_of(&rows) < rows.len() {
            rows.pop();
        } else {
            rhs.push(s);
        }
    }
    let left = |r: u64| r & width_mask(n);
    let right = |r: u64| r >> n;

    let mut replacements = 0;
    let limit = 2 * rows.len() + 2;
    loop {
        let lefts: Vec<u64> = rows.iter().map(|&r| left(r)).collect();
        let rights: Vec<u64> = rows.iter().map(|&r| right(r)).collect();
        let (dep, other, keep_left) = if let Some(dep) = find_dependency(&lefts) {
            (dep, &rights, false)
        } else if let Some(dep) = find_dependency(&rights) {
            (dep, &lefts, true)
        } else {
            break;
        };
        let closing = *dep.last().expect("dependency is nonempty");
        let target = if other[closing] != 0 {
            closing
        } else {
            *dep
                .iter()
                .find(|&&j| other[j] != 0)
                .expect("independent rows cannot have a dependency on both halves")
        };
        let sum_other = dep.iter().fold(0u64, |m, &j| m ^ other[j]);
        let sum_rhs = dep.iter().fold(false, |m, &j| m ^ rhs[j]);
        rows[target] = if keep_left { sum_other } else { sum_other << n };
        rhs[target] = sum_rhs;
        replacements += 1;
        if replacements > limit {
            unreachable!("replacement process failed to terminate");
        }
    }

    let mut shared = Vec::new();
    let mut left_only = Vec::new();
    let mut right_only = Vec::new();
    for (&r, &s) in rows.iter().zip(&rhs) {
        match (left(r) != 0, right(r) != 0) {
            (true, true) => shared.push((r, s)),
            (true, false) => left_only.push((r, s)),
            (false, true) => right_only.push((r, s)),
            (false, false) => unreachable!("zero row in an independent system"),
        }
    }
    let t = shared.len();
    let left_rows: Vec<u64> = shared
        .iter()
        .chain(&left_only)
        .map(|&(r, _)| left(r))
        .collect();
    let right_rows: Vec<u64> = shared
        .iter()
        .chain(&right_only)
        .map(|&(r, _)| right(r))
        .collect();
    let left_transform = F2Matrix::from_raw(n, extend_to_basis(n, left_rows));
    let right_transform = F2Matrix::from_raw(k, extend_to_basis(k, right_rows));
    debug_assert!(left_transform.is_invertible() && right_transform.is_invertible());

    let mut out_rows = Vec::new();
    let mut out_rhs = Vec::new();
    for (i, &(_, s)) in shared.iter().enumerate() {
        out_rows.push((1u64 << i) | (1u64 << (n + i)));
        out_rhs.push(s);
    }
    for (j, &(_, s)) in left_only.iter().enumerate() {
        out_rows.push(1u64 << (t + j));
        out_rhs.push(s);
    }
    for (j, &(_, s)) in right_only.iter().enumerate() {
        out_rows.push(1u64 << (n + t + j));
        out_rhs.push(s);
    }
    let partitioned = AffineSystem::from_raw_unchecked(n + k, out_rows, out_rhs);
    debug_assert!(matches!(
        rref_raw(n + k, partitioned.raw_rows().to_vec(), partitioned.rhs().to_vec()),
        Reduction::Consistent(_)
    ));
    Ok(ProductBasisPartition {
        left_transform,
        right_transform,
        shared: t,
        left_only: left_only.len(),
        right_only: right_only.len(),
        system: partitioned,
        replacements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2linalg::{enumerate_systems, F2Vector};
    use std::collections::BTreeSet;

    fn points(s: &AffineSystem) -> BTreeSet<u64> {
        (0..1u64 << s.ambient()).filter(|&x| s.contains_raw(x)).collect()
    }

    fn check(system: &AffineSystem, split: (usize, usize)) -> ProductBasisPartition {
        let p = product_canonicalize(system, split).unwrap();
        let image: BTreeSet<u64> = points(system)
            .into_iter()
            .map(|x| p.transform_point(x, split))
            .collect();
        assert_eq!(image, points(&p.system), "system {system}");
        assert_eq!(p.shared + p.left_only + p.right_only, system.codim());
        assert!(p.system.is_canonical());
        p
    }

    fn v(s: &str) -> F2Vector {
        F2Vector::from_bit_str(s).unwrap()
    }

    #[test]
    fn already_normal() {
        let s = AffineSystem::from_rows(4, &[v("1010")], &[false]).unwrap();
        let p = check(&s, (2, 2));
        assert_eq!((p.shared, p.left_only, p.right_only), (1, 0, 0));
        assert_eq!(p.left_transform, F2Matrix::identity(2));
        assert_eq!(p.right_transform, F2Matrix::identity(2));
        assert_eq!(p.replacements, 0);
    }

    #[test]
    fn one_replacement() {
        // (e₁,e₁) and (e₁,e₂): left halves collide.
        let s = AffineSystem::from_rows(4, &[v("1010"), v("1001")], &[false, true]).unwrap();
        assert!(!s.is_canonical());
        let p = check(&s, (2, 2));
        assert_eq!(p.replacements, 1);
        assert_eq!((p.shared, p.left_only, p.right_only), (1, 0, 1));
        // Second row became (0, e₁+e₂), mapped to (0, e₂).
        assert_eq!(p.right_transform.row(1), v("11"));
        assert_eq!(p.system.rows()[1], v("0001"));
    }

    #[test]
    fn left_only() {
        let s = AffineSystem::from_rows(4, &[v("1000")], &[true]).unwrap();
        let p = check(&s, (2, 2));
        assert_eq!((p.shared, p.left_only, p.right_only), (0, 1, 0));
    }

    #[test]
    fn exhaustive_small_products() {
        for n in 1..=3 {
            for k in 1..=3 {
                for d in 0..=(n + k) {
                    for s in enumerate_systems(n + k, d).unwrap() {
                        check(&s, (n, k));
                    }
                }
            }
        }
    }

    #[test]
    fn partition_sizes_independent_of_row_order() {
        // shared/left/right counts are dimensions of V, V∩(Fⁿ×0) and
        // V∩(0×Fᵏ), so any presentation of the same subspace agrees.
        let rows = [v("110110"), v("100011"), v("010101"), v("001000")];
        let rhs = [true, false, true, true];
        let mut seen = BTreeSet::new();
        for perm in [[0, 1, 2, 3], [3, 2, 1, 0], [1, 3, 0, 2], [2, 0, 3, 1]] {
            let r: Vec<F2Vector> = perm.iter().map(|&i| rows[i]).collect();
            let s: Vec<bool> = perm.iter().map(|&i| rhs[i]).collect();
            let sys = AffineSystem::from_rows(6, &r, &s).unwrap();
            let p = check(&sys, (3, 3));
            seen.insert((p.shared, p.left_only, p.right_only));
            let p = check(&sys.canonicalize(), (3, 3));
            seen.insert((p.shared, p.left_only, p.right_only));
        }
        assert_eq!(seen.len(), 1);
    }

    #[test]
    fn rejects_bad_split() {
        let s = AffineSystem::full(4).unwrap();
        assert!(product_canonicalize(&s, (3, 2)).is_err());
        assert!(product_canonicalize(&s, (4, 0)).is_err());
    }
}
