//! Optimal parity decision trees by memoized minimax search.
//!
//! A query `⟨γ, z⟩ = b` on an m-variable function is resolved by solving for
//! the lowest coordinate `p` of `γ`, which leaves a function of the other
//! m−1 coordinates. Depth is invariant under this choice of parametrization,
//! so the memo is keyed by the resulting truth table. Iterative deepening
//! starts from the F₂-degree and sparsity lower bounds.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Budget, Limit, Measured, ParityDecisionTree};
use crate::boolfn::BooleanFunction;
use crate::error::Result;
use crate::f2linalg::parity;
use crate::spectral::fwht;

/// Largest arity solved exactly.
pub const MAX_PDT_ARITY: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdtResult {
    pub measured: Measured,
    /// An optimal tree when exact, otherwise the greedy upper-bound tree.
    pub tree: ParityDecisionTree,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Table {
    m: u8,
    w: [u64; 4],
}

impl Table {
    fn of(f: &BooleanFunction) -> Self {
        let mut w = [0u64; 4];
        w[..f.words().len()].copy_from_slice(f.words());
        Table { m: f.arity() as u8, w }
    }

    #[inline]
    fn get(&self, x: u64) -> bool {
        (self.w[(x >> 6) as usize] >> (x & 63)) & 1 == 1
    }

    fn len(&self) -> u64 {
        1 << self.m
    }

    fn constant(&self) -> Option<bool> {
        let ones: u32 = self.w.iter().map(|w| w.count_ones()).sum();
        match ones as u64 {
            0 => Some(false),
            c if c == self.len() => Some(true),
            _ => None,
        }
    }

    /// The function on `{z : ⟨γ, z⟩ = b}`, coordinate `lowest(γ)` removed.
    fn child(&self, gamma: u64, b: bool) -> Table {
        let p = gamma.trailing_zeros();
        let rest = gamma & !(1 << p);
        let low = (1u64 << p) - 1;
        let mut w = [0u64; 4];
        for y in 0..self.len() / 2 {
            let z = (y & low) | ((y & !low) << 1);
            let z = z | (((b ^ parity(rest & z)) as u64) << p);
            if self.get(z) {
                w[(y >> 6) as usize] |= 1 << (y & 63);
            }
        }
        Table { m: self.m - 1, w }
    }

    /// max(F₂-degree, ⌈log₄ sparsity⌉).
    fn lower_bound(&self) -> usize {
        let n = self.len() as usize;
        let mut anf: Vec<bool> = (0..self.len()).map(|x| self.get(x)).collect();
        let mut h = 1;
        while h < n {
            for x in 0..n {
                if x & h != 0 {
                    anf[x] ^= anf[x ^ h];
                }
            }
            h <<= 1;
        }
        let degree = (0..n).filter(|&x| anf[x]).map(|x| x.count_ones()).max().unwrap_or(0);
        let mut signs: Vec<i64> = (0..self.len()).map(|x| if self.get(x) { -1 } else { 1 }).collect();
        fwht(&mut signs);
        let sparsity = signs.iter().filter(|&&c| c != 0).count();
        let mut log4 = 0;
        while (1usize << (2 * log4)) < sparsity {
            log4 += 1;
        }
        (degree as usize).max(log4)
    }
}

#[derive(Clone, Copy)]
struct Entry {
    lower: usize,
    upper: usize,
}

struct Exhausted;

struct Solver {
    memo: HashMap<Table, Entry>,
    nodes: u64,
    max_nodes: u64,
}

impl Solver {
    fn entry(&mut self, t: &Table) -> Entry {
        *self.memo.entry(*t).or_insert_with(|| Entry {
            lower: t.lower_bound(),
            upper: t.m as usize,
        })
    }

    fn at_most(&mut self, t: &Table, d: usize) -> Result<bool, Exhausted> {
        if t.constant().is_some() {
            return Ok(true);
        }
        if d == 0 {
            return Ok(false);
        }
        if d >= t.m as usize {
            return Ok(true);
        }
        let e = self.entry(t);
        if e.lower > d {
            return Ok(false);
        }
        if e.upper <= d {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Exhausted);
        }
        let found = self.best_query(t, d)?.is_some();
        let e = self.memo.get_mut(t).expect("entry inserted above");
        if found {
            e.upper = e.upper.min(d);
        } else {
            e.lower = e.lower.max(d + 1);
        }
        Ok(found)
    }

    /// Smallest query whose two branches both have depth ≤ d−1.
    fn best_query(&mut self, t: &Table, d: usize) -> Result<Option<u64>, Exhausted> {
        for gamma in 1..t.len() {
            if self.at_most(&t.child(gamma, false), d - 1)?
                && self.at_most(&t.child(gamma, true), d - 1)?
            {
                return Ok(Some(gamma));
            }
        }
        Ok(None)
    }

    fn depth(&mut self, t: &Table) -> Result<usize, Exhausted> {
        if t.constant().is_some() {
            return Ok(0);
        }
        let start = self.entry(t).lower;
        for d in start..=t.m as usize {
            if self.at_most(t, d)? {
                return Ok(d);
            }
        }
        unreachable!("depth m always suffices")
    }

    /// An optimal tree; `coords[j]` is the original coordinate behind
    /// quotient coordinate `j` and `path` holds the (query, answer) pairs
    /// made so far. Each node asks the optimal query whose smallest
    /// equivalent form on the current subspace is smallest.
    fn build(
        &mut self,
        t: &Table,
        coords: &[usize],
        path: &mut Vec<(u64, bool)>,
    ) -> Result<ParityDecisionTree, Exhausted> {
        if let Some(v) = t.constant() {
            return Ok(ParityDecisionTree::Leaf(v));
        }
        let d = self.depth(t)?;
        let mut best: Option<(u64, bool, u64)> = None;
        for gamma in 1..t.len() {
            if self.at_most(&t.child(gamma, false), d - 1)?
                && self.at_most(&t.child(gamma, true), d - 1)?
            {
                let (query, flip) = smallest_form(embed_query(gamma, coords), path);
                if best.is_none_or(|(q, _, _)| query < q) {
                    best = Some((query, flip, gamma));
                }
            }
        }
        let (query, flip, gamma) = best.expect("depth was established");
        let p = gamma.trailing_zeros() as usize;
        let rest: Vec<usize> = coords.iter().enumerate().filter(|&(j, _)| j != p).map(|(_, &c)| c).collect();
        let mut branch = |solver: &mut Self, b: bool| {
            path.push((query, b));
            let sub = solver.build(&t.child(gamma, b ^ flip), &rest, path);
            path.pop();
            sub
        };
        let zero = branch(self, false)?;
        let one = branch(self, true)?;
        Ok(ParityDecisionTree::node(query, zero, one))
    }
}

/// The smallest vector of `q + span(path queries)`, and the constant that
/// relates the two forms on the subspace cut out by the path.
fn smallest_form(q: u64, path: &[(u64, bool)]) -> (u64, bool) {
    (0..1u64 << path.len())
        .map(|mask| {
            path.iter()
                .enumerate()
                .filter(|&(i, _)| (mask >> i) & 1 == 1)
                .fold((q, false), |(v, c), (_, &(b, a))| (v ^ b, c ^ a))
        })
        .min()
        .expect("nonempty span")
}

fn embed_query(gamma: u64, coords: &[usize]) -> u64 {
    coords
        .iter()
        .enumerate()
        .filter(|&(j, _)| (gamma >> j) & 1 == 1)
        .fold(0, |q, (_, &c)| q | (1 << c))
}

/// A valid, usually suboptimal tree for any arity: parities are answered by
/// one query, anything else splits on its first relevant variable.
pub fn greedy_tree(f: &BooleanFunction) -> ParityDecisionTree {
    fn go(f: &BooleanFunction, coords: &[usize]) -> ParityDecisionTree {
        if let Some(v) = f.constant_value() {
            return ParityDecisionTree::Leaf(v);
        }
        if let Some((alpha, b)) = f.as_parity() {
            return ParityDecisionTree::node(
                embed_query(alpha, coords),
                ParityDecisionTree::Leaf(b),
                ParityDecisionTree::Leaf(!b),
            );
        }
        let c = (0..f.arity()).find(|&c| f.depends_on(c)).expect("non-constant");
        let rest: Vec<usize> = coords.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect();
        ParityDecisionTree::node(
            1 << coords[c],
            go(&f.fix(c, false), &rest),
            go(&f.fix(c, true), &rest),
        )
    }
    let coords: Vec<usize> = (0..f.arity()).collect();
    go(f, &coords)
}

/// F₂-degree and sparsity bounds for functions too large for the exact
/// search.
fn large_lower_bound(f: &BooleanFunction) -> usize {
    let n = f.table_len() as usize;
    let mut anf: Vec<u64> = f.words().to_vec();
    // Möbius transform: in-word strides first, then whole words.
    const MASKS: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    for (i, m) in MASKS.iter().enumerate().take(f.arity().min(6)) {
        for w in anf.iter_mut() {
            *w ^= (*w & m) << (1 << i);
        }
    }
    let mut h = 1;
    while h < anf.len() {
        for j in 0..anf.len() {
            if j & h != 0 {
                anf[j] ^= anf[j ^ h];
            }
        }
        h <<= 1;
    }
    let degree = (0..n as u64)
        .filter(|&x| (anf[(x >> 6) as usize] >> (x & 63)) & 1 == 1)
        .map(|x| x.count_ones() as usize)
        .max()
        .unwrap_or(0);
    let sparsity = crate::spectral::FourierSpectrum::of(f).sparsity();
    let mut log4 = 0;
    while (1usize << (2 * log4)) < sparsity {
        log4 += 1;
    }
    degree.max(log4)
}

/// `DT⊕[f]` with an optimal tree, exact up to [`MAX_PDT_ARITY`] variables
/// and within `budget.max_tree_nodes` search nodes.
pub fn pdt_depth(f: &BooleanFunction, budget: &Budget) -> Result<PdtResult> {
    if let Some(v) = f.constant_value() {
        return Ok(PdtResult {
            measured: Measured::Exact { value: 0 },
            tree: ParityDecisionTree::Leaf(v),
        });
    }
    let fallback = |lower: usize, limit: Limit| {
        let tree = greedy_tree(f);
        PdtResult {
            measured: Measured::Partial {
                lower,
                upper: Some(tree.depth()),
                limit,
            },
            tree,
        }
    };
    if f.arity() > MAX_PDT_ARITY {
        return Ok(fallback(large_lower_bound(f), Limit::Arity));
    }
    let table = Table::of(f);
    let mut solver = Solver {
        memo: HashMap::new(),
        nodes: 0,
        max_nodes: budget.max_tree_nodes,
    };
    let coords: Vec<usize> = (0..f.arity()).collect();
    match solver.build(&table, &coords, &mut Vec::new()) {
        Ok(tree) => Ok(PdtResult {
            measured: Measured::Exact { value: tree.depth() },
            tree,
        }),
        Err(Exhausted) => {
            let lower = solver.memo.get(&table).map_or(0, |e| e.lower);
            Ok(fallback(lower, Limit::TreeNodes))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::Family;
    use crate::f2linalg::{enumerate_systems, AffineSystem};

    /// Minimax over canonical systems, straight from the definition.
    fn brute_pdt(f: &BooleanFunction) -> usize {
        fn go(f: &BooleanFunction, s: &AffineSystem) -> usize {
            if f.restrict(s).unwrap().quotient().constant_value().is_some() {
                return 0;
            }
            let n = f.arity();
            let mut best = usize::MAX;
            for q in 1..1u64 << n {
                let row = crate::f2linalg::F2Vector::new(n, q).unwrap();
                let branches: Vec<AffineSystem> = [false, true]
                    .iter()
                    .filter_map(|&b| s.with_constraint(&row, b).unwrap().into_system().ok())
                    .collect();
                if branches.len() < 2 || branches.iter().any(|b| b.codim() == s.codim()) {
                    continue;
                }
                let d = 1 + branches.iter().map(|b| go(f, b)).max().unwrap();
                best = best.min(d);
            }
            best
        }
        go(f, &AffineSystem::full(f.arity()).unwrap())
    }

    #[test]
    fn named_values() {
        let b = Budget::default();
        for (family, depth) in [(Family::Sort, 2), (Family::Maj3, 2), (Family::And2, 2), (Family::Nae3, 2)] {
            let f = family.build().unwrap();
            let r = pdt_depth(&f, &b).unwrap();
            assert_eq!(r.measured, Measured::Exact { value: depth }, "{family:?}");
            r.tree.validate(&f).unwrap();
            assert_eq!(r.tree.depth(), depth);
        }
        let k = Family::Constant { value: true, arity: 5 }.build().unwrap();
        assert_eq!(pdt_depth(&k, &Budget::zero()).unwrap().measured.exact(), Some(0));
    }

    #[test]
    fn maj_tree_queries_smallest_pair_first() {
        let maj = Family::Maj3.build().unwrap();
        let r = pdt_depth(&maj, &Budget::default()).unwrap();
        assert_eq!(r.tree.to_string(), "(q 3 (q 1 (leaf 0) (leaf 1)) (q 4 (leaf 0) (leaf 1)))");
    }

    #[test]
    fn matches_minimax_on_arity_three() {
        let b = Budget::default();
        for t in 0..256u64 {
            let f = BooleanFunction::from_words(3, vec![t]).unwrap();
            let r = pdt_depth(&f, &b).unwrap();
            assert_eq!(r.measured.exact(), Some(brute_pdt(&f)), "f={t:#x}");
            r.tree.validate(&f).unwrap();
        }
    }

    #[test]
    fn hemi_icosahedron_tree_is_valid() {
        let hi = Family::HemiIcosahedron.build().unwrap();
        let r = pdt_depth(&hi, &Budget::default()).unwrap();
        let d = r.measured.exact().unwrap();
        r.tree.validate(&hi).unwrap();
        assert_eq!(r.tree.depth(), d);
        assert!(d >= 3, "degree 3 bounds the depth");
    }

    #[test]
    fn large_and_exhausted_inputs_fall_back() {
        let sort = Family::Sort.build().unwrap();
        let s2 = sort.power(2).unwrap();
        let r = pdt_depth(&s2, &Budget::default()).unwrap();
        assert!(matches!(r.measured, Measured::Partial { limit: Limit::Arity, .. }));
        r.tree.validate(&s2).unwrap();
        assert!(r.measured.lower() >= 3);
        let r = pdt_depth(&sort, &Budget::zero()).unwrap();
        assert!(matches!(r.measured, Measured::Partial { limit: Limit::TreeNodes, .. }));
        r.tree.validate(&sort).unwrap();
    }

    #[test]
    fn greedy_tree_is_valid() {
        for system in enumerate_systems(3, 1).unwrap().take(4) {
            let f = BooleanFunction::from_fn(3, |x| system.contains_raw(x)).unwrap();
            greedy_tree(&f).validate(&f).unwrap();
        }
        let p = BooleanFunction::from_fn(4, |x| parity(x & 0b1011)).unwrap();
        assert_eq!(greedy_tree(&p).to_string(), "(q b (leaf 0) (leaf 1))");
    }
}
