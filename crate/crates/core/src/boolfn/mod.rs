//! Bit-packed truth tables of total functions F₂ⁿ → F₂.
//!
//! Entry `x` of the table holds `f(x)` where `x = Σ xⱼ·2^(j−1)`, i.e. x₁ is
//! the least significant bit of the index.

mod families;
mod format;

use std::fmt;

use crate::error::{Error, Result};
use crate::f2linalg::{parity, rref_raw, AffineSystem, F2Vector, Reduction};

pub use families::Family;
pub use format::parse_functions;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    arity: usize,
    words: Vec<u64>,
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction({self})")
    }
}

#[inline]
fn word_count(arity: usize) -> usize {
    if arity <= 6 {
        1
    } else {
        1 << (arity - 6)
    }
}

#[inline]
fn entry_mask(arity: usize) -> u64 {
    if arity >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << arity)) - 1
    }
}

impl BooleanFunction {
    /// Largest supported arity (a 1 MiB table).
    pub const MAX_ARITY: usize = 20;

    fn check_arity(arity: usize, max: usize) -> Result<()> {
        if arity > max {
            return Err(Error::ArityTooLarge { arity, max });
        }
        Ok(())
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::check_arity(arity, Self::MAX_ARITY)?;
        let fill = if value { u64::MAX } else { 0 };
        let mut words = vec![fill; word_count(arity)];
        words[0] &= entry_mask(arity);
        Ok(Self { arity, words })
    }

    /// Tabulates `eval` on every index `0 .. 2^arity`.
    pub fn from_fn(arity: usize, eval: impl Fn(u64) -> bool) -> Result<Self> {
        Self::check_arity(arity, Self::MAX_ARITY)?;
        let mut words = vec![0u64; word_count(arity)];
        for x in 0..1u64 << arity {
            if eval(x) {
                words[(x >> 6) as usize] |= 1 << (x & 63);
            }
        }
        Ok(Self { arity, words })
    }

    /// Builds a function from packed table words (entry `x` is bit `x % 64`
    /// of word `x / 64`).
    pub fn from_words(arity: usize, words: Vec<u64>) -> Result<Self> {
        Self::check_arity(arity, Self::MAX_ARITY)?;
        if words.len() != word_count(arity) {
            return Err(Error::InvalidParam(format!(
                "expected {} table words for arity {arity}, got {}",
                word_count(arity),
                words.len()
            )));
        }
        if words[0] & !entry_mask(arity) != 0 {
            return Err(Error::InvalidParam("table has bits beyond 2^arity entries".into()));
        }
        Ok(Self { arity, words })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn table_len(&self) -> u64 {
        1u64 << self.arity
    }

    /// Table entry at packed index `x`.
    #[inline]
    pub fn get(&self, x: u64) -> bool {
        (self.words[(x >> 6) as usize] >> (x & 63)) & 1 == 1
    }

    /// f(x) for a point of F₂ⁿ.
    pub fn evaluate(&self, x: &F2Vector) -> Result<bool> {
        x.check_width(self.arity)?;
        Ok(self.get(x.bits()))
    }

    /// Returns a copy with table entry `x` inverted.
    pub fn with_flipped(&self, x: u64) -> Result<Self> {
        if x >= self.table_len() {
            return Err(Error::InvalidParam(format!("index {x} outside the table")));
        }
        let mut out = self.clone();
        out.words[(x >> 6) as usize] ^= 1 << (x & 63);
        Ok(out)
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// `Some(b)` iff the function is constantly `b`.
    pub fn constant_value(&self) -> Option<bool> {
        match self.count_ones() {
            0 => Some(false),
            c if c == self.table_len() => Some(true),
            _ => None,
        }
    }

    /// `(f∘(g₁,…,gₙ))(y) = f(g₁(y⁽¹⁾),…,gₙ(y⁽ⁿ⁾))`, block 1 in the lowest
    /// coordinates.
    pub fn compose(&self, inner: &[BooleanFunction]) -> Result<BooleanFunction> {
        self.compose_with_limit(inner, Self::MAX_ARITY)
    }

    pub fn compose_with_limit(
        &self,
        inner: &[BooleanFunction],
        max_arity: usize,
    ) -> Result<BooleanFunction> {
        if inner.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: inner.len(),
            });
        }
        let total: usize = inner.iter().map(|g| g.arity).sum();
        Self::check_arity(total, max_arity.min(Self::MAX_ARITY))?;
        let mut offsets = Vec::with_capacity(inner.len());
        let mut off = 0;
        for g in inner {
            offsets.push(off);
            off += g.arity;
        }
        Self::from_fn(total, |y| {
            let mut z = 0u64;
            for (i, g) in inner.iter().enumerate() {
                let block = (y >> offsets[i]) & ((1u64 << g.arity) - 1);
                if g.get(block) {
                    z |= 1 << i;
                }
            }
            self.get(z)
        })
    }

    /// `f∘1 = f`, `f∘k = f∘(f∘(k−1), …, f∘(k−1))`.
    pub fn power(&self, k: usize) -> Result<BooleanFunction> {
        if k == 0 {
            return Err(Error::InvalidParam("power requires k ≥ 1".into()));
        }
        let arity = (self.arity as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if arity > Self::MAX_ARITY as u128 {
            return Err(Error::ArityTooLarge {
                arity: arity.min(usize::MAX as u128) as usize,
                max: Self::MAX_ARITY,
            });
        }
        let mut acc = self.clone();
        for _ in 1..k {
            let inner = vec![acc; self.arity];
            acc = self.compose(&inner)?;
        }
        Ok(acc)
    }

    /// `Some((α, b))` iff `f(x) = ⟨α, x⟩ ⊕ b` (constants included).
    pub fn as_parity(&self) -> Option<(u64, bool)> {
        let b = self.get(0);
        let alpha = (0..self.arity).fold(0u64, |a, i| a | (((self.get(1 << i) ^ b) as u64) << i));
        (0..self.table_len())
            .all(|x| self.get(x) == (parity(alpha & x) ^ b))
            .then_some((alpha, b))
    }

    /// Whether the Fourier support is a single character.
    pub fn is_parity(&self) -> bool {
        self.as_parity().is_some()
    }

    /// The quotient of `f` on the subspace of a canonical system.
    pub fn restrict(&self, system: &AffineSystem) -> Result<RestrictedFunction> {
        if system.ambient() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: system.ambient(),
            });
        }
        if !system.is_canonical() {
            return Err(Error::NotCanonical);
        }
        let free = system.free_columns();
        let quotient = BooleanFunction::from_fn(free.len(), |z| self.get(system.lift(&free, z)))?;
        Ok(RestrictedFunction {
            base: self.clone(),
            system: system.clone(),
            free,
            quotient,
        })
    }

    /// Fixes 0-based coordinate `coord` to `value`.
    pub(crate) fn fix(&self, coord: usize, value: bool) -> BooleanFunction {
        debug_assert!(coord < self.arity);
        let low = (1u64 << coord) - 1;
        BooleanFunction::from_fn(self.arity - 1, |z| {
            let x = (z & low) | ((z & !low) << 1) | ((value as u64) << coord);
            self.get(x)
        })
        .expect("smaller arity fits")
    }

    /// Whether the function depends on 0-based coordinate `coord`.
    pub(crate) fn depends_on(&self, coord: usize) -> bool {
        (0..self.table_len())
            .filter(|x| (x >> coord) & 1 == 0)
            .any(|x| self.get(x) != self.get(x | (1 << coord)))
    }
}

/// `f` restricted to an affine subspace, re-indexed by the free columns of
/// the canonical system (quotient coordinate `j` is the j-th free column).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedFunction {
    base: BooleanFunction,
    system: AffineSystem,
    free: Vec<usize>,
    quotient: BooleanFunction,
}

impl RestrictedFunction {
    pub fn base(&self) -> &BooleanFunction {
        &self.base
    }

    pub fn system(&self) -> &AffineSystem {
        &self.system
    }

    pub fn quotient(&self) -> &BooleanFunction {
        &self.quotient
    }

    pub fn quotient_arity(&self) -> usize {
        self.free.len()
    }

    /// 1-based coordinates of the base function that parametrise the
    /// subspace.
    pub fn free_coordinates(&self) -> Vec<usize> {
        self.free.iter().map(|c| c + 1).collect()
    }

    /// The point of the subspace with free coordinates `z`.
    pub fn lift(&self, z: u64) -> Result<F2Vector> {
        if z >> self.free.len() != 0 {
            return Err(Error::InvalidParam(format!("assignment {z:#x} too wide")));
        }
        F2Vector::new(self.base.arity(), self.system.lift(&self.free, z))
    }

    /// Rewrites a system over the base coordinates as a system over the
    /// quotient coordinates describing the same intersection.
    pub fn translate(&self, other: &AffineSystem) -> Result<Reduction> {
        if other.ambient() != self.base.arity() {
            return Err(Error::ArityMismatch {
                expected: self.base.arity(),
                found: other.ambient(),
            });
        }
        if self.free.is_empty() {
            return Err(Error::InvalidParam("restriction is a single point".into()));
        }
        let own = self.system.raw_rows();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (&beta, &tau) in other.raw_rows().iter().zip(other.rhs()) {
            let mut b = beta;
            let mut t = tau;
            for (&r, &s) in own.iter().zip(self.system.rhs()) {
                if b & (1 << r.trailing_zeros()) != 0 {
                    b ^= r;
                    t ^= s;
                }
            }
            let packed = self
                .free
                .iter()
                .enumerate()
                .fold(0u64, |m, (j, &c)| m | (((b >> c) & 1) << j));
            rows.push(packed);
            rhs.push(t);
        }
        Ok(rref_raw(self.free.len(), rows, rhs))
    }
}
