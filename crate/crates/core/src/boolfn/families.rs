use super::BooleanFunction;
use crate::error::{Error, Result};
use crate::f2linalg::{parity, F2Vector};

/// Weight-3 inputs on which the hemi-icosahedron function is 1 (bit masks of
/// the triples 123, 124, 136, 145, 156, 235, 246, 256, 345, 346).
pub(crate) const HI_TRIPLES: [u64; 10] = [
    0b000111, 0b001011, 0b100101, 0b011001, 0b110001, 0b010110, 0b101010, 0b110010, 0b011100,
    0b101100,
];

/// Named constructors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// 1 iff x₁ ≥ x₂ ≥ x₃ ≥ x₄ or x₁ ≤ x₂ ≤ x₃ ≤ x₄.
    Sort,
    /// 6-bit function determined by weight, except on ten weight-3 triples.
    HemiIcosahedron,
    /// `⟨α, x⟩ ⊕ b`.
    Parity { alpha: F2Vector, b: bool },
    And2,
    Or2,
    Maj3,
    /// 1 iff the three bits are not all equal.
    Nae3,
    Constant { value: bool, arity: usize },
    /// `HI∘k ∘ ∧`: every input of `HI∘k` replaced by an AND of two fresh bits.
    AppendixH { k: usize },
}

fn monotone(x: u64) -> bool {
    let bits: Vec<u64> = (0..4).map(|i| (x >> i) & 1).collect();
    bits.windows(2).all(|w| w[0] >= w[1]) || bits.windows(2).all(|w| w[0] <= w[1])
}

fn hemi_icosahedron(x: u64) -> bool {
    match x.count_ones() {
        1 | 2 | 6 => true,
        3 => HI_TRIPLES.contains(&x),
        _ => false,
    }
}

impl Family {
    pub fn build(&self) -> Result<BooleanFunction> {
        match self {
            Family::Sort => BooleanFunction::from_fn(4, monotone),
            Family::HemiIcosahedron => BooleanFunction::from_fn(6, hemi_icosahedron),
            Family::Parity { alpha, b } => {
                let a = alpha.bits();
                BooleanFunction::from_fn(alpha.width(), |x| parity(a & x) ^ b)
            }
            Family::And2 => BooleanFunction::from_fn(2, |x| x == 3),
            Family::Or2 => BooleanFunction::from_fn(2, |x| x != 0),
            Family::Maj3 => BooleanFunction::from_fn(3, |x| x.count_ones() >= 2),
            Family::Nae3 => BooleanFunction::from_fn(3, |x| x != 0 && x != 7),
            Family::Constant { value, arity } => BooleanFunction::constant(*arity, *value),
            Family::AppendixH { k } => {
                if *k == 0 {
                    return Err(Error::InvalidParam("appendix_h requires k ≥ 1".into()));
                }
                let outer_arity = 6usize.checked_pow(*k as u32).unwrap_or(usize::MAX);
                let arity = outer_arity.saturating_mul(2);
                if arity > BooleanFunction::MAX_ARITY {
                    return Err(Error::ArityTooLarge {
                        arity,
                        max: BooleanFunction::MAX_ARITY,
                    });
                }
                let outer = Family::HemiIcosahedron.build()?.power(*k)?;
                let and2 = Family::And2.build()?;
                outer.compose(&vec![and2; outer_arity])
            }
        }
    }
}
