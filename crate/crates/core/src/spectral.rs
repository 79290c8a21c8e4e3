//! Exact Fourier analysis in the ±1 convention (0 ↦ +1, 1 ↦ −1).
//!
//! Coefficients are stored scaled: `c(α) = 2ⁿ · f̂(α) = Σₓ (−1)^(f(x) + ⟨α,x⟩)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::f2linalg::{expect_field, fields, parse_hex_u64, F2Vector};

/// Exact dyadic rational `num / 2^exp`, normalized so `num` is odd unless
/// `exp = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    num: i64,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: i64, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        if num == 0 {
            d.exp = 0;
        }
        while d.exp > 0 && d.num % 2 == 0 {
            d.num /= 2;
            d.exp -= 1;
        }
        d
    }

    pub fn integer(v: i64) -> Self {
        Dyadic { num: v, exp: 0 }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn square(&self) -> Dyadic {
        Dyadic::new(self.num * self.num, self.exp * 2)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / 2f64.powi(self.exp as i32)
    }

    fn cross(&self, other: &Dyadic) -> (i128, i128) {
        let e = self.exp.max(other.exp);
        (
            (self.num as i128) << (e - self.exp),
            (other.num as i128) << (e - other.exp),
        )
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.cross(other);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, 1u64 << self.exp)
        }
    }
}

/// Nonzero scaled Fourier coefficients of a Boolean function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierSpectrum {
    arity: usize,
    coeffs: BTreeMap<u64, i64>,
}

/// Result of [`FourierSpectrum::granularity_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Granularity {
    pub degree: usize,
    pub ok: bool,
}

/// Result of [`FourierSpectrum::shift_overlap`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftOverlap {
    /// Best shift over all β (always β = 0, overlap = sparsity).
    pub beta: u64,
    pub overlap: usize,
    /// Best shift with β ≠ 0, smallest packed β on ties.
    pub best_nonzero: Option<(u64, usize)>,
}

/// In-place fast Walsh–Hadamard transform.
pub(crate) fn fwht(a: &mut [i64]) {
    let mut h = 1;
    while h < a.len() {
        for chunk in a.chunks_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*x, *y);
                *x = u + v;
                *y = u - v;
            }
        }
        h *= 2;
    }
}

/// The ±1 table of `f`.
fn signs(f: &BooleanFunction) -> Vec<i64> {
    (0..f.table_len()).map(|x| if f.get(x) { -1 } else { 1 }).collect()
}

impl FourierSpectrum {
    /// Exact spectrum of `f`.
    pub fn of(f: &BooleanFunction) -> Self {
        let mut a = signs(f);
        fwht(&mut a);
        let coeffs = a
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(alpha, c)| (alpha as u64, c))
            .collect();
        FourierSpectrum {
            arity: f.arity(),
            coeffs,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Nonzero scaled coefficients, ascending in α.
    pub fn scaled(&self) -> &BTreeMap<u64, i64> {
        &self.coeffs
    }

    /// `f̂(α)`.
    pub fn coefficient(&self, alpha: u64) -> Dyadic {
        Dyadic::new(self.coeffs.get(&alpha).copied().unwrap_or(0), self.arity as u32)
    }

    /// Reconstructs the function; fails if the coefficients do not describe a
    /// Boolean function.
    pub fn inverse(&self) -> Result<BooleanFunction> {
        if self.arity > BooleanFunction::MAX_ARITY {
            return Err(Error::ArityTooLarge {
                arity: self.arity,
                max: BooleanFunction::MAX_ARITY,
            });
        }
        let mut a = vec![0i64; 1 << self.arity];
        for (&alpha, &c) in &self.coeffs {
            a[alpha as usize] = c;
        }
        fwht(&mut a);
        let scale = 1i64 << self.arity;
        if let Some(x) = a.iter().position(|&v| v != scale && v != -scale) {
            return Err(Error::InvalidParam(format!(
                "spectrum is not Boolean at x = {x:#x}"
            )));
        }
        BooleanFunction::from_fn(self.arity, |x| a[x as usize] < 0)
    }

    pub fn sparsity(&self) -> usize {
        self.coeffs.len()
    }

    /// `Σ |f̂(α)|`.
    pub fn spectral_l1(&self) -> Dyadic {
        let total: i64 = self.coeffs.values().map(|c| c.abs()).sum();
        Dyadic::new(total, self.arity as u32)
    }

    /// Largest weight in the support (0 for constants).
    pub fn degree(&self) -> usize {
        self.coeffs
            .keys()
            .map(|a| a.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// `Σ c(α)²`, which equals `4ⁿ` for a Boolean function.
    pub fn parseval_sum(&self) -> u128 {
        self.coeffs.values().map(|&c| (c as i128 * c as i128) as u128).sum()
    }

    /// Degree `d`, and whether every `f̂(α)` is a multiple of `2^(−d)` and
    /// the sparsity is at most `4^d`.
    pub fn granularity_check(&self) -> Granularity {
        let degree = self.degree();
        let step = 1i64 << (self.arity - degree.min(self.arity));
        let multiples = self.coeffs.values().all(|c| c % step == 0);
        let bound = 1u128 << (2 * degree).min(127);
        Granularity {
            degree,
            ok: multiples && (self.sparsity() as u128) <= bound,
        }
    }

    /// `|supp ∩ (supp + β)|`.
    pub fn overlap_at(&self, beta: u64) -> usize {
        self.coeffs
            .keys()
            .filter(|&&a| self.coeffs.contains_key(&(a ^ beta)))
            .count()
    }

    /// Exhaustive scan over all `2ⁿ` shifts.
    pub fn shift_overlap(&self) -> Result<ShiftOverlap> {
        const MAX_SHIFT_ARITY: usize = 20;
        if self.arity > MAX_SHIFT_ARITY {
            return Err(Error::ArityTooLarge {
                arity: self.arity,
                max: MAX_SHIFT_ARITY,
            });
        }
        let mut member = vec![false; 1 << self.arity];
        for &a in self.coeffs.keys() {
            member[a as usize] = true;
        }
        let support: Vec<u64> = self.coeffs.keys().copied().collect();
        let best_nonzero = (1u64..1 << self.arity)
            .into_par_iter()
            .map(|beta| {
                let count = support
                    .iter()
                    .filter(|&&a| member[(a ^ beta) as usize])
                    .count();
                (beta, count)
            })
            // larger overlap first, then smaller β
            .reduce_with(|a, b| match a.1.cmp(&b.1) {
                Ordering::Greater => a,
                Ordering::Less => b,
                Ordering::Equal => {
                    if a.0 <= b.0 {
                        a
                    } else {
                        b
                    }
                }
            });
        Ok(ShiftOverlap {
            beta: 0,
            overlap: self.sparsity(),
            best_nonzero,
        })
    }

    /// `Σᵢ f̂({i})`.
    pub fn linear_fourier_sum(&self) -> Dyadic {
        let total: i64 = (0..self.arity)
            .map(|i| self.coeffs.get(&(1u64 << i)).copied().unwrap_or(0))
            .sum();
        Dyadic::new(total, self.arity as u32)
    }

    /// Dump lines `alpha=<hex> c=<int> scale=2^-<n>`, ascending in α.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (alpha, c) in &self.coeffs {
            out.push_str(&format!("alpha={alpha:x} c={c} scale=2^-{}\n", self.arity));
        }
        out
    }

    /// Parses the output of [`FourierSpectrum::dump`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut arity: Option<usize> = None;
        let mut coeffs = BTreeMap::new();
        let mut last: Option<u64> = None;
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let f = fields(line.trim_end());
            let (col, a) = expect_field(&f, 0, "alpha", lineno)?;
            let alpha = parse_hex_u64(a)
                .ok_or_else(|| Error::parse(lineno, col + 6, format!("bad hex `{a}`")))?;
            let (col, c) = expect_field(&f, 1, "c", lineno)?;
            let c: i64 = c
                .parse()
                .ok()
                .filter(|&c| c != 0)
                .ok_or_else(|| Error::parse(lineno, col + 2, format!("bad coefficient `{c}`")))?;
            let (col, s) = expect_field(&f, 2, "scale", lineno)?;
            let n: usize = s
                .strip_prefix("2^-")
                .and_then(|n| n.parse().ok())
                .filter(|&n| n <= BooleanFunction::MAX_ARITY)
                .ok_or_else(|| Error::parse(lineno, col + 6, format!("bad scale `{s}`")))?;
            match arity {
                Some(m) if m != n => {
                    return Err(Error::parse(lineno, col + 6, "scale differs from earlier lines"))
                }
                _ => arity = Some(n),
            }
            if alpha >> n != 0 {
                return Err(Error::parse(lineno, col, "alpha wider than the arity"));
            }
            if last.is_some_and(|l| l >= alpha) {
                return Err(Error::parse(lineno, 1, "lines not sorted by alpha"));
            }
            last = Some(alpha);
            coeffs.insert(alpha, c);
        }
        let arity = arity.ok_or_else(|| Error::parse(1, 1, "empty spectrum"))?;
        Ok(FourierSpectrum { arity, coeffs })
    }

    /// β as a vector, for reporting.
    pub fn shift_vector(&self, beta: u64) -> Result<F2Vector> {
        F2Vector::new(self.arity, beta)
    }
}

impl fmt::Display for FourierSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::Family;
    use proptest::prelude::*;

    /// Direct O(4ⁿ) evaluation of the defining sum.
    fn naive_coefficient(f: &BooleanFunction, alpha: u64) -> i64 {
        (0..f.table_len())
            .map(|x| {
                let e = f.get(x) as u32 + (alpha & x).count_ones();
                if e % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
            .sum()
    }

    #[test]
    fn sort_spectrum() {
        let s = FourierSpectrum::of(&Family::Sort.build().unwrap());
        // 1 ↦ −1 on sorted inputs, so x₁x₄ is the odd sign out
        let expected: BTreeMap<u64, i64> =
            [(0b0011, -8), (0b0110, -8), (0b1100, -8), (0b1001, 8)].into_iter().collect();
        assert_eq!(s.scaled(), &expected);
        assert_eq!(s.coefficient(0b1001), Dyadic::new(1, 1));
        assert_eq!(s.sparsity(), 4);
        assert_eq!(s.spectral_l1(), Dyadic::integer(2));
        assert_eq!(s.degree(), 2);
        assert_eq!(s.linear_fourier_sum(), Dyadic::integer(0));
    }

    #[test]
    fn hi_spectrum() {
        let s = FourierSpectrum::of(&Family::HemiIcosahedron.build().unwrap());
        assert_eq!(s.sparsity(), 16);
        assert_eq!(s.degree(), 3);
        for (&alpha, &c) in s.scaled() {
            assert_eq!(c.abs(), 16);
            assert_eq!(c < 0, alpha.count_ones() == 1);
        }
        assert_eq!(s.linear_fourier_sum(), Dyadic::new(-3, 1));
        assert_eq!(s.linear_fourier_sum().to_string(), "-3/2");
        assert_eq!(s.granularity_check(), Granularity { degree: 3, ok: true });
    }

    #[test]
    fn constants_and_parities() {
        let zero = Family::Constant { value: false, arity: 3 }.build().unwrap();
        let s = FourierSpectrum::of(&zero);
        assert_eq!(s.scaled().len(), 1);
        assert_eq!(s.coefficient(0), Dyadic::integer(1));
        assert_eq!(s.linear_fourier_sum(), Dyadic::integer(0));
        let alpha = F2Vector::from_bit_str("1011").unwrap();
        let p = Family::Parity { alpha, b: false }.build().unwrap();
        let s = FourierSpectrum::of(&p);
        assert_eq!(s.granularity_check(), Granularity { degree: 3, ok: true });
        assert_eq!(s.sparsity(), 1);
        assert_eq!(s.shift_overlap().unwrap().best_nonzero.unwrap().1, 0);
    }

    #[test]
    fn shift_overlap_sort() {
        let s = FourierSpectrum::of(&Family::Sort.build().unwrap());
        let r = s.shift_overlap().unwrap();
        assert_eq!((r.beta, r.overlap), (0, 4));
        // brute force over the 16 shifts
        let brute = (1u64..16)
            .map(|b| (b, s.overlap_at(b)))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .unwrap();
        assert_eq!(brute, (0b0101, 4));
        assert_eq!(r.best_nonzero, Some(brute));
    }

    #[test]
    fn appendix_h_granularity() {
        let s = FourierSpectrum::of(&Family::AppendixH { k: 1 }.build().unwrap());
        let g = s.granularity_check();
        assert_eq!(g, Granularity { degree: 6, ok: true });
        assert!(s.sparsity() <= 4096);
    }

    #[test]
    fn sort_power_equal_weights() {
        let sort = Family::Sort.build().unwrap();
        for (k, sparsity) in [(1, 4), (2, 64)] {
            let s = FourierSpectrum::of(&sort.power(k).unwrap());
            assert_eq!(s.sparsity(), sparsity);
            assert_eq!(s.spectral_l1().square(), Dyadic::integer(sparsity as i64));
        }
    }

    #[test]
    fn dyadic_normalization() {
        assert_eq!(Dyadic::new(8, 4), Dyadic::new(1, 1));
        assert_eq!(Dyadic::new(0, 9), Dyadic::integer(0));
        assert!(Dyadic::new(3, 2) < Dyadic::integer(1));
        assert_eq!(Dyadic::new(-6, 2).to_string(), "-3/2");
    }

    #[test]
    fn dump_format() {
        let s = FourierSpectrum::of(&Family::Sort.build().unwrap());
        assert_eq!(
            s.dump(),
            "alpha=3 c=-8 scale=2^-4\nalpha=6 c=-8 scale=2^-4\nalpha=9 c=8 scale=2^-4\nalpha=c c=-8 scale=2^-4\n"
        );
        assert_eq!(FourierSpectrum::parse(&s.dump()).unwrap(), s);
        assert!(FourierSpectrum::parse("alpha=6 c=8 scale=2^-4\nalpha=3 c=8 scale=2^-4\n").is_err());
        assert!(matches!(
            FourierSpectrum::parse("alpha=3 c=x scale=2^-4"),
            Err(Error::Parse { column: 11, .. })
        ));
    }

    fn arb_function() -> impl Strategy<Value = BooleanFunction> {
        (1usize..=8).prop_flat_map(|n| {
            proptest::collection::vec(any::<u64>(), if n <= 6 { 1 } else { 1 << (n - 6) })
                .prop_map(move |mut w| {
                    if n < 6 {
                        w[0] &= (1u64 << (1 << n)) - 1;
                    }
                    BooleanFunction::from_words(n, w).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn parseval_and_inverse(f in arb_function()) {
            let s = FourierSpectrum::of(&f);
            prop_assert_eq!(s.parseval_sum(), 1u128 << (2 * f.arity()));
            prop_assert_eq!(s.inverse().unwrap(), f.clone());
            prop_assert!(s.spectral_l1() <= Dyadic::integer(s.sparsity() as i64));
            prop_assert!(s.granularity_check().ok);
            let parsed = FourierSpectrum::parse(&s.dump()).unwrap();
            prop_assert_eq!(parsed, s);
        }

        #[test]
        fn fast_transform_matches_definition(f in arb_function(), alpha in any::<u64>()) {
            let alpha = alpha & ((1u64 << f.arity()) - 1);
            let s = FourierSpectrum::of(&f);
            let c = s.scaled().get(&alpha).copied().unwrap_or(0);
            prop_assert_eq!(c, naive_coefficient(&f, alpha));
        }
    }
}
