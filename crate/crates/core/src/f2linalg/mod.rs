//! Linear algebra over F₂ on packed 64-bit words.
//!
//! Vectors are at most 64 coordinates wide; coordinate `i` (1-based) is bit
//! `i - 1` of the packed word.

mod enumerate;
mod matrix;
mod product;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use enumerate::{
    count_linear_parts, count_systems, enumerate_systems, gaussian_binomial, pivot_sets,
    LinearParts, SystemIter,
};
pub use matrix::F2Matrix;
pub use product::{product_canonicalize, ProductBasisPartition};

#[inline]
pub(crate) fn width_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

#[inline]
pub(crate) fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// A vector in F₂ⁿ, `1 ≤ n ≤ 64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct F2Vector {
    width: u8,
    bits: u64,
}

impl F2Vector {
    pub const MAX_WIDTH: usize = 64;

    pub fn new(width: usize, bits: u64) -> Result<Self> {
        if width == 0 || width > Self::MAX_WIDTH {
            return Err(Error::InvalidWidth(width));
        }
        if bits & !width_mask(width) != 0 {
            return Err(Error::BitsBeyondWidth { width });
        }
        Ok(Self {
            width: width as u8,
            bits,
        })
    }

    pub fn zero(width: usize) -> Result<Self> {
        Self::new(width, 0)
    }

    /// The standard basis vector eᵢ (1-based).
    pub fn unit(width: usize, coord: usize) -> Result<Self> {
        Self::from_coords(width, &[coord])
    }

    /// Indicator vector of a set of 1-based coordinates.
    pub fn from_coords(width: usize, coords: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &c in coords {
            if c == 0 || c > width {
                return Err(Error::CoordinateOutOfRange { coord: c, width });
            }
            bits ^= 1 << (c - 1);
        }
        Self::new(width, bits)
    }

    /// Parses a string of `0`/`1` characters, x₁ first.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(Error::InvalidParam(format!("not a bit string: {s:?}"))),
            }
        }
        Self::new(s.chars().count(), bits)
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Coordinate `coord` (1-based).
    pub fn get(&self, coord: usize) -> bool {
        coord >= 1 && coord <= self.width() && (self.bits >> (coord - 1)) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Inner product ⟨self, other⟩ over F₂.
    pub fn dot(&self, other: &F2Vector) -> Result<bool> {
        self.check_width(other.width())?;
        Ok(parity(self.bits & other.bits))
    }

    pub fn xor(&self, other: &F2Vector) -> Result<F2Vector> {
        self.check_width(other.width())?;
        Ok(F2Vector {
            width: self.width,
            bits: self.bits ^ other.bits,
        })
    }

    /// 1-based coordinates of the support, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.width()).filter(|i| (self.bits >> i) & 1 == 1).map(|i| i + 1).collect()
    }

    /// x₁ … xₙ as a `0`/`1` string.
    pub fn to_bit_string(&self) -> String {
        (0..self.width())
            .map(|i| if (self.bits >> i) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub(crate) fn check_width(&self, width: usize) -> Result<()> {
        if self.width() != width {
            return Err(Error::WidthMismatch {
                expected: width,
                found: self.width(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for F2Vector {
    /// Hexadecimal packing, coordinate 1 as the least significant bit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.bits)
    }
}

pub(crate) fn parse_hex_u64(s: &str) -> Option<u64> {
    if s.is_empty() || s.len() > 16 {
        return None;
    }
    u64::from_str_radix(s, 16).ok()
}

/// Outcome of row-reducing a system: the canonical system, or the
/// distinguished inconsistent result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Consistent(AffineSystem),
    Inconsistent,
}

impl Reduction {
    pub fn into_system(self) -> Result<AffineSystem> {
        match self {
            Reduction::Consistent(s) => Ok(s),
            Reduction::Inconsistent => Err(Error::Inconsistent),
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self, Reduction::Consistent(_))
    }
}

/// A consistent system ⟨x, αᵢ⟩ = σᵢ, i.e. a nonempty affine subspace of F₂ⁿ.
///
/// When `canonical` holds the rows are in reduced row echelon form: every
/// row is nonzero, its pivot is its lowest set coordinate, pivots strictly
/// increase and no row has a bit set in another row's pivot column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineSystem {
    ambient: usize,
    rows: Vec<u64>,
    rhs: Vec<bool>,
    canonical: bool,
}

/// Row-reduces `(rows | rhs)`. Returns the unique canonical form with the
/// same solution set, or [`Reduction::Inconsistent`].
pub fn rref(ambient: usize, rows: &[F2Vector], rhs: &[bool]) -> Result<Reduction> {
    if ambient == 0 || ambient > F2Vector::MAX_WIDTH {
        return Err(Error::InvalidWidth(ambient));
    }
    if rows.len() != rhs.len() {
        return Err(Error::InvalidParam(format!(
            "{} rows but {} right-hand sides",
            rows.len(),
            rhs.len()
        )));
    }
    for r in rows {
        r.check_width(ambient)?;
    }
    let raw: Vec<u64> = rows.iter().map(|r| r.bits()).collect();
    Ok(rref_raw(ambient, raw, rhs.to_vec()))
}

pub(crate) fn rref_raw(ambient: usize, mut rows: Vec<u64>, mut rhs: Vec<bool>) -> Reduction {
    let mut rank = 0;
    for col in 0..ambient {
        let bit = 1u64 << col;
        let Some(pos) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pos);
        rhs.swap(rank, pos);
        let (prow, prhs) = (rows[rank], rhs[rank]);
        for r in 0..rows.len() {
            if r != rank && rows[r] & bit != 0 {
                rows[r] ^= prow;
                rhs[r] ^= prhs;
            }
        }
        rank += 1;
    }
    if rhs[rank..].iter().any(|&b| b) {
        return Reduction::Inconsistent;
    }
    rows.truncate(rank);
    rhs.truncate(rank);
    Reduction::Consistent(AffineSystem {
        ambient,
        rows,
        rhs,
        canonical: true,
    })
}

fn is_rref(rows: &[u64]) -> bool {
    let mut prev: Option<u32> = None;
    let pivot_mask: u64 = rows.iter().fold(0, |m, &r| m | (r & r.wrapping_neg()));
    for &r in rows {
        if r == 0 {
            return false;
        }
        let p = r.trailing_zeros();
        if prev.is_some_and(|q| q >= p) {
            return false;
        }
        prev = Some(p);
        if (r & pivot_mask) != (1 << p) {
            return false;
        }
    }
    true
}

impl AffineSystem {
    /// The empty system: all of F₂ⁿ.
    pub fn full(ambient: usize) -> Result<Self> {
        if ambient == 0 || ambient > F2Vector::MAX_WIDTH {
            return Err(Error::InvalidWidth(ambient));
        }
        Ok(Self {
            ambient,
            rows: Vec::new(),
            rhs: Vec::new(),
            canonical: true,
        })
    }

    /// A system kept exactly as given. Fails if inconsistent. The
    /// `canonical` flag is set iff the rows already are in canonical form.
    pub fn from_rows(ambient: usize, rows: &[F2Vector], rhs: &[bool]) -> Result<Self> {
        rref(ambient, rows, rhs)?.into_system()?;
        let raw: Vec<u64> = rows.iter().map(|r| r.bits()).collect();
        let canonical = is_rref(&raw);
        Ok(Self {
            ambient,
            rows: raw,
            rhs: rhs.to_vec(),
            canonical,
        })
    }

    pub(crate) fn from_raw_unchecked(ambient: usize, rows: Vec<u64>, rhs: Vec<bool>) -> Self {
        let canonical = is_rref(&rows);
        Self {
            ambient,
            rows,
            rhs,
            canonical,
        }
    }

    /// Canonical systems built by the enumerators, already in RREF.
    pub(crate) fn canonical_unchecked(ambient: usize, rows: Vec<u64>, rhs: Vec<bool>) -> Self {
        debug_assert!(is_rref(&rows));
        Self {
            ambient,
            rows,
            rhs,
            canonical: true,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Number of constraints stored. Equals the codimension when canonical.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn codim(&self) -> usize {
        if self.canonical {
            self.rows.len()
        } else {
            self.canonicalize().len()
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn rows(&self) -> Vec<F2Vector> {
        self.rows
            .iter()
            .map(|&b| F2Vector {
                width: self.ambient as u8,
                bits: b,
            })
            .collect()
    }

    pub fn rhs(&self) -> &[bool] {
        &self.rhs
    }

    pub(crate) fn raw_rows(&self) -> &[u64] {
        &self.rows
    }

    /// The canonical form of this (consistent) system.
    pub fn canonicalize(&self) -> AffineSystem {
        if self.canonical {
            return self.clone();
        }
        match rref_raw(self.ambient, self.rows.clone(), self.rhs.clone()) {
            Reduction::Consistent(s) => s,
            Reduction::Inconsistent => unreachable!("AffineSystem is consistent by construction"),
        }
    }

    /// Adds constraints and reduces.
    pub fn merge(&self, other: &AffineSystem) -> Result<Reduction> {
        if other.ambient != self.ambient {
            return Err(Error::WidthMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        let mut rhs = self.rhs.clone();
        rhs.extend_from_slice(&other.rhs);
        Ok(rref_raw(self.ambient, rows, rhs))
    }

    pub fn with_constraint(&self, row: &F2Vector, value: bool) -> Result<Reduction> {
        row.check_width(self.ambient)?;
        let mut rows = self.rows.clone();
        rows.push(row.bits());
        let mut rhs = self.rhs.clone();
        rhs.push(value);
        Ok(rref_raw(self.ambient, rows, rhs))
    }

    /// Whether `x` satisfies every constraint.
    pub fn contains(&self, x: &F2Vector) -> Result<bool> {
        x.check_width(self.ambient)?;
        Ok(self.contains_raw(x.bits()))
    }

    #[inline]
    pub(crate) fn contains_raw(&self, x: u64) -> bool {
        self.rows
            .iter()
            .zip(&self.rhs)
            .all(|(&r, &s)| parity(r & x) == s)
    }

    /// Coordinates `i` for which some point `x` of the subspace has
    /// `x + eᵢ` outside it; the union of the row supports.
    pub fn relevant_coordinates(&self) -> BTreeSet<usize> {
        let mask = self.rows.iter().fold(0u64, |m, &r| m | r);
        (0..self.ambient)
            .filter(|i| (mask >> i) & 1 == 1)
            .map(|i| i + 1)
            .collect()
    }

    /// 0-based pivot columns of the canonical form.
    pub(crate) fn pivots(&self) -> Vec<usize> {
        debug_assert!(self.canonical);
        self.rows.iter().map(|r| r.trailing_zeros() as usize).collect()
    }

    /// 0-based non-pivot columns of the canonical form, ascending.
    pub(crate) fn free_columns(&self) -> Vec<usize> {
        let pivots: u64 = self.pivots().iter().fold(0, |m, &p| m | (1 << p));
        (0..self.ambient).filter(|c| (pivots >> c) & 1 == 0).collect()
    }

    /// Lifts an assignment of the free columns (bit `j` = j-th free column)
    /// to the unique point of the subspace with those free coordinates.
    pub(crate) fn lift(&self, free: &[usize], z: u64) -> u64 {
        debug_assert!(self.canonical);
        let mut x = 0u64;
        for (j, &c) in free.iter().enumerate() {
            x |= ((z >> j) & 1) << c;
        }
        let mut out = x;
        for (&r, &s) in self.rows.iter().zip(&self.rhs) {
            let p = r.trailing_zeros();
            if parity(r & x) ^ s {
                out |= 1 << p;
            }
        }
        out
    }

    /// All points, ascending by free assignment. Exponential in the
    /// dimension; intended for small ambient spaces.
    pub fn points(&self) -> Vec<F2Vector> {
        let canon = self.canonicalize();
        let free = canon.free_columns();
        (0..1u64 << free.len())
            .map(|z| F2Vector {
                width: self.ambient as u8,
                bits: canon.lift(&free, z),
            })
            .collect()
    }

    /// Shifts the system into coordinates `offset+1 ..= offset+ambient` of a
    /// larger space.
    pub(crate) fn embed(&self, ambient: usize, offset: usize) -> (Vec<u64>, Vec<bool>) {
        debug_assert!(offset + self.ambient <= ambient);
        (
            self.rows.iter().map(|r| r << offset).collect(),
            self.rhs.clone(),
        )
    }
}

impl fmt::Display for AffineSystem {
    /// `n=<int> d=<int> rows=<hex,…> rhs=<bits>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| format!("{r:x}")).collect();
        let rhs: String = self.rhs.iter().map(|&b| if b { '1' } else { '0' }).collect();
        write!(
            f,
            "n={} d={} rows={} rhs={}",
            self.ambient,
            self.rows.len(),
            rows.join(","),
            rhs
        )
    }
}

impl FromStr for AffineSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_system_line(s, 1)
    }
}

impl Serialize for AffineSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AffineSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Splits `line` into `key=value` fields, reporting the 1-based column of
/// each field.
pub(crate) fn fields(line: &str) -> Vec<(usize, &str, &str)> {
    let mut out = Vec::new();
    let mut pos = 0;
    for tok in line.split(' ') {
        if !tok.is_empty() {
            let (k, v) = tok.split_once('=').unwrap_or((tok, ""));
            out.push((pos + 1, k, v));
        }
        pos += tok.len() + 1;
    }
    out
}

pub(crate) fn expect_field<'a>(
    f: &[(usize, &'a str, &'a str)],
    idx: usize,
    key: &str,
    line: usize,
) -> Result<(usize, &'a str)> {
    match f.get(idx) {
        Some(&(col, k, v)) if k == key => Ok((col, v)),
        Some(&(col, k, _)) => Err(Error::parse(line, col, format!("expected `{key}=`, found `{k}`"))),
        None => Err(Error::parse(line, 1, format!("missing field `{key}=`"))),
    }
}

pub(crate) fn parse_system_line(line: &str, lineno: usize) -> Result<AffineSystem> {
    let f = fields(line.trim_end());
    let (col, n) = expect_field(&f, 0, "n", lineno)?;
    let n: usize = n
        .parse()
        .ok()
        .filter(|&n| (1..=F2Vector::MAX_WIDTH).contains(&n))
        .ok_or_else(|| Error::parse(lineno, col + 2, format!("bad ambient dimension `{n}`")))?;
    let (col, d) = expect_field(&f, 1, "d", lineno)?;
    let d: usize = d
        .parse()
        .map_err(|_| Error::parse(lineno, col + 2, format!("bad row count `{d}`")))?;
    let (col, rows_s) = expect_field(&f, 2, "rows", lineno)?;
    let mut rows = Vec::new();
    if !rows_s.is_empty() {
        let mut c = col + 5;
        for part in rows_s.split(',') {
            let v = parse_hex_u64(part)
                .ok_or_else(|| Error::parse(lineno, c, format!("bad hex row `{part}`")))?;
            let v = F2Vector::new(n, v).map_err(|e| Error::parse(lineno, c, e.to_string()))?;
            rows.push(v);
            c += part.len() + 1;
        }
    }
    let (col, rhs_s) = expect_field(&f, 3, "rhs", lineno)?;
    let mut rhs = Vec::new();
    for (i, ch) in rhs_s.chars().enumerate() {
        match ch {
            '0' => rhs.push(false),
            '1' => rhs.push(true),
            _ => return Err(Error::parse(lineno, col + 4 + i, format!("bad rhs bit `{ch}`"))),
        }
    }
    if let Some(&(col, k, _)) = f.get(4) {
        return Err(Error::parse(lineno, col, format!("unexpected field `{k}`")));
    }
    if rows.len() != d || rhs.len() != d {
        return Err(Error::parse(
            lineno,
            1,
            format!("d={d} but {} rows and {} rhs bits", rows.len(), rhs.len()),
        ));
    }
    AffineSystem::from_rows(n, &rows, &rhs).map_err(|e| Error::parse(lineno, 1, e.to_string()))
}
