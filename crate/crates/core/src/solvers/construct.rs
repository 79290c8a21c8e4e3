//! Explicit certificate constructions for compositions, affine
//! linearizations of small functions, and the composition-gap table.

use serde::{Deserialize, Serialize};

use super::{
    c_min, cert_at, pc_min, pc_min_value, pcert_at, Budget, CubeCertificate, Measured,
    ParitySearch,
};
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::f2linalg::{enumerate_systems, parity, rref_raw, AffineSystem, F2Vector, Reduction};

/// Compositions up to this arity are checked by restriction.
const VERIFY_ARITY: usize = 16;
/// Largest outer arity for which every constant subspace is enumerated.
const MAX_OUTER_ARITY: usize = 6;
/// Largest arity accepted by [`linearize`].
const MAX_LINEARIZE_ARITY: usize = 8;

/// A subspace on which a function agrees with an affine form
/// `a₀ ⊕ a₁x₁ ⊕ … ⊕ aₙxₙ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linearization {
    pub system: AffineSystem,
    /// `a₀, a₁, …, aₙ`.
    pub coeffs: Vec<bool>,
}

impl Linearization {
    /// `(a₀, packed a₁…aₙ)`.
    fn form(&self) -> (bool, u64) {
        let a = self.coeffs[1..]
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &b)| m | ((b as u64) << i));
        (self.coeffs[0], a)
    }
}

fn coeffs_of(n: usize, a0: bool, a: u64) -> Vec<bool> {
    std::iter::once(a0).chain((0..n).map(|i| (a >> i) & 1 == 1)).collect()
}

/// The first system of codimension ≤ `max_codim`, in enumeration order, on
/// which `g` is affine; among the equivalent forms on it, the one with the
/// smallest code `a₀ + 2a₁ + 4a₂ + …`.
pub fn linearize(g: &BooleanFunction, max_codim: usize) -> Result<Option<Linearization>> {
    let n = g.arity();
    if n == 0 || n > MAX_LINEARIZE_ARITY {
        return Err(Error::ArityTooLarge { arity: n, max: MAX_LINEARIZE_ARITY });
    }
    for d in 0..=max_codim.min(n) {
        for system in enumerate_systems(n, d)? {
            let r = g.restrict(&system)?;
            let Some((alpha, b)) = r.quotient().as_parity() else {
                continue;
            };
            let free = system.free_columns();
            let a = free
                .iter()
                .enumerate()
                .filter(|&(j, _)| (alpha >> j) & 1 == 1)
                .fold(0u64, |m, (_, &c)| m | (1 << c));
            let rows = system.raw_rows();
            let (a0, a) = (0..1u64 << d)
                .map(|mask| {
                    (0..d).filter(|i| (mask >> i) & 1 == 1).fold((b, a), |(a0, a), i| {
                        (a0 ^ system.rhs()[i], a ^ rows[i])
                    })
                })
                .min_by_key(|&(a0, a)| (a << 1) | a0 as u64)
                .expect("at least the empty combination");
            return Ok(Some(Linearization {
                coeffs: coeffs_of(n, a0, a),
                system,
            }));
        }
    }
    Ok(None)
}

/// A codimension-≤1 linearization of a 3-bit function, which always exists.
pub fn affine_linearization(g: &BooleanFunction) -> Result<Linearization> {
    if g.arity() != 3 {
        return Err(Error::ArityMismatch { expected: 3, found: g.arity() });
    }
    linearize(g, 1)?.ok_or_else(|| Error::Degenerate("no codimension-1 linearization".into()))
}

/// Checks that `lin` is consistent with `g` at every point of its system.
pub fn validate_linearization(g: &BooleanFunction, lin: &Linearization) -> Result<()> {
    let n = g.arity();
    if lin.system.ambient() != n || lin.coeffs.len() != n + 1 {
        return Err(Error::ArityMismatch {
            expected: n,
            found: lin.system.ambient(),
        });
    }
    let (a0, a) = lin.form();
    match (0..g.table_len()).find(|&x| lin.system.contains_raw(x) && g.get(x) != (a0 ^ parity(a & x))) {
        Some(x) => Err(Error::InvalidParam(format!("form disagrees with g at {x:#x}"))),
        None => Ok(()),
    }
}

/// A parity certificate for `f∘(g, …, g)` assembled block by block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeCertificate {
    /// The certificate over the composed input space.
    pub system: AffineSystem,
    pub value: bool,
    /// The constant subspace of the outer function it was built from.
    pub outer: AffineSystem,
    /// Whether the composed function was checked to be constant on `system`.
    pub verified: bool,
}

impl CompositeCertificate {
    pub fn codim(&self) -> usize {
        self.system.codim()
    }
}

fn verify(
    f: &BooleanFunction,
    g: &BooleanFunction,
    system: &AffineSystem,
    value: bool,
) -> Result<bool> {
    if f.arity() * g.arity() > VERIFY_ARITY {
        return Ok(false);
    }
    let composed = f.compose(&vec![g.clone(); f.arity()])?;
    match composed.restrict(system)?.quotient().constant_value() {
        Some(v) if v == value => Ok(true),
        _ => Err(Error::InvalidParam("constructed certificate is not constant".into())),
    }
}

fn exact_witness(search: ParitySearch, what: &str) -> Result<AffineSystem> {
    match search.witness {
        Some(w) => Ok(w.system),
        None => Err(Error::Budget(format!("{what}: {}", search.measured))),
    }
}

/// The trivial certificate: a minimum subcube certificate `{x_i = b_i}` of
/// `f` (lexicographically first), with a minimum parity certificate of `g`
/// forcing `b_i` in each fixed block. With a target `y`, the subcube and
/// the inner certificates are taken through `y` and its blocks.
pub fn trivial_certificate(
    f: &BooleanFunction,
    g: &BooleanFunction,
    budget: &Budget,
    target: Option<&F2Vector>,
) -> Result<CompositeCertificate> {
    let (n, m) = (f.arity(), g.arity());
    let total = n * m;
    let block = |y: u64, i: usize| (y >> (i * m)) & ((1u64 << m) - 1);
    let cube: CubeCertificate = match target {
        None => c_min(f)?,
        Some(y) => {
            y.check_width(total)?;
            let z = (0..n).fold(0u64, |z, i| z | ((g.get(block(y.bits(), i)) as u64) << i));
            cert_at(f, &F2Vector::new(n, z)?)?
        }
    };
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (&c, &b) in cube.coords.iter().zip(&cube.values) {
        let i = c - 1;
        let search = match target {
            None => pc_min_value(g, b, budget)?,
            Some(y) => pcert_at(g, &F2Vector::new(m, block(y.bits(), i))?, budget)?,
        };
        let inner = exact_witness(search, &format!("inner certificate for block {c}"))?;
        let (r, s) = inner.embed(total, i * m);
        rows.extend(r);
        rhs.extend(s);
    }
    let system = if total == 0 {
        AffineSystem::full(1)?
    } else {
        rref_raw(total, rows, rhs).into_system()?
    };
    let verified = verify(f, g, &system, cube.value)?;
    Ok(CompositeCertificate {
        system,
        value: cube.value,
        outer: cube.to_system(n)?,
        verified,
    })
}

/// A certificate that composes affine structure instead of subcubes: take
/// a constant subspace `H` of `f`, restrict each block that `H` touches to
/// a subspace where `g` is affine, and translate the rows of `H` through
/// those affine forms. The outer subspace minimizing
/// `codim(H) + L·|relevant(H)|` is tried first, `L` being the cheapest
/// linearization codimension of `g`.
pub fn linearized_certificate(
    f: &BooleanFunction,
    g: &BooleanFunction,
) -> Result<CompositeCertificate> {
    let (n, m) = (f.arity(), g.arity());
    if n == 0 || n > MAX_OUTER_ARITY {
        return Err(Error::ArityTooLarge { arity: n, max: MAX_OUTER_ARITY });
    }
    let lin = linearize(g, m)?.expect("a point is an affine subspace");
    let cost_per_block = lin.system.codim();
    let (a0, a) = lin.form();
    let total = n * m;

    let mut candidates: Vec<(usize, usize, AffineSystem, bool)> = Vec::new();
    for d in 0..=n {
        for s in enumerate_systems(n, d)? {
            if let Some(v) = f.restrict(&s)?.quotient().constant_value() {
                let cost = d + cost_per_block * s.relevant_coordinates().len();
                candidates.push((cost, candidates.len(), s, v));
            }
        }
    }
    candidates.sort_by_key(|c| (c.0, c.1));

    for (_, _, outer, value) in candidates {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let blocks = outer.relevant_coordinates();
        for &c in &blocks {
            let (r, s) = lin.system.embed(total, (c - 1) * m);
            rows.extend(r);
            rhs.extend(s);
        }
        for (&row, &s) in outer.raw_rows().iter().zip(outer.rhs()) {
            let mut lifted = 0u64;
            let mut bit = s;
            for i in (0..n).filter(|i| (row >> i) & 1 == 1) {
                lifted ^= a << (i * m);
                bit ^= a0;
            }
            rows.push(lifted);
            rhs.push(bit);
        }
        let Reduction::Consistent(system) = rref_raw(total, rows, rhs) else {
            continue;
        };
        let verified = verify(f, g, &system, value)?;
        return Ok(CompositeCertificate {
            system,
            value,
            outer,
            verified,
        });
    }
    Err(Error::Degenerate("no outer subspace survives the translation".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapStatus {
    Pass,
    Fail,
    Skipped,
    OutOfBudget,
    ReportOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapCheck {
    pub name: String,
    pub hypotheses: String,
    pub status: GapStatus,
    pub detail: String,
}

/// One row of the composition table for `f∘k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapRow {
    pub k: usize,
    /// Arity of `f∘k`.
    pub arity: usize,
    pub is_parity: bool,
    pub forcing_literal: bool,
    pub f_zero: bool,
    pub c_min: usize,
    pub cert_zero: usize,
    pub pc_min: Measured,
    pub pcert_zero: Measured,
    pub composed_pc_min: Measured,
    pub composed_pcert_zero: Measured,
    /// `Σ_{j=1}^{k−1} C_min^j + C⊕_min`.
    pub composition_bound: Option<usize>,
    /// `Σ_{j=1}^{k−1} C[f,0]^j + pCert[f,0]`.
    pub zero_rhs: Option<usize>,
    pub trivial_upper: Option<usize>,
    pub linearized_upper: Option<usize>,
    pub checks: Vec<GapCheck>,
}

/// Whether some literal `x_i = b` forces `f = b`.
pub(crate) fn forcing_literal(f: &BooleanFunction) -> Option<(usize, bool)> {
    (0..f.arity())
        .flat_map(|i| [(i, false), (i, true)])
        .find(|&(i, b)| f.fix(i, b).constant_value() == Some(b))
        .map(|(i, b)| (i + 1, b))
}

fn geometric(c: usize, k: usize) -> Option<usize> {
    (1..k).try_fold(0usize, |acc, j| acc.checked_add(c.checked_pow(j as u32)?))
}

/// Compares a measured value against a lower bound.
fn at_least(measured: &Measured, bound: usize) -> (GapStatus, String) {
    let status = match measured {
        Measured::Exact { value } if *value >= bound => GapStatus::Pass,
        Measured::Exact { .. } => GapStatus::Fail,
        m if m.lower() >= bound => GapStatus::Pass,
        m if m.upper().is_some_and(|u| u < bound) => GapStatus::Fail,
        _ => GapStatus::OutOfBudget,
    };
    (status, format!("measured {measured}, bound {bound}"))
}

fn check(name: &str, hypotheses: &str, (status, detail): (GapStatus, String)) -> GapCheck {
    GapCheck {
        name: name.into(),
        hypotheses: hypotheses.into(),
        status,
        detail,
    }
}

fn skipped(name: &str, hypotheses: &str, why: &str) -> GapCheck {
    check(name, hypotheses, (GapStatus::Skipped, why.into()))
}

/// Tightens a partial measurement with constructed upper bounds.
fn tighten(m: Measured, bounds: &[Option<usize>]) -> Measured {
    match m {
        Measured::Partial { lower, upper, limit } => {
            let best = bounds.iter().flatten().copied().chain(upper).min();
            match best {
                Some(u) if u <= lower => Measured::Exact { value: u },
                _ => Measured::Partial { lower, upper: best, limit },
            }
        }
        exact => exact,
    }
}

/// Measures `f∘k` against the composition lower bounds whose hypotheses
/// `f` satisfies.
pub fn composition_gap(f: &BooleanFunction, k: usize, budget: &Budget) -> Result<GapRow> {
    let n = f.arity();
    let composed = f.power(k)?;
    let inner = if k >= 2 { Some(f.power(k - 1)?) } else { None };
    let zero = F2Vector::zero(n)?;
    let is_parity = f.is_parity();
    let literal = forcing_literal(f);
    let f_zero = f.get(0);
    let cube = c_min(f)?;
    let c = cube.codim();
    let c0 = cert_at(f, &zero)?.codim();
    let pc = pc_min(f, budget)?.measured;
    let pz = pcert_at(f, &zero, budget)?.measured;

    let (trivial_upper, linearized_upper) = match &inner {
        None => (None, None),
        Some(g) => (
            trivial_certificate(f, g, budget, None).ok().map(|w| w.codim()),
            linearized_certificate(f, g).ok().map(|w| w.codim()),
        ),
    };
    let composed_zero = F2Vector::zero(composed.arity())?;
    let composed_pc_min = tighten(pc_min(&composed, budget)?.measured, &[trivial_upper, linearized_upper]);
    let composed_pcert_zero = pcert_at(&composed, &composed_zero, budget)?.measured;

    let composition_bound = pc.exact().and_then(|p| geometric(c, k)?.checked_add(p));
    let zero_rhs = pz.exact().and_then(|p| geometric(c0, k)?.checked_add(p));

    let mut checks = Vec::new();
    let hyp = "C⊕_min[f] ≥ 2";
    checks.push(match (pc.exact(), composition_bound) {
        (Some(p), Some(rhs)) if p >= 2 => check("supermultiplicative_rhs", hyp, at_least(&composed_pc_min, rhs)),
        (Some(_), _) => skipped("supermultiplicative_rhs", hyp, "hypothesis fails"),
        _ => check("supermultiplicative_rhs", hyp, (GapStatus::OutOfBudget, format!("C⊕_min[f] is {pc}"))),
    });
    let hyp = "f(0) = 0 and C⊕_min[f] ≥ 2";
    checks.push(match (pc.exact(), zero_rhs) {
        (Some(p), Some(rhs)) if p >= 2 && !f_zero => {
            check("zero_point_rhs", hyp, at_least(&composed_pcert_zero, rhs))
        }
        (Some(_), Some(_)) => skipped("zero_point_rhs", hyp, "hypothesis fails"),
        _ => check("zero_point_rhs", hyp, (GapStatus::OutOfBudget, format!("pCert[f,0] is {pz}"))),
    });
    let hyp = "k ≥ 2";
    checks.push(match trivial_upper {
        Some(u) => {
            let status = match composed_pc_min.exact() {
                Some(v) if v <= u => GapStatus::Pass,
                Some(_) => GapStatus::Fail,
                None if composed_pc_min.lower() > u => GapStatus::Fail,
                None => GapStatus::Pass,
            };
            check("trivial_upper", hyp, (status, format!("measured {composed_pc_min}, certificate {u}")))
        }
        None => skipped("trivial_upper", hyp, "no trivial certificate within budget"),
    });
    let hyp = "k = 2 and C⊕_min[f] ≥ 2";
    checks.push(if k != 2 {
        skipped("outer_sum_bound", hyp, "k ≠ 2")
    } else {
        let bound = pc.exact().map(|p| p + c);
        match (pc.exact(), bound) {
            (Some(p), Some(b)) if p >= 2 => check("outer_sum_bound", hyp, at_least(&composed_pc_min, b)),
            (Some(_), Some(b)) if c >= 2 => {
                let (_, detail) = at_least(&composed_pc_min, b);
                check(
                    "outer_sum_bound",
                    "k = 2 and C_min[f] ≥ 2 (weaker reading)",
                    (GapStatus::ReportOnly, detail),
                )
            }
            (Some(_), _) => skipped("outer_sum_bound", hyp, "hypothesis fails"),
            _ => check("outer_sum_bound", hyp, (GapStatus::OutOfBudget, format!("C⊕_min[f] is {pc}"))),
        }
    });
    let hyp = "f is a parity or has a forcing literal";
    checks.push(if is_parity || literal.is_some() {
        let expected = if f.constant_value().is_some() { 0 } else { 1 };
        let status = match composed_pc_min.exact() {
            Some(v) if v == expected => GapStatus::Pass,
            Some(_) => GapStatus::Fail,
            None if composed_pc_min.lower() > expected => GapStatus::Fail,
            None => GapStatus::OutOfBudget,
        };
        check("degenerate_case", hyp, (status, format!("measured {composed_pc_min}, expected {expected}")))
    } else {
        skipped("degenerate_case", hyp, "hypothesis fails")
    });
    let hyp = "k = 2, f not a parity, C_min[f] ≥ 2";
    checks.push(if k == 2 && !is_parity && c >= 2 {
        check("nontrivial_square", hyp, at_least(&composed_pc_min, 2))
    } else {
        skipped("nontrivial_square", hyp, "hypothesis fails")
    });
    checks.push(check(
        "growth",
        "f not a parity",
        (
            GapStatus::ReportOnly,
            format!(
                "C⊕_min[f∘{k}] is {composed_pc_min}; C_min[f]^{} = {}",
                k - 1,
                c.checked_pow(k as u32 - 1).map_or("overflow".into(), |v| v.to_string())
            ),
        ),
    ));

    Ok(GapRow {
        k,
        arity: composed.arity(),
        is_parity,
        forcing_literal: literal.is_some(),
        f_zero,
        c_min: c,
        cert_zero: c0,
        pc_min: pc,
        pcert_zero: pz,
        composed_pc_min,
        composed_pcert_zero,
        composition_bound,
        zero_rhs,
        trivial_upper,
        linearized_upper,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::Family;

    #[test]
    fn linearizations_of_named_functions() {
        let p = BooleanFunction::from_fn(3, |x| parity(x & 0b111)).unwrap();
        let lin = affine_linearization(&p).unwrap();
        assert_eq!(lin.system.codim(), 0);
        assert_eq!(lin.coeffs, vec![false, true, true, true]);

        let maj = Family::Maj3.build().unwrap();
        let lin = affine_linearization(&maj).unwrap();
        assert_eq!(lin.system.to_string(), "n=3 d=1 rows=5 rhs=0");
        assert_eq!(lin.coeffs, vec![false, true, false, false]);
        validate_linearization(&maj, &lin).unwrap();
        let other = Linearization {
            system: "n=3 d=1 rows=3 rhs=1".parse().unwrap(),
            coeffs: vec![false, false, false, true],
        };
        validate_linearization(&maj, &other).unwrap();

        let and = BooleanFunction::from_fn(3, |x| x & 0b011 == 0b011).unwrap();
        let lin = affine_linearization(&and).unwrap();
        assert_eq!(lin.system.to_string(), "n=3 d=1 rows=1 rhs=0");
        assert_eq!(lin.coeffs, vec![false; 4]);
    }

    #[test]
    fn every_three_bit_function_linearizes() {
        for t in 0..256u64 {
            let g = BooleanFunction::from_words(3, vec![t]).unwrap();
            let lin = affine_linearization(&g).unwrap();
            assert!(lin.system.codim() <= 1);
            // independent check over the listed points
            for x in lin.system.points() {
                let a: u64 = (0..3).filter(|&i| lin.coeffs[i + 1]).map(|i| 1 << i).sum();
                assert_eq!(g.get(x.bits()), lin.coeffs[0] ^ parity(a & x.bits()));
            }
        }
    }

    #[test]
    fn trivial_certificates() {
        let b = Budget::default();
        let maj = Family::Maj3.build().unwrap();
        let w = trivial_certificate(&maj, &maj, &b, None).unwrap();
        assert_eq!(w.codim(), 4);
        assert!(w.verified);
        let sort = Family::Sort.build().unwrap();
        let w = trivial_certificate(&sort, &sort, &b, None).unwrap();
        assert_eq!(w.codim(), 6);
        assert!(w.verified);
        let and = Family::And2.build().unwrap();
        let w = trivial_certificate(&and, &and, &b, None).unwrap();
        assert_eq!(w.codim(), 1);
        assert_eq!(w.system.to_string(), "n=4 d=1 rows=1 rhs=0");
        let k = Family::Constant { value: true, arity: 2 }.build().unwrap();
        assert!(matches!(trivial_certificate(&and, &k, &b, None), Err(Error::Degenerate(_))));
        let y = F2Vector::new(9, 0b111_111_111).unwrap();
        let w = trivial_certificate(&maj, &maj, &b, Some(&y)).unwrap();
        assert!(w.system.contains(&y).unwrap());
        assert_eq!(w.codim(), 4);
    }

    #[test]
    fn linearized_certificate_beats_trivial_on_sort() {
        let sort = Family::Sort.build().unwrap();
        let w = linearized_certificate(&sort, &sort).unwrap();
        assert_eq!(w.codim(), 5);
        assert!(w.verified);
        assert_eq!(w.outer.relevant_coordinates().len(), 3);
        let maj = Family::Maj3.build().unwrap();
        assert_eq!(linearized_certificate(&maj, &maj).unwrap().codim(), 4);
    }

    #[test]
    fn forcing_literals() {
        assert_eq!(forcing_literal(&Family::And2.build().unwrap()), Some((1, false)));
        assert_eq!(forcing_literal(&Family::Or2.build().unwrap()), Some((1, true)));
        assert_eq!(forcing_literal(&Family::Maj3.build().unwrap()), None);
    }

    #[test]
    fn gap_rows() {
        let b = Budget::default();
        let p = BooleanFunction::from_fn(2, |x| parity(x)).unwrap();
        let row = composition_gap(&p, 2, &b).unwrap();
        assert_eq!(row.composed_pc_min, Measured::Exact { value: 1 });
        let by_name = |row: &GapRow, name: &str| row.checks.iter().find(|c| c.name == name).unwrap().status;
        assert_eq!(by_name(&row, "supermultiplicative_rhs"), GapStatus::Skipped);
        assert_eq!(by_name(&row, "degenerate_case"), GapStatus::Pass);

        let nae = Family::Nae3.build().unwrap();
        let row = composition_gap(&nae, 2, &b).unwrap();
        assert!(row.checks.iter().all(|c| c.status != GapStatus::Fail), "{row:?}");
    }
}
