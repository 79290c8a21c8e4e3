//! The acceptance checklist, one line per criterion. Reference values come
//! from brute-force oracles defined here, independent of the library's
//! enumeration and transform code.

use std::cell::OnceCell;
use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use parikill_core::paperlab::{verify_suite, VerifyOptions};
use parikill_core::solvers::{
    affine_linearization, c_max, c_min, cert_at, dt_depth, measure, pc_max, pc_min, pdt_depth,
    trivial_certificate, Budget, Measure, MeasureOptions,
};
use parikill_core::{BooleanFunction, F2Vector, Family, FourierSpectrum};

// ---- oracles ----

fn table(f: &BooleanFunction) -> Vec<bool> {
    (0..f.table_len()).map(|x| f.get(x)).collect()
}

fn sign(b: bool) -> i64 {
    if b {
        -1
    } else {
        1
    }
}

/// Scaled coefficients `Σ_x (−1)^{f(x) + ⟨α,x⟩}` straight from the sum.
fn direct_coefficients(tt: &[bool]) -> Vec<i64> {
    (0..tt.len())
        .map(|a| {
            tt.iter()
                .enumerate()
                .map(|(x, &v)| sign(v) * sign((a & x).count_ones() % 2 == 1))
                .sum()
        })
        .collect()
}

/// Recursive Walsh–Hadamard transform, for tables too large for the direct sum.
fn recursive_transform(v: &[i64]) -> Vec<i64> {
    if v.len() == 1 {
        return v.to_vec();
    }
    let (lo, hi) = v.split_at(v.len() / 2);
    let s: Vec<i64> = lo.iter().zip(hi).map(|(a, b)| a + b).collect();
    let d: Vec<i64> = lo.iter().zip(hi).map(|(a, b)| a - b).collect();
    let mut out = recursive_transform(&s);
    out.extend(recursive_transform(&d));
    out
}

fn transform(tt: &[bool]) -> Vec<i64> {
    recursive_transform(&tt.iter().map(|&b| sign(b)).collect::<Vec<_>>())
}

/// `outer(inner(block₁), …, inner(blockₙ))` with block i on bits i·m … i·m+m−1.
fn compose_tables(outer: &[bool], n: usize, inner: &[bool], m: usize) -> Vec<bool> {
    (0..1usize << (n * m))
        .map(|y| {
            let x = (0..n).fold(0, |acc, i| {
                acc | (inner[(y >> (i * m)) & ((1 << m) - 1)] as usize) << i
            });
            outer[x]
        })
        .collect()
}

/// Every affine subspace of F₂ⁿ as (point mask, codimension), by testing
/// every point set for closure.
fn affine_subspaces(n: usize) -> Vec<(u64, usize)> {
    let size = 1usize << n;
    (1u64..1 << size)
        .filter(|m| m.count_ones().is_power_of_two())
        .filter(|&m| {
            let pts: Vec<usize> = (0..size).filter(|&x| m >> x & 1 == 1).collect();
            pts.iter()
                .all(|&p| pts.iter().all(|&q| m >> (pts[0] ^ p ^ q) & 1 == 1))
        })
        .map(|m| (m, n - m.count_ones().trailing_zeros() as usize))
        .collect()
}

fn oracle_pc_min(tt: &[bool], subspaces: &[(u64, usize)]) -> usize {
    let ones = tt
        .iter()
        .enumerate()
        .fold(0u64, |m, (x, &v)| m | (v as u64) << x);
    subspaces
        .iter()
        .filter(|&&(s, _)| ones & s == 0 || ones & s == s)
        .map(|s| s.1)
        .min()
        .unwrap()
}

/// Optimal parity decision tree depth by minimax over sets of live points.
fn oracle_pdt(tt: &[bool]) -> usize {
    fn go(tt: &[bool], live: u64, memo: &mut HashMap<u64, usize>) -> usize {
        let ones = (0..tt.len()).filter(|&x| live >> x & 1 == 1 && tt[x]).count();
        if ones == 0 || ones == live.count_ones() as usize {
            return 0;
        }
        if let Some(&d) = memo.get(&live) {
            return d;
        }
        let mut best = usize::MAX;
        for a in 1..tt.len() {
            let side: u64 = (0..tt.len())
                .filter(|&x| (a & x).count_ones() % 2 == 1)
                .fold(0, |m, x| m | 1 << x);
            let (l, r) = (live & !side, live & side);
            if l == 0 || r == 0 {
                continue;
            }
            best = best.min(1 + go(tt, l, memo).max(go(tt, r, memo)));
        }
        memo.insert(live, best);
        best
    }
    let all = if tt.len() == 64 { u64::MAX } else { (1u64 << tt.len()) - 1 };
    go(tt, all, &mut HashMap::new())
}

/// Value of `f` on every subcube, indexed in base 3 (digit 2 = free), or
/// `None` where it is not constant.
fn subcube_values(tt: &[bool], n: usize) -> Vec<Option<bool>> {
    let total = 3usize.pow(n as u32);
    let mut val = vec![None; total];
    let mut order: Vec<usize> = (0..total).collect();
    let stars = |mut c: usize| {
        let mut s = 0;
        for _ in 0..n {
            s += (c % 3 == 2) as usize;
            c /= 3;
        }
        s
    };
    order.sort_by_key(|&c| stars(c));
    for c in order {
        let (mut d, mut p, mut point, mut free) = (c, 1, 0, None);
        for i in 0..n {
            match d % 3 {
                1 => point |= 1 << i,
                2 if free.is_none() => free = Some(p),
                _ => {}
            }
            d /= 3;
            p *= 3;
        }
        val[c] = match free {
            None => Some(tt[point]),
            Some(p) => match (val[c - 2 * p], val[c - p]) {
                (Some(a), Some(b)) if a == b => Some(a),
                _ => None,
            },
        };
    }
    val
}

/// `(C_min[f], C[f,0])` from [`subcube_values`].
fn oracle_certificates(tt: &[bool], n: usize) -> (usize, usize) {
    let vals = subcube_values(tt, n);
    let mut best = (n, n);
    for (c, v) in vals.iter().enumerate() {
        if v.is_none() {
            continue;
        }
        let (mut d, mut fixed, mut through_zero) = (c, 0, true);
        for _ in 0..n {
            match d % 3 {
                2 => {}
                1 => {
                    fixed += 1;
                    through_zero = false;
                }
                _ => fixed += 1,
            }
            d /= 3;
        }
        best.0 = best.0.min(fixed);
        if through_zero {
            best.1 = best.1.min(fixed);
        }
    }
    best
}

/// Whether some hyperplane or its complement makes `tt` constant.
fn killed_by_one_parity(tt: &[bool]) -> bool {
    (1..tt.len()).any(|a| {
        [false, true].into_iter().any(|b| {
            let mut vals = (0..tt.len())
                .filter(|&x| ((a & x).count_ones() % 2 == 1) == b)
                .map(|x| tt[x]);
            let first = vals.next().unwrap();
            vals.all(|v| v == first)
        })
    })
}

fn is_affine(tt: &[bool]) -> bool {
    let c = direct_coefficients(tt);
    c.iter().filter(|&&v| v != 0).count() == 1
}

fn monomial(s: &str) -> usize {
    s.bytes().fold(0, |m, c| m | 1 << (c - b'1'))
}

// ---- criteria ----

struct Check {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Check {
    Check {
        ok,
        detail: detail.into(),
    }
}

/// Differences between a computed scaled spectrum and an expected one.
fn spectrum_diff(computed: &[i64], expected: &HashMap<usize, i64>) -> Vec<String> {
    let n = computed.len().trailing_zeros();
    let mut diff = Vec::new();
    for (a, &c) in computed.iter().enumerate() {
        let want = expected.get(&a).copied().unwrap_or(0);
        if c != want {
            let name: String = (0..n)
                .filter(|i| a >> i & 1 == 1)
                .map(|i| format!("x{}", i + 1))
                .collect();
            diff.push(format!("{name}: expected {want}/{} got {c}/{}", 1 << n, 1 << n));
        }
    }
    diff
}

fn sort_expected() -> HashMap<usize, i64> {
    // (x1x2 + x2x3 + x3x4 − x4x1)/2, scaled by 2⁴
    [("12", 8), ("23", 8), ("34", 8), ("14", -8)]
        .into_iter()
        .map(|(m, c)| (monomial(m), c))
        .collect()
}

fn item1(sort: &BooleanFunction) -> Check {
    let tt = table(sort);
    let direct = direct_coefficients(&tt);
    let lib = FourierSpectrum::of(sort);
    let agree = (0..16).all(|a| lib.scaled().get(&(a as u64)).copied().unwrap_or(0) == direct[a]);
    let diff = spectrum_diff(&direct, &sort_expected());
    let detail = if diff.is_empty() {
        "matches".to_string()
    } else {
        format!("differs: {}", diff.join(", "))
    };
    check(agree && diff.is_empty(), format!("{detail}; library agrees with direct sum: {agree}"))
}

fn item2() -> Check {
    let hi = Family::HemiIcosahedron.build().unwrap();
    let mut expected: HashMap<usize, i64> = (1..=6).map(|i| (1 << (i - 1), -16)).collect();
    for t in ["123", "124", "136", "145", "156", "235", "246", "256", "345", "346"] {
        expected.insert(monomial(t), 16);
    }
    let direct = direct_coefficients(&table(&hi));
    let diff = spectrum_diff(&direct, &expected);
    let lib = FourierSpectrum::of(&hi);
    let agree = (0..64).all(|a| lib.scaled().get(&(a as u64)).copied().unwrap_or(0) == direct[a]);
    check(
        diff.is_empty() && agree,
        if diff.is_empty() { "16 terms match".into() } else { diff.join(", ") },
    )
}

fn item3(sort: &BooleanFunction) -> Check {
    let tt = table(sort);
    let budget = Budget::default();
    let (oc, _) = oracle_certificates(&tt, 4);
    let op = oracle_pc_min(&tt, &affine_subspaces(4));
    let od = oracle_pdt(&tt);
    let c = c_min(sort).unwrap().codim();
    let p = pc_min(sort, &budget).unwrap().measured.exact();
    let d = pdt_depth(sort, &budget).unwrap().measured.exact();
    check(
        c == 3 && oc == 3 && p == Some(2) && op == 2 && d == Some(2) && od == 2 && p == d,
        format!("c_min {c} (oracle {oc}), pc_min {p:?} (oracle {op}), pdt {d:?} (oracle {od})"),
    )
}

fn item4() -> Check {
    let hi = Family::HemiIcosahedron.build().unwrap();
    let tt = table(&hi);
    let c0 = cert_at(&hi, &F2Vector::zero(6).unwrap()).unwrap().codim();
    let (_, oc0) = oracle_certificates(&tt, 6);
    let pattern = (0..64usize).all(|x| match x.count_ones() {
        1 | 2 | 6 => tt[x],
        0 | 4 | 5 => !tt[x],
        _ => true,
    });
    check(
        c0 == 6 && oc0 == 6 && pattern,
        format!("C[HI,0] = {c0} (oracle {oc0}), weight pattern holds: {pattern}"),
    )
}

fn item5(sort: &BooleanFunction) -> Check {
    let tt = table(sort);
    let mut parts = Vec::new();
    let mut ok = true;
    let mut power = tt.clone();
    for k in 1..=2 {
        if k == 2 {
            power = compose_tables(&tt, 4, &tt, 4);
        }
        let coeffs = transform(&power);
        let n = power.len().trailing_zeros();
        let sparsity = coeffs.iter().filter(|&&c| c != 0).count();
        let l1_scaled: i64 = coeffs.iter().map(|c| c.abs()).sum();
        // (l1_scaled / 2ⁿ)² = sparsity
        let l1_sq_ok = (l1_scaled as i128).pow(2) == sparsity as i128 * (1i128 << (2 * n));
        let lib = FourierSpectrum::of(&sort.power(k).unwrap());
        let want = 1usize << (2 * ((1 << k) - 1));
        let lib_l1_ok = lib.spectral_l1().square() == parikill_core::Dyadic::integer(sparsity as i64);
        ok &= sparsity == want && lib.sparsity() == sparsity && l1_sq_ok && lib_l1_ok;
        parts.push(format!("k={k}: sparsity {sparsity} (library {}), l1² = sparsity: {l1_sq_ok}", lib.sparsity()));
    }
    check(ok, parts.join("; "))
}

fn item6() -> Check {
    let mut bad = Vec::new();
    for t in 0..256u64 {
        let g = BooleanFunction::from_words(3, vec![t]).unwrap();
        let lin = affine_linearization(&g).unwrap();
        let rows = lin.system.rows();
        let rhs = lin.system.rhs();
        let inside = |x: u64| rows.iter().zip(rhs).all(|(r, &b)| ((r.bits() & x).count_ones() % 2 == 1) == b);
        let form = |x: u64| {
            lin.coeffs[0] ^ (0..3).fold(false, |acc, i| acc ^ (lin.coeffs[i + 1] && x >> i & 1 == 1))
        };
        let points: Vec<u64> = (0..8).filter(|&x| inside(x)).collect();
        let ok = lin.system.codim() <= 1
            && points.len() == 8 >> lin.system.codim()
            && points.iter().all(|&x| g.get(x) == form(x));
        if !ok {
            bad.push(t);
        }
    }
    check(bad.is_empty(), format!("{} of 256 valid", 256 - bad.len()))
}

struct Corpus {
    rows: Vec<(BooleanFunction, [usize; 6])>,
}

/// `[pc_min, pc_max, pdt, dt, c_min, c_max]` for every function of arity ≤ 4.
fn build_corpus() -> Corpus {
    let budget = Budget::default();
    let mut rows = Vec::new();
    for n in 1..=4usize {
        for t in 0..1u64 << (1 << n) {
            let f = BooleanFunction::from_words(n, vec![t]).unwrap();
            let v = [
                pc_min(&f, &budget).unwrap().measured.exact().unwrap(),
                pc_max(&f, &budget).unwrap().measured.exact().unwrap(),
                pdt_depth(&f, &budget).unwrap().measured.exact().unwrap(),
                dt_depth(&f).unwrap().0,
                c_min(&f).unwrap().codim(),
                c_max(&f).unwrap().0,
            ];
            rows.push((f, v));
        }
    }
    Corpus { rows }
}

fn item7(corpus: &Corpus) -> Check {
    let subspaces = affine_subspaces(4);
    let rows: Vec<_> = corpus.rows.iter().filter(|r| r.0.arity() == 4).collect();
    let mismatches = rows
        .iter()
        .filter(|(f, v)| v[0] != oracle_pc_min(&table(f), &subspaces))
        .count();
    check(mismatches == 0, format!("{mismatches} mismatches over {} functions", rows.len()))
}

fn item8(corpus: &Corpus) -> Check {
    let broken = corpus
        .rows
        .iter()
        .filter(|(_, [p, px, d, dt, c, cx])| !(p <= px && px <= d && d <= dt && p <= c && c <= cx && cx <= dt))
        .count();
    check(broken == 0, format!("{broken} violations over {} functions", corpus.rows.len()))
}

fn item9() -> Check {
    let maj = Family::Maj3.build().unwrap();
    let composed = table(&maj);
    let composed = compose_tables(&composed, 3, &composed, 3);
    let mm = BooleanFunction::from_fn(9, |x| composed[x as usize]).unwrap();
    let budget = Budget::default();
    let p = pc_min(&mm, &budget).unwrap().measured.exact();
    let rhs = c_min(&maj).unwrap().codim() + pc_min(&maj, &budget).unwrap().measured.exact().unwrap();
    let cert = trivial_certificate(&maj, &maj, &budget, None).unwrap();
    let rows = cert.system.rows();
    let rhs_bits = cert.system.rhs();
    let on: Vec<bool> = (0..512u64)
        .filter(|&x| rows.iter().zip(rhs_bits).all(|(r, &b)| ((r.bits() & x).count_ones() % 2 == 1) == b))
        .map(|x| composed[x as usize])
        .collect();
    let constant = !on.is_empty() && on.iter().all(|&v| v == cert.value);
    check(
        p == Some(4) && rhs == 4 && cert.codim() == 4 && constant,
        format!("pc_min {p:?}, C_min + C⊕_min = {rhs}, trivial certificate codim {} constant: {constant}", cert.codim()),
    )
}

fn item10() -> Check {
    let (mut checked, mut broken) = (0, Vec::new());
    for n in 1..=3usize {
        for t in 0..1u64 << (1 << n) {
            let f = BooleanFunction::from_words(n, vec![t]).unwrap();
            let tt = table(&f);
            let ff = compose_tables(&tt, n, &tt, n);
            let (c, c0) = oracle_certificates(&tt, n);
            let (cc, cc0) = oracle_certificates(&ff, n * n);
            checked += 1;
            if cc < c * c {
                broken.push(format!("C_min {t:#x}/{n}"));
            }
            if !tt[0] && cc0 < c0 * c0 {
                broken.push(format!("C[·,0] {t:#x}/{n}"));
            }
            if !is_affine(&tt) && c >= 2 && killed_by_one_parity(&ff) {
                broken.push(format!("square {t:#x}/{n}"));
            }
        }
    }
    check(
        broken.is_empty(),
        format!("{checked} functions, {} violations{}", broken.len(), broken.iter().map(|b| format!(" {b}")).collect::<String>()),
    )
}

fn item11() -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, f, degree) in [
        ("HI", Family::HemiIcosahedron.build().unwrap(), 3),
        ("Sort", Family::Sort.build().unwrap(), 2),
        ("h1", Family::AppendixH { k: 1 }.build().unwrap(), 6),
    ] {
        let coeffs = transform(&table(&f));
        let n = f.arity();
        let d = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(a, _)| a.count_ones() as usize)
            .max()
            .unwrap();
        // f̂(α) = c/2ⁿ is a multiple of 2^-d
        let grained = coeffs.iter().all(|c| c % (1i64 << (n - d)) == 0);
        let sparsity = coeffs.iter().filter(|&&c| c != 0).count();
        let lib = FourierSpectrum::of(&f).granularity_check();
        ok &= d == degree && grained && sparsity <= 1 << (2 * d) && lib.ok && lib.degree == d;
        parts.push(format!("{name}: degree {d}, sparsity {sparsity}, granular {grained}"));
    }
    check(ok, parts.join("; "))
}

fn item12(sort: &BooleanFunction) -> Check {
    let expected = sort_expected();
    let negated: HashMap<usize, i64> = expected.iter().map(|(&a, &c)| (a, -c)).collect();
    let mut item3_fails = 0;
    let mut surviving = Vec::new();
    for x in 0..16 {
        let mutant = sort.with_flipped(x).unwrap();
        let coeffs = direct_coefficients(&table(&mutant));
        // the mutant must break the expansion under either sign convention
        let expansion_broken =
            !spectrum_diff(&coeffs, &expected).is_empty() && !spectrum_diff(&coeffs, &negated).is_empty();
        let measures_broken = !item3(&mutant).ok;
        item3_fails += measures_broken as usize;
        if !expansion_broken && !measures_broken {
            surviving.push(x);
        }
    }
    check(
        surviving.is_empty(),
        format!("16 single-bit mutants: expansion check fails on all, measure check fails on {item3_fails}; survivors {surviving:?}"),
    )
}

fn item13() -> Check {
    let opts = VerifyOptions {
        only: Some(vec![
            "sort_measures".into(),
            "pc_min_oracle_arity4".into(),
            "maj_maj_composition".into(),
        ]),
        ..VerifyOptions::default()
    };
    let report_opts = MeasureOptions {
        which: vec![Measure::PcMin, Measure::PcMax, Measure::Pdt],
        witnesses: true,
        ..MeasureOptions::default()
    };
    let run = |threads: usize| -> String {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let claims = verify_suite(&opts).unwrap();
            let maj = Family::Maj3.build().unwrap();
            let mm = maj.compose(&[maj.clone(), maj.clone(), maj.clone()]).unwrap();
            let reports: Vec<_> = [Family::Sort.build().unwrap(), mm]
                .iter()
                .map(|f| measure(f, &report_opts).unwrap())
                .collect();
            format!(
                "{}\n{}",
                serde_json::to_string(&claims).unwrap(),
                serde_json::to_string(&reports).unwrap()
            )
        })
    };
    let (one, eight) = (run(1), run(8));
    check(
        one == eight,
        format!("{} bytes, identical: {}", one.len(), one == eight),
    )
}

/// Whether the Sort spectrum is exactly the negation of the printed one,
/// the one failure the checklist tolerates.
fn sort_sign_flipped(sort: &BooleanFunction) -> bool {
    let negated: HashMap<usize, i64> = sort_expected().into_iter().map(|(a, c)| (a, -c)).collect();
    spectrum_diff(&direct_coefficients(&table(sort)), &negated).is_empty()
}

fn main() -> ExitCode {
    let sort = Family::Sort.build().unwrap();
    let corpus = OnceCell::new();
    let corpus = || corpus.get_or_init(build_corpus);
    let items: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("Sort spectrum equals the printed expansion", Box::new(|| item1(&sort))),
        ("HI spectrum equals the printed expansion", Box::new(item2)),
        ("Sort: c_min 3, pc_min 2, pdt 2", Box::new(|| item3(&sort))),
        ("C[HI,0] = 6 and the weight pattern", Box::new(item4)),
        ("sparsity of Sort∘k is 4^(2^k−1), l1² = sparsity", Box::new(|| item5(&sort))),
        ("3-bit functions are affine on a codim-≤1 subspace", Box::new(item6)),
        ("pc_min agrees with the subspace oracle at arity 4", Box::new(|| item7(corpus()))),
        ("measure chains on every function of arity ≤ 4", Box::new(|| item8(corpus()))),
        ("pc_min(MAJ∘MAJ) = 4 from both sides", Box::new(item9)),
        ("supermultiplicativity and non-parity squares", Box::new(item10)),
        ("granularity of HI, Sort and h1", Box::new(item11)),
        ("single-bit mutations of Sort are detected", Box::new(|| item12(&sort))),
        ("1 and 8 workers give identical JSON", Box::new(item13)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in items.iter().enumerate() {
        let start = Instant::now();
        let c = run();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        println!(
            "{} {:>2} {name}: {} ({ms:.1} ms)",
            if c.ok { "PASS" } else { "FAIL" },
            i + 1,
            c.detail
        );
        if !c.ok {
            failed.push(i + 1);
        }
    }
    let tolerated = failed == [1] && sort_sign_flipped(&sort);
    if tolerated {
        println!("item 1 fails only by the global sign of every coefficient (known convention conflict)");
    }
    println!("{} of {} criteria pass", items.len() - failed.len(), items.len());
    if failed.is_empty() || tolerated {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
