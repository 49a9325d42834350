//! One line per acceptance criterion. Every tolerance is exact: series are
//! compared coefficient by coefficient over the integers.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use divseries::blowup::{
    branch_blowup_script, curve_valuation, exceptional_order, parse_polynomial, ExtOrder, HypersurfaceModel,
    Polynomial, TieBreak,
};
use divseries::limits::{
    branch_corpus, check_series_convergence, quadric_series_family, toric_series_family, BranchFamily,
};
use divseries::scalar::Rat;
use divseries::series::{Exponent, ExponentPolynomial, RationalExpr, SeriesError, SupportBound, TruncatedSeries};
use divseries::toric::{
    arrow_first_tracking, compute_zo, dual_exponent, poincare_toric_enumerated, reduce_zo_to_p, Cone2D,
    PlumbingGraph, WeightVector,
};
use divseries::{BigInt, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

/// Name, check and runtime target.
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn t(k: u64) -> Exponent {
    Exponent::integral(&[k])
}

fn poly(terms: &[(u64, i64)]) -> ExponentPolynomial<BigInt> {
    ExponentPolynomial::from_terms(1, terms.iter().map(|&(k, c)| (t(k), BigInt::from(c)))).unwrap()
}

/// `(1 + t^{1+m} + t^{1+2m} + t^{2+3m} + t^{2+4m})/((1 - t)(1 - t^{2+5m}))`.
fn example_5_1(m: u64) -> RationalExpr<BigInt> {
    let num = poly(&[(0, 1), (1 + m, 1), (1 + 2 * m, 1), (2 + 3 * m, 1), (2 + 4 * m, 1)]);
    let mut factors = BTreeMap::new();
    *factors.entry(t(1)).or_insert(0) += 1;
    *factors.entry(t(2 + 5 * m)).or_insert(0) += 1;
    RationalExpr::new(num, factors).unwrap()
}

fn same(a: &TruncatedSeries<BigInt>, b: &TruncatedSeries<BigInt>, order: i64) -> Result<bool, SeriesError> {
    Ok(a.equal_up_to(b, Rat::from_integer(order))?.is_equal())
}

fn criterion_1() -> Check {
    let cone = Cone2D::cyclic_quotient(5, 2).map_err(|e| e.to_string())?;
    for m in 0..=5u64 {
        let e: TruncatedSeries<BigInt> =
            poincare_toric_enumerated(&cone, &[WeightVector::tower(m as i64)], 40).map_err(|e| e.to_string())?;
        let closed = example_5_1(m).expand(Rat::from_integer(40)).map_err(|e| e.to_string())?;
        ensure(same(&e, &closed, 40).map_err(|e| e.to_string())?, || format!("m={m} differs"))?;
    }
    Ok("m=0..5 order=40".into())
}

fn criterion_2() -> Check {
    let base = PlumbingGraph::cyclic_quotient(5, 2).map_err(|e| e.to_string())?;
    for m in 0..=4u32 {
        let g = base.blowup_at_arrow(0, m).map_err(|e| e.to_string())?;
        let tracked = arrow_first_tracking(&g);
        let z = compute_zo::<BigInt>(&g, &tracked).map_err(|e| e.to_string())?;
        let p = reduce_zo_to_p(&z, &[0], Rat::from_integer(25)).map_err(|e| e.to_string())?;
        let want = example_5_1(m as u64).expand(Rat::from_integer(25)).map_err(|e| e.to_string())?;
        ensure(same(&p, &want, 25).map_err(|e| e.to_string())?, || format!("m={m} reduction differs"))?;
        let arrow = g.arrow_vertices()[0];
        let e = dual_exponent(&g, arrow, &tracked).map_err(|e| e.to_string())?;
        let want = Rat::new(2 + 5 * m as i64, 5);
        ensure(e.component(0) == want, || format!("m={m} exponent {} != {want}", e.component(0)))?;
    }
    Ok("m=0..4 order=25 exponent=(2+5m)/5".into())
}

/// `#{(i, j, k, l) : i + j + k + (m + 2)l = ℓ, k ≤ 1}` by plain enumeration.
fn brute_force_quadric(m: u64, level: u64) -> u64 {
    let mut n = 0;
    for l in 0..=level {
        for k in 0..=1 {
            for i in 0..=level {
                for j in 0..=level {
                    if i + j + k + (m + 2) * l == level {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

fn criterion_3() -> Check {
    for m in 0..=5u32 {
        let h = HypersurfaceModel::new(m);
        let s = h.poincare::<BigInt>().expand(Rat::from_integer(40)).map_err(|e| e.to_string())?;
        for level in 0..=40u64 {
            let brute = brute_force_quadric(m as u64, level);
            ensure(BigInt::from(brute) == s.coeff_at(level) && brute == h.dim_quotient(level), || {
                format!("m={m} level={level}: brute {brute} series {}", s.coeff_at(level))
            })?;
        }
        ensure(h.functional_equation_holds::<BigInt>(), || format!("m={m} functional equation"))?;
    }
    Ok("m=0..5 levels=0..40 functional-equation".into())
}

fn criterion_4() -> Check {
    let p = |s: &str| parse_polynomial(s, 3).unwrap();
    let g = p("x*y - z^2");
    let mut checks = 0;
    for m in 0..=6u32 {
        let s = HypersurfaceModel::new(m).script();
        for (f, want) in [("x", 1), ("y", 1), ("z", 1), ("x*y - z^2", m as u64 + 2)] {
            let v = exceptional_order(&p(f), &s).map_err(|e| e.to_string())?;
            ensure(v == ExtOrder::Finite(want), || format!("m={m} {f}: {v}"))?;
            checks += 1;
        }
        for i in 0..=3u32 {
            for j in 0..=3u32 {
                for k in 0..=1u32 {
                    for l in 0..=2u32 {
                        let f = Polynomial::monomial(vec![i, j, k], Rational::from_integer(1.into())).mul(&g.pow(l));
                        let want = (i + j + k + (m + 2) * l) as u64;
                        let v = exceptional_order(&f, &s).map_err(|e| e.to_string())?;
                        ensure(v == ExtOrder::Finite(want), || format!("m={m} ({i},{j},{k},{l}): {v}"))?;
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(format!("m=0..6 checks={checks}"))
}

fn criterion_5() -> Check {
    const ORDER: u64 = 15;
    let mut families = vec![quadric_series_family(ORDER, ORDER as u32 + 1).map_err(|e| e.to_string())?];
    for (n, q) in [(5, 2), (2, 1), (7, 3)] {
        let cone = Cone2D::cyclic_quotient(n, q).map_err(|e| e.to_string())?;
        families.push(toric_series_family(&cone, ORDER, ORDER as u32 + 1).map_err(|e| e.to_string())?);
    }
    for fam in &families {
        let rep = check_series_convergence(fam, ORDER).map_err(|e| e.to_string())?;
        ensure(rep.passed(), || rep.to_text())?;
        let limit = fam.limit.dense_coeffs(ORDER);
        for (&m, member) in &fam.members {
            let coeffs = member.dense_coeffs(ORDER);
            for l in 0..=(m as usize).min(ORDER as usize) {
                ensure(coeffs[l] == limit[l], || format!("{} m={m} l={l}", fam.description))?;
            }
        }
        for line in &rep.lines {
            ensure(line.first_m.is_some_and(|m0| m0 as u64 <= line.degree), || {
                format!("{} l={} stabilizes at {:?}", fam.description, line.degree, line.first_m)
            })?;
        }
    }
    Ok(format!("families={} degrees=0..{ORDER}", families.len()))
}

/// Indices count blow-ups after the embedded resolution of the branch, the
/// `X_0` of the tower; the raw count from the origin is reported too.
fn criterion_6() -> Check {
    let corpus = branch_corpus();
    let mut raw_max = 0;
    for (gamma, f) in &corpus {
        let target = curve_valuation(f, gamma).map_err(|e| e.to_string())?;
        let fam = BranchFamily::new(gamma.clone()).map_err(|e| e.to_string())?;
        let mut first = None;
        for m in 0..=target as u32 + 1 {
            let v = exceptional_order(f, &fam.script(m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(v <= ExtOrder::Finite(target), || format!("{f}: {v} above {target} at m={m}"))?;
            match (first, v == ExtOrder::Finite(target)) {
                (None, true) => first = Some(m),
                (Some(m0), false) => return Err(format!("{f}: equal from m={m0}, dropped at m={m}")),
                _ => {}
            }
        }
        ensure(first.is_some_and(|m| m as u64 <= target), || format!("{f}: no stabilization by {target}"))?;
        // the same value on the raw chain, found within resolution + T blow-ups
        let k = fam.resolution() + first.unwrap();
        let (script, _) = branch_blowup_script(gamma, k, TieBreak::First).map_err(|e| e.to_string())?;
        let v = exceptional_order(f, &script).map_err(|e| e.to_string())?;
        ensure(v == ExtOrder::Finite(target), || format!("{f}: raw chain of {k} gives {v}"))?;
        raw_max = raw_max.max(k);
    }
    Ok(format!("pairs={} max-raw-blowups={raw_max}", corpus.len()))
}

const CASES_PER_PROPERTY: usize = 200;

fn random_series(rng: &mut ChaCha8Rng, vars: usize, order: Rat) -> TruncatedSeries<BigInt> {
    let denom = [1u64, 2, 3][rng.gen_range(0..3)];
    let terms: Vec<_> = (0..rng.gen_range(0..7))
        .map(|_| {
            let e: Vec<u64> = (0..vars).map(|_| rng.gen_range(0..=6)).collect();
            (Exponent::from_scaled(e, denom), BigInt::from(rng.gen_range(-5i64..=5)))
        })
        .collect();
    TruncatedSeries::from_terms(vars, order, terms).unwrap()
}

/// Schoolbook product over exact exponent vectors.
fn naive_mul(a: &TruncatedSeries<BigInt>, b: &TruncatedSeries<BigInt>, order: Rat) -> BTreeMap<Vec<Rat>, BigInt> {
    let mut out: BTreeMap<Vec<Rat>, BigInt> = BTreeMap::new();
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let e: Vec<Rat> = ea.components().iter().zip(eb.components()).map(|(x, y)| x + y).collect();
            if e.iter().sum::<Rat>() <= order {
                *out.entry(e).or_default() += ca * cb;
            }
        }
    }
    out.retain(|_, v| *v != BigInt::from(0));
    out
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0007);
    let order = Rat::new(7, 2);
    let err = |e: SeriesError| e.to_string();

    for case in 0..CASES_PER_PROPERTY {
        let vars = rng.gen_range(1..=3);
        let (a, b, c) = (
            random_series(&mut rng, vars, order),
            random_series(&mut rng, vars, order),
            random_series(&mut rng, vars, order),
        );
        let ok = a.add(&b).map_err(err)? == b.add(&a).map_err(err)?
            && a.mul(&b).map_err(err)?.mul(&c).map_err(err)? == a.mul(&b.mul(&c).map_err(err)?).map_err(err)?
            && a.mul(&b.add(&c).map_err(err)?).map_err(err)?
                == a.mul(&b).map_err(err)?.add(&a.mul(&c).map_err(err)?).map_err(err)?
            && a.sub(&a).map_err(err)?.is_zero()
            && a.mul(&b).map_err(err)?.terms().map(|(e, c)| (e.components(), c.clone())).collect::<BTreeMap<_, _>>()
                == naive_mul(&a, &b, order);
        ensure(ok, || format!("ring axioms, case {case}"))?;
    }

    for case in 0..CASES_PER_PROPERTY {
        let num: Vec<(u64, i64)> = (0..rng.gen_range(1..4)).map(|_| (rng.gen_range(0..=4), rng.gen_range(-3..=3))).collect();
        let mut factors = BTreeMap::new();
        for _ in 0..rng.gen_range(1..4) {
            *factors.entry(t(rng.gen_range(1..=4))).or_insert(0u32) += rng.gen_range(1..=2);
        }
        let n = Rat::from_integer(rng.gen_range(0..=12));
        let numerator = poly(&num);
        let e = RationalExpr::new(numerator.clone(), factors).map_err(err)?;
        let back = e.expand(n).map_err(err)?.mul(&e.denominator_polynomial().to_series(n).map_err(err)?).map_err(err)?;
        ensure(back == numerator.to_series(n).map_err(err)?, || format!("expand inverse, case {case}"))?;
    }

    for case in 0..CASES_PER_PROPERTY {
        let vars = rng.gen_range(1..=3);
        let (a, b) = (random_series(&mut rng, vars, order), random_series(&mut rng, vars, order));
        let ia = a.integral_part();
        let ok = ia.integral_part() == ia
            && a.add(&b).map_err(err)?.integral_part() == ia.add(&b.integral_part()).map_err(err)?
            && ia.terms().all(|(e, _)| e.is_integral());
        ensure(ok, || format!("integral part, case {case}"))?;
    }

    // draw until enough cases admit a truncation below the required order
    let (mut rejections, mut case) = (0, 0);
    while rejections < CASES_PER_PROPERTY {
        case += 1;
        let vars = rng.gen_range(2..=3);
        let full = random_series(&mut rng, vars, Rat::from_integer(30));
        let max_elim = full.terms().map(|(e, _)| e.component(0)).max().unwrap_or_else(|| Rat::from_integer(0));
        let bound = SupportBound::polynomial(max_elim);
        let out = Rat::from_integer(rng.gen_range(0..=3));
        let needed = bound.required_order(out);
        let low = needed - Rat::new(1, 6);
        if low >= Rat::from_integer(0) {
            let cut = full.truncate(low).map_err(err)?;
            let r = cut.specialize_to_one(0, out, &bound);
            ensure(matches!(r, Err(SeriesError::UnsoundSpecialization { .. })), || {
                format!("specialization accepted below the required order, case {case}")
            })?;
            rejections += 1;
        }
        let got = full.truncate(needed).map_err(err)?.specialize_to_one(0, out, &bound).map_err(err)?;
        let mut oracle: BTreeMap<Vec<Rat>, BigInt> = BTreeMap::new();
        for (e, c) in full.terms() {
            let rest = e.components()[1..].to_vec();
            if rest.iter().sum::<Rat>() <= out {
                *oracle.entry(rest).or_default() += c;
            }
        }
        oracle.retain(|_, v| *v != BigInt::from(0));
        let got: BTreeMap<_, _> = got.terms().map(|(e, c)| (e.components(), c.clone())).collect();
        ensure(got == oracle, || format!("specialization value, case {case}"))?;
    }
    Ok(format!("cases>={CASES_PER_PROPERTY} per property specializations={case} seed=0xacce0007"))
}

fn criterion_8() -> Check {
    for c in common::CASES {
        let first = common::run(c.args, c.env);
        let second = common::run(c.args, c.env);
        ensure(first == second, || format!("{} differs between runs", c.name))?;
        ensure(first.1 == c.status, || format!("{} exit {}", c.name, first.1))?;
        let golden = common::read(&common::golden_path(c.name));
        ensure(first.0 == golden, || format!("{} differs from its golden file", c.name))?;
    }
    Ok(format!("cases={} runs=2", common::CASES.len()))
}

fn main() -> std::process::ExitCode {
    let criteria: [Criterion; 8] = [
        ("toric closed form", criterion_1, Duration::from_secs(6)),
        ("Z_o reduction", criterion_2, Duration::from_secs(10)),
        ("quadric dimensions", criterion_3, Duration::from_secs(1)),
        ("quadric pullbacks", criterion_4, Duration::from_secs(5)),
        ("convergence", criterion_5, Duration::from_secs(10)),
        ("plane branches", criterion_6, Duration::from_secs(10)),
        ("series properties", criterion_7, Duration::from_secs(30)),
        ("cli determinism", criterion_8, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (k, (name, run, target)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let ms = start.elapsed().as_millis();
        let (verdict, detail) = match &result {
            Ok(d) => ("PASS", d.as_str()),
            Err(e) => ("FAIL", e.as_str()),
        };
        failed += usize::from(result.is_err());
        println!(
            "criterion {} {name}: {verdict} tolerance=exact time={ms}ms target<{}ms {detail}",
            k + 1,
            target.as_millis()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        std::process::ExitCode::SUCCESS
    } else {
        std::process::ExitCode::FAILURE
    }
}
