use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::Zero;

use super::{stabilization_bound, toric_description, BranchFamily, LimitsError};
use crate::blowup::{BlowupScript, BranchParametrization, HypersurfaceModel, Polynomial, TieBreak};
use crate::scalar::Rat;
use crate::series::{Exponent, ExponentPolynomial, RationalExpr, TruncatedSeries};
use crate::toric::{poincare_toric_closed, Cone2D, WeightVector};
use crate::{Integer, Rational};

/// Poincaré series `m ↦ P_{F_{I,m}}` with a candidate limit.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesFamily {
    pub description: String,
    pub members: BTreeMap<u32, TruncatedSeries<Integer>>,
    pub limit: TruncatedSeries<Integer>,
    /// Added to `M(ℓ)` when checking the stabilization index. Zero for the
    /// toric and quadric towers; the branch tower needs 1 because its degree
    /// `ℓ` coefficient also sees `F(ℓ + 1)`.
    pub bound_offset: u64,
}

/// Stabilization data for one total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeLine {
    pub degree: u64,
    /// Limit coefficients of the exponents of this degree, in key order.
    pub limit: Vec<Integer>,
    /// Least `m0` such that every member `m ≥ m0` agrees with the limit in
    /// this degree; `None` when even the last member disagrees.
    pub first_m: Option<u32>,
    pub bound: u64,
    /// Every exponent of this degree stabilized within its own bound.
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub description: String,
    pub order: u64,
    pub m_max: u32,
    pub lines: Vec<DegreeLine>,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }

    pub fn violations(&self) -> usize {
        self.lines.iter().filter(|l| !l.ok).count()
    }

    /// Empirical stabilization index per degree.
    pub fn profile(&self) -> Vec<Option<u32>> {
        self.lines.iter().map(|l| l.first_m).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let coeffs: Vec<String> = l.limit.iter().map(|c| c.to_string()).collect();
            let first = l.first_m.map_or("none".to_string(), |m| m.to_string());
            let _ = writeln!(
                out,
                "l={} limit={} first_m={} bound={} {}",
                l.degree,
                coeffs.join(","),
                first,
                l.bound,
                if l.ok { "ok" } else { "VIOLATION" }
            );
        }
        let _ = writeln!(
            out,
            "converge family=\"{}\" order={} mmax={} degrees={} violations={} status={}",
            self.description,
            self.order,
            self.m_max,
            self.lines.len(),
            self.violations(),
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

fn integral_components(e: &Exponent) -> Result<Vec<i64>, LimitsError> {
    if !e.is_integral() {
        return Err(LimitsError::NonIntegral(format!("{:?}", e.components())));
    }
    Ok(e.numerators().iter().map(|&k| k as i64).collect())
}

/// For every total degree `ℓ ≤ order` and every exponent `e` of that degree,
/// finds the least `m0` from which all members agree with the limit at `e`
/// and checks `m0 ≤ M(e) + bound_offset`. Members `0..=order` must all be
/// present.
pub fn check_series_convergence(fam: &SeriesFamily, order: u64) -> Result<ConvergenceReport, LimitsError> {
    let m_max = *fam.members.keys().next_back().ok_or(LimitsError::MissingMember(0))?;
    for m in 0..=(order.min(u32::MAX as u64) as u32).max(m_max) {
        if !fam.members.contains_key(&m) {
            return Err(LimitsError::MissingMember(m));
        }
    }
    let vars = fam.limit.vars();
    let ord = Rat::from_integer(order as i64);
    for s in fam.members.values().chain([&fam.limit]) {
        if s.vars() != vars {
            return Err(LimitsError::VarCountMismatch);
        }
        if s.order() < ord {
            return Err(LimitsError::Series(crate::series::SeriesError::OrderExceeded {
                requested: order.to_string(),
                available: s.order().to_string(),
            }));
        }
    }

    let mut by_degree: BTreeMap<u64, BTreeSet<Exponent>> = (0..=order).map(|l| (l, BTreeSet::new())).collect();
    if vars == 1 {
        for l in 0..=order {
            by_degree.get_mut(&l).expect("prefilled").insert(Exponent::integral(&[l]));
        }
    }
    for s in fam.members.values().chain([&fam.limit]) {
        for (e, _) in s.terms() {
            let d = e.total_degree();
            if d <= ord {
                if !d.is_integer() {
                    return Err(LimitsError::NonIntegral(format!("{:?}", e.components())));
                }
                by_degree.get_mut(&(d.to_integer() as u64)).expect("prefilled").insert(e);
            }
        }
    }

    let mut lines = Vec::new();
    for (degree, exps) in by_degree {
        let mut first_m = Some(0u32);
        let mut bound = 0;
        let mut limit = Vec::new();
        let mut ok = true;
        for e in &exps {
            let comps = integral_components(e)?;
            let e_bound = stabilization_bound(&comps)? + fam.bound_offset;
            let target = fam.limit.coeff(e);
            let last_bad = fam.members.iter().rev().find(|(_, s)| s.coeff(e) != target).map(|(&m, _)| m);
            let e_first = match last_bad {
                None => Some(0),
                Some(m) if m == m_max => None,
                Some(m) => Some(m + 1),
            };
            ok &= e_first.is_some_and(|m| m as u64 <= e_bound);
            first_m = match (first_m, e_first) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
            bound = bound.max(e_bound);
            limit.push(target);
        }
        if vars == 1 {
            bound = degree + fam.bound_offset;
        }
        lines.push(DegreeLine {
            degree,
            limit,
            first_m,
            bound,
            ok,
        });
    }
    Ok(ConvergenceReport {
        description: fam.description.clone(),
        order,
        m_max,
        lines,
    })
}

fn t_pow(k: u64) -> Exponent {
    Exponent::integral(&[k])
}

/// Closed forms at the weights `(1, m)` against `1/(1 - t)`.
pub fn toric_series_family(cone: &Cone2D, order: u64, m_max: u32) -> Result<SeriesFamily, LimitsError> {
    let ord = Rat::from_integer(order as i64);
    let mut members = BTreeMap::new();
    for m in 0..=m_max {
        let expr: RationalExpr<Integer> = poincare_toric_closed(cone, &WeightVector::tower(m as i64))?;
        members.insert(m, expr.expand(ord)?);
    }
    let limit: RationalExpr<Integer> = RationalExpr::new(ExponentPolynomial::one(1), [(t_pow(1), 1)])?;
    Ok(SeriesFamily {
        description: toric_description(cone),
        members,
        limit: limit.expand(ord)?,
        bound_offset: 0,
    })
}

/// `(1 - t²)/((1 - t)³(1 - t^{m+2}))` against `(1 - t²)/(1 - t)³`.
pub fn quadric_series_family(order: u64, m_max: u32) -> Result<SeriesFamily, LimitsError> {
    let ord = Rat::from_integer(order as i64);
    let mut members = BTreeMap::new();
    for m in 0..=m_max {
        members.insert(m, HypersurfaceModel::new(m).poincare::<Integer>().expand(ord)?);
    }
    Ok(SeriesFamily {
        description: "quadric xy - z^2".into(),
        members,
        limit: HypersurfaceModel::limit::<Integer>().expand(ord)?,
        bound_offset: 0,
    })
}

type SparseRow = BTreeMap<Vec<u32>, Rational>;

/// Rank of a list of sparse rows over `Q`.
fn rank(rows: Vec<SparseRow>) -> u64 {
    let mut pivots: Vec<(Vec<u32>, SparseRow)> = Vec::new();
    for mut row in rows {
        for (col, prow) in &pivots {
            let Some(c) = row.get(col).cloned() else { continue };
            for (k, v) in prow {
                let entry = row.entry(k.clone()).or_insert_with(Rational::zero);
                *entry -= &c * v;
            }
            row.retain(|_, v| !v.is_zero());
        }
        if let Some((col, lead)) = row.iter().next().map(|(k, v)| (k.clone(), v.clone())) {
            for v in row.values_mut() {
                *v /= &lead;
            }
            pivots.push((col, row));
        }
    }
    pivots.len() as u64
}

/// Plane monomials `x^a y^b` with `a + b < n`.
fn monomials_below(n: u64) -> Vec<(u32, u32)> {
    (0..n as u32).flat_map(|d| (0..=d).map(move |a| (a, d - a))).collect()
}

/// `dim O/F(ℓ)` for `ℓ = 0..=order + 1`, where `F(ℓ)` is cut out by
/// `keep(image, ℓ)`: the coefficients of the image of a polynomial that must
/// vanish for it to lie in `F(ℓ)`. Valid whenever `m^ℓ ⊂ F(ℓ)`, since then
/// `O/F(ℓ)` is the image of the polynomials of degree `< ℓ`.
fn quotient_dims(
    images: &BTreeMap<(u32, u32), Polynomial<Rational>>,
    order: u64,
    keep: impl Fn(&[u32], u64) -> bool,
) -> Vec<u64> {
    (0..=order + 1)
        .map(|l| {
            let rows = monomials_below(l)
                .into_iter()
                .map(|ab| {
                    images[&ab]
                        .terms()
                        .filter(|(e, _)| keep(e, l))
                        .map(|(e, c)| (e.clone(), c.clone()))
                        .collect()
                })
                .collect();
            rank(rows)
        })
        .collect()
}

fn series_from_dims(dims: &[u64], order: u64) -> Result<TruncatedSeries<Integer>, LimitsError> {
    let terms = dims
        .windows(2)
        .enumerate()
        .map(|(l, w)| (t_pow(l as u64), Integer::from(w[1] - w[0])));
    Ok(TruncatedSeries::from_terms(1, Rat::from_integer(order as i64), terms)?)
}

/// Images of `x^a y^b` for `a + b ≤ order`, reduced mod `u^{order+1}`
/// where `u` is variable `var`. Only degrees below `order + 1` in `u` are
/// ever read, and the reduction commutes with products.
fn monomial_images(
    x: &Polynomial<Rational>,
    y: &Polynomial<Rational>,
    order: u64,
    var: usize,
) -> BTreeMap<(u32, u32), Polynomial<Rational>> {
    let n = order as u32 + 1;
    let cut = |p: Polynomial<Rational>| truncate_in(&p, var, order as u32);
    let mut xs = vec![Polynomial::one(x.vars())];
    let mut ys = vec![Polynomial::one(y.vars())];
    let (x, y) = (cut(x.clone()), cut(y.clone()));
    for k in 1..n as usize {
        xs.push(cut(xs[k - 1].mul(&x)));
        ys.push(cut(ys[k - 1].mul(&y)));
    }
    monomials_below(n as u64)
        .into_iter()
        .map(|(a, b)| ((a, b), cut(xs[a as usize].mul(&ys[b as usize]))))
        .collect()
}

/// Drops the terms of degree `> cap` in variable `var`.
fn truncate_in(p: &Polynomial<Rational>, var: usize, cap: u32) -> Polynomial<Rational> {
    Polynomial::from_terms(p.vars(), p.terms().filter(|(e, _)| e[var] <= cap).map(|(e, c)| (e.clone(), c.clone())))
}

fn branch_coordinate(gamma: &BranchParametrization, i: usize, cap: u32) -> Polynomial<Rational> {
    Polynomial::from_terms(
        1,
        gamma.coord(i).iter().enumerate().filter(|(k, _)| *k as u32 <= cap).map(|(k, c)| (vec![k as u32], c.clone())),
    )
}

/// Series of the divisorial filtrations of a [`BranchFamily`] against the series of
/// `val_C`, computed as ranks of coefficient maps on polynomials of degree
/// `≤ order`. The limit is `Σ_{s ∈ Γ} t^s` for the value semigroup `Γ`.
pub fn branch_series_family(
    gamma: &BranchParametrization,
    tie: TieBreak,
    order: u64,
    m_max: u32,
) -> Result<SeriesFamily, LimitsError> {
    if gamma.dim() != 2 {
        return Err(crate::blowup::BlowupError::NotPlane(gamma.dim()).into());
    }
    if gamma.precision() < order + 1 {
        return Err(crate::blowup::BlowupError::InsufficientPrecision {
            precision: gamma.precision(),
        }
        .into());
    }
    let fam = BranchFamily::with_tie(gamma.clone(), tie)?;
    let mut members = BTreeMap::new();
    for m in 0..=m_max {
        members.insert(m, branch_member(&fam.script(m)?, order)?);
    }

    let cap = order as u32;
    let x = branch_coordinate(gamma, 0, cap);
    let y = branch_coordinate(gamma, 1, cap);
    let images = monomial_images(&x, &y, order, 0);
    let dims = quotient_dims(&images, order, |e, l| (e[0] as u64) < l);
    Ok(SeriesFamily {
        description: "plane branch".into(),
        members,
        limit: series_from_dims(&dims, order)?,
        bound_offset: 1,
    })
}

fn branch_member(script: &BlowupScript, order: u64) -> Result<TruncatedSeries<Integer>, LimitsError> {
    let u = script.exceptional_var()?;
    let x = script.pullback_exact(&Polynomial::var(2, 0))?;
    let y = script.pullback_exact(&Polynomial::var(2, 1))?;
    let images = monomial_images(&x, &y, order, u);
    let dims = quotient_dims(&images, order, |e, l| (e[u] as u64) < l);
    series_from_dims(&dims, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn dense(s: &TruncatedSeries<Integer>, n: u64) -> Vec<i64> {
        s.dense_coeffs(n).iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn toric_profile() {
        let cone = Cone2D::cyclic_quotient(5, 2).unwrap();
        let fam = toric_series_family(&cone, 10, 12).unwrap();
        let rep = check_series_convergence(&fam, 10).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
        assert!(rep.lines.iter().all(|l| l.limit == vec![Integer::one()]));
    }

    #[test]
    fn quadric_profile() {
        let fam = quadric_series_family(10, 12).unwrap();
        let rep = check_series_convergence(&fam, 10).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
        let expected: Vec<_> = (0..=10u32).map(|l| Some(l.saturating_sub(1))).collect();
        assert_eq!(rep.profile(), expected);
        assert_eq!(dense(&fam.limit, 4), [1, 3, 5, 7, 9]);
        let trivial = check_series_convergence(&quadric_series_family(0, 0).unwrap(), 0).unwrap();
        assert!(trivial.passed());
        assert_eq!(trivial.to_text().lines().next().unwrap(), "l=0 limit=1 first_m=0 bound=0 ok");
    }

    #[test]
    fn constant_family() {
        let s = quadric_series_family(6, 0).unwrap().members[&0].clone();
        let fam = SeriesFamily {
            description: "constant".into(),
            members: (0..=6).map(|m| (m, s.clone())).collect(),
            limit: s,
            bound_offset: 0,
        };
        let rep = check_series_convergence(&fam, 6).unwrap();
        assert!(rep.profile().iter().all(|m| *m == Some(0)));
    }

    #[test]
    fn missing_member_and_violation() {
        let mut fam = quadric_series_family(5, 5).unwrap();
        fam.members.remove(&3);
        assert_eq!(check_series_convergence(&fam, 5).unwrap_err(), LimitsError::MissingMember(3));
        let mut fam = quadric_series_family(5, 5).unwrap();
        fam.members.insert(2, quadric_series_family(5, 0).unwrap().members[&0].clone());
        let rep = check_series_convergence(&fam, 5).unwrap();
        // member 2 is P_0, which differs at degree 2
        assert_eq!(rep.lines[2].first_m, Some(3));
        assert!(!rep.passed());
    }

    #[test]
    fn cusp_semigroup() {
        let r = |n: i64| Rational::from_integer(n.into());
        let gamma = BranchParametrization::from_pairs(&[vec![(2, r(1))], vec![(3, r(1))]], 40).unwrap();
        let fam = branch_series_family(&gamma, TieBreak::First, 8, 9).unwrap();
        assert_eq!(dense(&fam.limit, 8), [1, 0, 1, 1, 1, 1, 1, 1, 1]);
        // the resolution divisor is monomial with weights (2, 3)
        assert_eq!(dense(&fam.members[&0], 8), [1, 0, 1, 1, 1, 1, 2, 1, 2]);
        let rep = check_series_convergence(&fam, 8).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
        let firsts: Vec<_> = rep.lines.iter().map(|l| l.first_m.unwrap()).collect();
        assert_eq!(firsts, [0, 0, 0, 0, 0, 0, 1, 2, 3]);
    }
}
