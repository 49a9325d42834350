use std::collections::BTreeMap;
use std::fmt;

use super::exponent::{fmt_rat, minimal_denom, scaled_cap, Exponent, ScaledExp};
use super::truncated::{add_into, mul_geometric, SupportBound, TruncatedSeries};
use super::SeriesError;
use crate::scalar::{lcm_u64, Coeff, Rat};

/// A finite sum of monomials with nonnegative rational exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentPolynomial<C> {
    vars: usize,
    denom: u64,
    terms: BTreeMap<ScaledExp, C>,
}

impl<C: Coeff> ExponentPolynomial<C> {
    pub fn zero(vars: usize) -> Self {
        Self {
            vars,
            denom: 1,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: C) -> Self {
        Self::from_scaled_map(vars, 1, BTreeMap::from([(ScaledExp::zero(vars), c)]))
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn monomial(exponent: &Exponent, c: C) -> Self {
        Self::from_scaled_map(
            exponent.vars(),
            exponent.denom(),
            BTreeMap::from([(exponent.scaled_to(exponent.denom()), c)]),
        )
    }

    /// `1 - t^a`.
    pub fn one_minus(a: &Exponent) -> Self {
        Self::one(a.vars()).sub(&Self::monomial(a, C::one()))
    }

    pub fn from_terms<I>(vars: usize, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Exponent, C)>,
    {
        let terms: Vec<(Exponent, C)> = terms.into_iter().collect();
        let mut denom = 1;
        for (e, _) in &terms {
            if e.vars() != vars {
                return Err(SeriesError::VarCountMismatch {
                    left: vars,
                    right: e.vars(),
                });
            }
            denom = lcm_u64(denom, e.denom());
        }
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            add_into(&mut map, e.scaled_to(denom), c);
        }
        Ok(Self::from_scaled_map(vars, denom, map))
    }

    pub(crate) fn from_scaled_map(vars: usize, denom: u64, mut map: BTreeMap<ScaledExp, C>) -> Self {
        map.retain(|_, v| !v.is_zero());
        let d = minimal_denom(map.keys(), denom);
        let f = denom / d;
        let terms = if f == 1 {
            map
        } else {
            map.into_iter()
                .map(|(k, v)| (ScaledExp(k.0.iter().map(|n| n / f).collect()), v))
                .collect()
        };
        Self { vars, denom: d, terms }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero` is the emptiness test
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &C)> + '_ {
        self.terms.iter().map(|(k, v)| (k.to_exponent(self.denom), v))
    }

    pub fn coeff(&self, e: &Exponent) -> C {
        if e.vars() != self.vars || !self.denom.is_multiple_of(e.denom()) {
            return C::zero();
        }
        self.terms.get(&e.scaled_to(self.denom)).cloned().unwrap_or_else(C::zero)
    }

    pub(crate) fn scaled_terms(&self, d: u64) -> BTreeMap<ScaledExp, C> {
        let f = d / self.denom;
        self.terms.iter().map(|(k, v)| (k.scale(f), v.clone())).collect()
    }

    fn check_vars(&self, other: &Self) -> Result<(), SeriesError> {
        if self.vars != other.vars {
            return Err(SeriesError::VarCountMismatch {
                left: self.vars,
                right: other.vars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other).expect("polynomials over different variable sets");
        let d = lcm_u64(self.denom, other.denom);
        let mut map = self.scaled_terms(d);
        for (k, v) in other.scaled_terms(d) {
            add_into(&mut map, k, v);
        }
        Self::from_scaled_map(self.vars, d, map)
    }

    pub fn neg(&self) -> Self {
        let map = self.terms.iter().map(|(k, v)| (k.clone(), -v.clone())).collect();
        Self::from_scaled_map(self.vars, self.denom, map)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other).expect("polynomials over different variable sets");
        let d = lcm_u64(self.denom, other.denom);
        let a = self.scaled_terms(d);
        let b = other.scaled_terms(d);
        let mut map = BTreeMap::new();
        for (ka, ca) in &a {
            for (kb, cb) in &b {
                add_into(&mut map, ka.add(kb), ca.clone() * cb.clone());
            }
        }
        Self::from_scaled_map(self.vars, d, map)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.vars), |acc, _| acc.mul(self))
    }

    /// The polynomial as a series truncated at `order`.
    pub fn to_series(&self, order: Rat) -> Result<TruncatedSeries<C>, SeriesError> {
        if order < Rat::from_integer(0) {
            return Err(SeriesError::NegativeOrder(order.to_string()));
        }
        Ok(TruncatedSeries::from_scaled_map(self.vars, order, self.denom, self.terms.clone()))
    }

    /// `Some(a)` when the polynomial is exactly `1 - t^a` with `a ≠ 0`.
    pub fn as_one_minus(&self) -> Option<Exponent> {
        if self.terms.len() != 2 {
            return None;
        }
        let mut it = self.terms.iter();
        let (k0, c0) = it.next()?;
        let (k1, c1) = it.next()?;
        (k0.degree() == 0 && *c0 == C::one() && *c1 == -C::one()).then(|| k1.to_exponent(self.denom))
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let mono = fmt_monomial(&k.to_exponent(self.denom), names);
            let cs = c.to_string();
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            let body = match (mono.is_empty(), mag.as_str()) {
                (true, _) => mag.clone(),
                (false, "1") => mono,
                (false, _) if mag.contains('/') => format!("({mag})*{mono}"),
                (false, _) => format!("{mag}*{mono}"),
            };
            match (i, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }
}

/// Variable names used when printing: `t`, then `t, s`, then `t1..tk`.
pub fn default_var_names(k: usize) -> Vec<String> {
    match k {
        1 => vec!["t".into()],
        2 => vec!["t".into(), "s".into()],
        _ => (1..=k).map(|i| format!("t{i}")).collect(),
    }
}

pub(crate) fn fmt_monomial(e: &Exponent, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, c) in e.components().iter().enumerate() {
        if *c.numer() == 0 {
            continue;
        }
        let name = &names[i];
        if *c == Rat::from_integer(1) {
            parts.push(name.clone());
        } else if *c.denom() == 1 {
            parts.push(format!("{name}^{}", c.numer()));
        } else {
            parts.push(format!("{name}^({})", fmt_rat(c)));
        }
    }
    parts.join("*")
}

/// `numerator / ∏ (1 - t^a)^μ` in canonical form: factors sorted by exponent
/// with merged multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalExpr<C> {
    numerator: ExponentPolynomial<C>,
    factors: BTreeMap<Exponent, u32>,
}

impl<C: Coeff> RationalExpr<C> {
    pub fn new<I>(numerator: ExponentPolynomial<C>, factors: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Exponent, u32)>,
    {
        let mut merged = BTreeMap::new();
        for (a, mult) in factors {
            if a.vars() != numerator.vars() {
                return Err(SeriesError::VarCountMismatch {
                    left: numerator.vars(),
                    right: a.vars(),
                });
            }
            if a.is_zero() {
                return Err(SeriesError::ZeroDenominatorFactor);
            }
            if mult > 0 {
                *merged.entry(a).or_insert(0) += mult;
            }
        }
        Ok(Self {
            numerator,
            factors: merged,
        })
    }

    pub fn polynomial(p: ExponentPolynomial<C>) -> Self {
        Self {
            numerator: p,
            factors: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.numerator.vars()
    }

    pub fn numerator(&self) -> &ExponentPolynomial<C> {
        &self.numerator
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Exponent, u32)> + '_ {
        self.factors.iter().map(|(e, m)| (e, *m))
    }

    /// Formal expansion truncated at total degree `≤ order`, each
    /// `(1 - t^a)^{-1}` read as `Σ_j t^{ja}`.
    pub fn expand(&self, order: Rat) -> Result<TruncatedSeries<C>, SeriesError> {
        if order < Rat::from_integer(0) {
            return Err(SeriesError::NegativeOrder(order.to_string()));
        }
        if self.factors.keys().any(Exponent::is_zero) {
            return Err(SeriesError::ZeroDenominatorFactor);
        }
        let d = self
            .factors
            .keys()
            .fold(self.numerator.denom(), |d, a| lcm_u64(d, a.denom()));
        let cap = scaled_cap(order, d);
        let mut map = self.numerator.scaled_terms(d);
        map.retain(|k, _| k.degree() <= cap);
        for (a, &mult) in &self.factors {
            let step = a.scaled_to(d);
            for _ in 0..mult {
                mul_geometric(&mut map, &step, cap);
            }
        }
        Ok(TruncatedSeries::from_scaled_map(self.vars(), order, d, map))
    }

    /// `∏ (1 - t^a)^μ` multiplied out.
    pub fn denominator_polynomial(&self) -> ExponentPolynomial<C> {
        self.factors
            .iter()
            .fold(ExponentPolynomial::one(self.vars()), |acc, (a, &m)| {
                acc.mul(&ExponentPolynomial::one_minus(a).pow(m))
            })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (a, &m) in &other.factors {
            *factors.entry(a.clone()).or_insert(0) += m;
        }
        Self {
            numerator: self.numerator.mul(&other.numerator),
            factors,
        }
    }

    pub fn mul_polynomial(&self, p: &ExponentPolynomial<C>) -> Self {
        Self {
            numerator: self.numerator.mul(p),
            factors: self.factors.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            numerator: self.numerator.neg(),
            factors: self.factors.clone(),
        }
    }

    /// Sum over the least common multiple of the two factor multisets.
    pub fn add(&self, other: &Self) -> Self {
        let mut lcm = self.factors.clone();
        for (a, &m) in &other.factors {
            let e = lcm.entry(a.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let cofactor = |own: &BTreeMap<Exponent, u32>| {
            lcm.iter().fold(ExponentPolynomial::one(self.vars()), |acc, (a, &m)| {
                let have = own.get(a).copied().unwrap_or(0);
                acc.mul(&ExponentPolynomial::one_minus(a).pow(m - have))
            })
        };
        let numerator = self
            .numerator
            .mul(&cofactor(&self.factors))
            .add(&other.numerator.mul(&cofactor(&other.factors)));
        Self {
            numerator,
            factors: lcm,
        }
    }

    /// Equality as rational functions, decided by cross-multiplication.
    pub fn equals_as_rational(&self, other: &Self) -> bool {
        self.numerator.mul(&other.denominator_polynomial()) == other.numerator.mul(&self.denominator_polynomial())
    }

    /// Degree bound for specializing the variables in `eliminate` to one,
    /// valid for every term of the expansion.
    pub fn support_bound(&self, eliminate: &[usize]) -> Result<SupportBound, SeriesError> {
        let split = |e: &Exponent| {
            let (mut kept, mut elim) = (Rat::from_integer(0), Rat::from_integer(0));
            for (i, c) in e.components().into_iter().enumerate() {
                if eliminate.contains(&i) {
                    elim += c;
                } else {
                    kept += c;
                }
            }
            (kept, elim)
        };
        let mut slope = Rat::from_integer(0);
        for a in self.factors.keys() {
            let (kept, elim) = split(a);
            if kept == Rat::from_integer(0) {
                return Err(SeriesError::NotSpecializable(a.to_string()));
            }
            slope = slope.max(elim / kept);
        }
        let offset = self
            .numerator
            .terms()
            .map(|(e, _)| {
                let (kept, elim) = split(&e);
                elim - slope * kept
            })
            .max()
            .unwrap_or_else(|| Rat::from_integer(0));
        Ok(SupportBound::new(slope, offset))
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.factors.is_empty() {
            return self.numerator.display_with(names);
        }
        let num = if self.numerator.len() <= 1 {
            self.numerator.display_with(names)
        } else {
            format!("({})", self.numerator.display_with(names))
        };
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(a, &m)| {
                let base = format!("(1 - {})", fmt_monomial(a, names));
                if m == 1 {
                    base
                } else {
                    format!("{base}^{m}")
                }
            })
            .collect();
        let den = if parts.len() == 1 {
            parts[0].clone()
        } else {
            format!("({})", parts.concat())
        };
        format!("{num}/{den}")
    }
}

impl<C: Coeff> fmt::Display for RationalExpr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_var_names(self.vars())))
    }
}

impl<C: Coeff> fmt::Display for ExponentPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&default_var_names(self.vars())))
    }
}
