use std::collections::BTreeMap;
use std::ops::Bound;

use super::exponent::{minimal_denom, scaled_cap, Exponent, ScaledExp};
use super::SeriesError;
use crate::scalar::{lcm_u64, Coeff, Rat};

/// A sparse multivariate power series known up to total degree `order`.
///
/// Terms above the truncation order are never stored, zero coefficients are
/// never stored, and all exponents share one denominator, kept minimal so that
/// structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    vars: usize,
    order: Rat,
    denom: u64,
    terms: BTreeMap<ScaledExp, C>,
}

/// Result of comparing two series on a common region.
#[derive(Clone, Debug, PartialEq)]
pub enum Agreement<C> {
    Equal,
    /// First disagreeing exponent in (total degree, lexicographic) order.
    Differ {
        exponent: Exponent,
        left: C,
        right: C,
    },
}

impl<C> Agreement<C> {
    pub fn is_equal(&self) -> bool {
        matches!(self, Agreement::Equal)
    }
}

/// A linear bound `eliminated ≤ slope · remaining + offset` on the degrees of
/// every term of the untruncated series, split into the variables that are
/// specialized away and the ones that remain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportBound {
    pub slope: Rat,
    pub offset: Rat,
}

impl SupportBound {
    pub fn new(slope: Rat, offset: Rat) -> Self {
        Self { slope, offset }
    }

    /// For a series that is an honest polynomial whose eliminated degree never
    /// exceeds `max_eliminated`.
    pub fn polynomial(max_eliminated: Rat) -> Self {
        Self::new(Rat::from_integer(0), max_eliminated)
    }

    /// Input truncation order needed to specialize soundly up to `out_order`.
    pub fn required_order(&self, out_order: Rat) -> Rat {
        out_order * (Rat::from_integer(1) + self.slope) + self.offset
    }
}

fn check_order(order: Rat) -> Result<(), SeriesError> {
    if order < Rat::from_integer(0) {
        return Err(SeriesError::NegativeOrder(order.to_string()));
    }
    Ok(())
}

pub(crate) fn add_into<C: Coeff>(map: &mut BTreeMap<ScaledExp, C>, key: ScaledExp, value: C) {
    let slot = map.entry(key).or_insert_with(C::zero);
    let old = std::mem::replace(slot, C::zero());
    *slot = old + value;
}

/// Multiplies the map in place by `1/(1 - t^step)`, keeping degrees `≤ cap`.
pub(crate) fn mul_geometric<C: Coeff>(map: &mut BTreeMap<ScaledExp, C>, step: &ScaledExp, cap: u64) {
    debug_assert!(step.degree() > 0);
    let mut cursor = match map.keys().next() {
        Some(k) => k.clone(),
        None => return,
    };
    let mut first = true;
    loop {
        let next = if first {
            first = false;
            map.range(cursor.clone()..).next()
        } else {
            map.range((Bound::Excluded(cursor.clone()), Bound::Unbounded)).next()
        };
        let (key, value) = match next {
            Some((k, v)) => (k.clone(), v.clone()),
            None => break,
        };
        let shifted = key.add(step);
        if shifted.degree() <= cap && !value.is_zero() {
            add_into(map, shifted, value);
        }
        cursor = key;
    }
    map.retain(|_, v| !v.is_zero());
}

impl<C: Coeff> TruncatedSeries<C> {
    pub fn zero(vars: usize, order: Rat) -> Result<Self, SeriesError> {
        check_order(order)?;
        if vars == 0 {
            return Err(SeriesError::NoVariables);
        }
        Ok(Self {
            vars,
            order,
            denom: 1,
            terms: BTreeMap::new(),
        })
    }

    pub fn one(vars: usize, order: Rat) -> Result<Self, SeriesError> {
        Self::monomial(vars, order, Exponent::zero(vars), C::one())
    }

    pub fn monomial(vars: usize, order: Rat, exponent: Exponent, coeff: C) -> Result<Self, SeriesError> {
        Self::from_terms(vars, order, [(exponent, coeff)])
    }

    /// Collects terms, summing repeated exponents and dropping everything
    /// above `order`.
    pub fn from_terms<I>(vars: usize, order: Rat, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Exponent, C)>,
    {
        check_order(order)?;
        if vars == 0 {
            return Err(SeriesError::NoVariables);
        }
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
        Ok(Self::from_scaled_map(vars, order, denom, map))
    }

    pub(crate) fn from_scaled_map(vars: usize, order: Rat, denom: u64, mut map: BTreeMap<ScaledExp, C>) -> Self {
        let cap = scaled_cap(order, denom);
        map.retain(|k, v| k.degree() <= cap && !v.is_zero());
        let d = minimal_denom(map.keys(), denom);
        let terms = if d == denom {
            map
        } else {
            let f = denom / d;
            map.into_iter()
                .map(|(k, v)| (ScaledExp(k.0.iter().map(|n| n / f).collect()), v))
                .collect()
        };
        Self {
            vars,
            order,
            denom: d,
            terms,
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> Rat {
        self.order
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero` is the emptiness test
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in (total degree, lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &C)> + '_ {
        self.terms.iter().map(|(k, v)| (k.to_exponent(self.denom), v))
    }

    pub fn coeff(&self, exponent: &Exponent) -> C {
        if exponent.vars() != self.vars || !self.denom.is_multiple_of(exponent.denom()) {
            return C::zero();
        }
        self.terms
            .get(&exponent.scaled_to(self.denom))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Coefficient of `t^k` in a one-variable series.
    pub fn coeff_at(&self, k: u64) -> C {
        self.coeff(&Exponent::integral(&[k]))
    }

    pub(crate) fn scaled_terms(&self, d: u64) -> BTreeMap<ScaledExp, C> {
        debug_assert_eq!(d % self.denom, 0);
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

    /// Lowers the truncation order.
    pub fn truncate(&self, order: Rat) -> Result<Self, SeriesError> {
        check_order(order)?;
        if order > self.order {
            return Err(SeriesError::OrderExceeded {
                requested: order.to_string(),
                available: self.order.to_string(),
            });
        }
        Ok(Self::from_scaled_map(self.vars, order, self.denom, self.terms.clone()))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_vars(other)?;
        let d = lcm_u64(self.denom, other.denom);
        let mut map = self.scaled_terms(d);
        for (k, v) in other.scaled_terms(d) {
            add_into(&mut map, k, v);
        }
        Ok(Self::from_scaled_map(self.vars, self.order.min(other.order), d, map))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let map = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), v.clone() * c.clone()))
            .collect();
        Self::from_scaled_map(self.vars, self.order, self.denom, map)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_vars(other)?;
        let d = lcm_u64(self.denom, other.denom);
        let order = self.order.min(other.order);
        let cap = scaled_cap(order, d);
        let a = self.scaled_terms(d);
        let b = other.scaled_terms(d);
        let mut out = BTreeMap::new();
        for (ka, ca) in &a {
            let da = ka.degree();
            if da > cap {
                break;
            }
            for (kb, cb) in &b {
                if da + kb.degree() > cap {
                    break;
                }
                add_into(&mut out, ka.add(kb), ca.clone() * cb.clone());
            }
        }
        Ok(Self::from_scaled_map(self.vars, order, d, out))
    }

    /// Keeps exactly the terms whose exponents are all integers.
    pub fn integral_part(&self) -> Self {
        let d = self.denom;
        let map = self
            .terms
            .iter()
            .filter(|(k, _)| k.0.iter().all(|n| n % d == 0))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Self::from_scaled_map(self.vars, self.order, d, map)
    }

    /// Sets `t_var = 1`, summing over the eliminated exponent.
    pub fn specialize_to_one(&self, var: usize, out_order: Rat, bound: &SupportBound) -> Result<Self, SeriesError> {
        self.specialize_vars_to_one(&[var], out_order, bound)
    }

    /// Sets every variable in `eliminate` to 1.
    ///
    /// `bound` must hold for the untruncated series the receiver approximates;
    /// the call fails unless the truncation order covers every term that can
    /// contribute below `out_order`.
    pub fn specialize_vars_to_one(&self, eliminate: &[usize], out_order: Rat, bound: &SupportBound) -> Result<Self, SeriesError> {
        check_order(out_order)?;
        let mut dropped = vec![false; self.vars];
        for &v in eliminate {
            if v >= self.vars {
                return Err(SeriesError::InvalidVariable { index: v, vars: self.vars });
            }
            dropped[v] = true;
        }
        let kept = dropped.iter().filter(|d| !**d).count();
        if kept == 0 {
            return Err(SeriesError::NoVariables);
        }
        let needed = bound.required_order(out_order);
        if needed > self.order {
            return Err(SeriesError::UnsoundSpecialization {
                needed: needed.to_string(),
                available: self.order.to_string(),
            });
        }
        let d = self.denom;
        let out_cap = scaled_cap(out_order, d);
        let mut map = BTreeMap::new();
        for (k, v) in &self.terms {
            let (mut rem, mut elim) = (0u64, 0u64);
            let mut key = Vec::with_capacity(kept);
            for (i, &n) in k.0.iter().enumerate() {
                if dropped[i] {
                    elim += n;
                } else {
                    rem += n;
                    key.push(n);
                }
            }
            let r = Rat::new(rem as i64, d as i64);
            let e = Rat::new(elim as i64, d as i64);
            if e > bound.slope * r + bound.offset {
                return Err(SeriesError::SupportBoundViolated(k.to_exponent(d).to_string()));
            }
            if rem <= out_cap {
                add_into(&mut map, ScaledExp(key), v.clone());
            }
        }
        Ok(Self::from_scaled_map(kept, out_order, d, map))
    }

    /// Compares coefficients of total degree `≤ order`.
    pub fn equal_up_to(&self, other: &Self, order: Rat) -> Result<Agreement<C>, SeriesError> {
        self.check_vars(other)?;
        let available = self.order.min(other.order);
        if order > available {
            return Err(SeriesError::OrderExceeded {
                requested: order.to_string(),
                available: available.to_string(),
            });
        }
        let d = lcm_u64(self.denom, other.denom);
        let cap = scaled_cap(order, d);
        let a = self.scaled_terms(d);
        let b = other.scaled_terms(d);
        let mut keys: Vec<&ScaledExp> = a.keys().chain(b.keys()).filter(|k| k.degree() <= cap).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let l = a.get(k).cloned().unwrap_or_else(C::zero);
            let r = b.get(k).cloned().unwrap_or_else(C::zero);
            if l != r {
                return Ok(Agreement::Differ {
                    exponent: k.to_exponent(d),
                    left: l,
                    right: r,
                });
            }
        }
        Ok(Agreement::Equal)
    }

    /// Coefficients `c_0..=c_n` of a one-variable series with integral exponents.
    pub fn dense_coeffs(&self, n: u64) -> Vec<C> {
        (0..=n).map(|k| self.coeff_at(k)).collect()
    }
}
