//! Reader for the closed-form notation printed by `RationalExpr::display_with`,
//! e.g. `(1 + t^4)/((1 - t)(1 - t^17))` or `1/(1 - t^(2/5)*s^(1/5))`.

use std::collections::BTreeMap;
use std::str::FromStr;

use super::exponent::Exponent;
use super::expr::{ExponentPolynomial, RationalExpr};
use crate::scalar::{Coeff, Rat};
use crate::text::{Cursor, ParseError, Tok};

/// `poly · ∏ (1 - t^a)^{n_a}` with signed integer multiplicities.
#[derive(Clone)]
struct Sym<C> {
    poly: ExponentPolynomial<C>,
    binomials: BTreeMap<Exponent, i64>,
}

impl<C: Coeff> Sym<C> {
    fn poly(poly: ExponentPolynomial<C>) -> Self {
        Self {
            poly,
            binomials: BTreeMap::new(),
        }
    }

    fn into_expr(self) -> RationalExpr<C> {
        let mut numerator = self.poly;
        let mut factors = Vec::new();
        for (a, n) in self.binomials {
            if n > 0 {
                numerator = numerator.mul(&ExponentPolynomial::one_minus(&a).pow(n as u32));
            } else {
                factors.push((a, (-n) as u32));
            }
        }
        RationalExpr::new(numerator, factors).expect("factor exponents are nonzero by construction")
    }

    fn from_expr(e: RationalExpr<C>) -> Self {
        let binomials = e.factors().map(|(a, m)| (a.clone(), -(m as i64))).collect();
        Self {
            poly: e.numerator().clone(),
            binomials,
        }
    }

    /// Recognizes a bare `1 - t^a` or `t^a - 1` as a binomial factor.
    fn recognize(mut self) -> Self {
        if !self.binomials.is_empty() {
            return self;
        }
        let vars = self.poly.vars();
        if let Some(a) = self.poly.as_one_minus() {
            self.poly = ExponentPolynomial::one(vars);
            self.binomials.insert(a, 1);
        } else if let Some(a) = self.poly.neg().as_one_minus() {
            self.poly = ExponentPolynomial::constant(vars, -C::one());
            self.binomials.insert(a, 1);
        }
        self
    }

    fn mul(&self, other: &Self) -> Self {
        let mut binomials = self.binomials.clone();
        for (a, n) in &other.binomials {
            *binomials.entry(a.clone()).or_insert(0) += n;
        }
        binomials.retain(|_, n| *n != 0);
        Self {
            poly: self.poly.mul(&other.poly),
            binomials,
        }
    }

    fn pow(&self, k: u32) -> Self {
        Self {
            poly: self.poly.pow(k),
            binomials: self.binomials.iter().map(|(a, n)| (a.clone(), n * k as i64)).collect(),
        }
    }

    fn add(self, other: Self) -> Self {
        Self::from_expr(self.into_expr().add(&other.into_expr()))
    }

    fn div(&self, other: &Self) -> Option<Self> {
        let vars = other.poly.vars();
        let sign = if other.poly == ExponentPolynomial::one(vars) {
            C::one()
        } else if other.poly == ExponentPolynomial::constant(vars, -C::one()) {
            -C::one()
        } else {
            return None;
        };
        let inv = Self {
            poly: ExponentPolynomial::constant(vars, sign),
            binomials: other.binomials.iter().map(|(a, n)| (a.clone(), -n)).collect(),
        };
        Some(self.mul(&inv))
    }
}

struct Parser<'a, C> {
    cur: Cursor,
    names: &'a [String],
    _c: std::marker::PhantomData<C>,
}

impl<C: Coeff + FromStr> Parser<'_, C> {
    fn vars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Sym<C>, ParseError> {
        let negate = if self.cur.eat(&Tok::Minus) {
            true
        } else {
            self.cur.eat(&Tok::Plus);
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc.poly = acc.poly.neg();
        }
        loop {
            if self.cur.eat(&Tok::Plus) {
                let t = self.term()?;
                acc = acc.add(t);
            } else if self.cur.eat(&Tok::Minus) {
                let mut t = self.term()?;
                t.poly = t.poly.neg();
                acc = acc.add(t);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Sym<C>, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.cur.peek() {
                Some(Tok::Star) => {
                    self.cur.bump();
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Slash) => {
                    self.cur.bump();
                    let col = self.cur.column();
                    let d = self.power()?;
                    acc = acc.div(&d).ok_or_else(|| {
                        ParseError::new(col, "only products of (1 - monomial) factors may appear in a denominator")
                    })?;
                }
                Some(Tok::LParen) | Some(Tok::Ident(_)) => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Sym<C>, ParseError> {
        match self.cur.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.cur.bump();
                let idx = self
                    .names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| self.cur.error(format!("unknown variable {name}")))?;
                let e = if self.cur.eat(&Tok::Caret) {
                    self.rational_exponent()?
                } else {
                    Rat::from_integer(1)
                };
                let mut comps = vec![Rat::from_integer(0); self.vars()];
                comps[idx] = e;
                let exp = Exponent::new(&comps).map_err(|e| self.cur.error(e.to_string()))?;
                Ok(Sym::poly(ExponentPolynomial::monomial(&exp, C::one())))
            }
            Some(Tok::Num(n)) => {
                self.cur.bump();
                let c: C = n.parse().map_err(|_| self.cur.error("bad coefficient"))?;
                let base = Sym::poly(ExponentPolynomial::constant(self.vars(), c));
                self.integer_power(base)
            }
            Some(Tok::LParen) => {
                self.cur.bump();
                let inner = self.expr()?;
                self.cur.expect(&Tok::RParen)?;
                self.integer_power(inner.recognize())
            }
            _ => Err(self.cur.error("expected a number, variable or '('")),
        }
    }

    fn integer_power(&mut self, base: Sym<C>) -> Result<Sym<C>, ParseError> {
        if self.cur.eat(&Tok::Caret) {
            let k = self.cur.number()?;
            Ok(base.pow(k as u32))
        } else {
            Ok(base)
        }
    }

    fn rational_exponent(&mut self) -> Result<Rat, ParseError> {
        if self.cur.eat(&Tok::LParen) {
            let n = self.cur.number()?;
            let d = if self.cur.eat(&Tok::Slash) { self.cur.number()? } else { 1 };
            self.cur.expect(&Tok::RParen)?;
            if d == 0 {
                return Err(self.cur.error("zero denominator in exponent"));
            }
            Ok(Rat::new(n as i64, d as i64))
        } else {
            Ok(Rat::from_integer(self.cur.number()? as i64))
        }
    }
}

/// Parses a closed-form rational expression over the named variables.
pub fn parse_rational_expr<C: Coeff + FromStr>(input: &str, names: &[String]) -> Result<RationalExpr<C>, ParseError> {
    let mut p = Parser {
        cur: Cursor::new(input)?,
        names,
        _c: std::marker::PhantomData,
    };
    let sym = p.expr()?;
    if !p.cur.at_end() {
        return Err(p.cur.error("trailing input"));
    }
    Ok(sym.into_expr())
}
