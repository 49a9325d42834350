use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::scalar::Coeff;
use crate::text::{Cursor, ParseError, Tok};
use crate::Rational;

/// A polynomial in `vars` variables, stored as exponent vector → coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<C> {
    vars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

/// `x, y, z, w` for up to four variables, `x1, ..., xn` beyond that.
pub fn poly_var_names(vars: usize) -> Vec<String> {
    if vars <= 4 {
        ["x", "y", "z", "w"][..vars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=vars).map(|i| format!("x{i}")).collect()
    }
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero(vars: usize) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: C) -> Self {
        Self::monomial(vec![0; vars], c)
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn var(vars: usize, i: usize) -> Self {
        assert!(i < vars, "variable {i} out of range");
        let mut e = vec![0; vars];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    pub fn monomial(exponent: Vec<u32>, c: C) -> Self {
        let mut p = Self::zero(exponent.len());
        if !c.is_zero() {
            p.terms.insert(exponent, c);
        }
        p
    }

    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, C)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: C) {
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero` is the emptiness test
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// Largest `a` with `x_i^a` dividing the polynomial; `None` for zero.
    pub fn order_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).min()
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials in different variable counts");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.vars, self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = Self::zero(self.vars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(e, x.clone() * y.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.vars), |acc, _| acc.mul(self))
    }

    /// Composition `f(images[0], ..., images[n-1])`; all images share one
    /// variable count, which becomes the result's.
    pub fn substitute(&self, images: &[Polynomial<C>]) -> Self {
        assert_eq!(images.len(), self.vars, "one image per variable");
        let target = images.first().map(|p| p.vars).unwrap_or(0);
        let mut powers: Vec<Vec<Polynomial<C>>> = images.iter().map(|p| vec![Self::one(p.vars)]).collect();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let (negative, mag) = split_sign(c);
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{k}", names[i]) })
                .collect();
            let body = match (mag.as_str(), mono.is_empty()) {
                (m, true) => m.to_string(),
                ("1", false) => mono.join("*"),
                (m, false) if m.contains('/') => format!("({m})*{}", mono.join("*")),
                (m, false) => format!("{m}*{}", mono.join("*")),
            };
            match (n, negative) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
                (_, true) => out.push_str(&format!(" - {body}")),
            }
        }
        out
    }
}

fn split_sign<C: Coeff>(c: &C) -> (bool, String) {
    let s = c.to_string();
    match s.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, s),
    }
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&poly_var_names(self.vars)))
    }
}

fn var_index(name: &str, vars: usize) -> Option<usize> {
    let alias = ["x", "y", "z", "w"].iter().position(|a| *a == name);
    let i = match alias {
        Some(i) => i,
        None => name.strip_prefix('x')?.parse::<usize>().ok()?.checked_sub(1)?,
    };
    (i < vars).then_some(i)
}

/// Parses an infix polynomial over the rationals: integers, variables
/// `x, y, z, w` or `x1, ..., xn`, `+ - * ^`, parentheses, and division by
/// nonzero constants.
pub fn parse_polynomial(input: &str, vars: usize) -> Result<Polynomial<Rational>, ParseError> {
    let mut cur = Cursor::new(input)?;
    if cur.at_end() {
        return Err(cur.error("empty polynomial"));
    }
    let p = sum(&mut cur, vars)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(p)
}

fn sum(cur: &mut Cursor, vars: usize) -> Result<Polynomial<Rational>, ParseError> {
    let mut acc = product(cur, vars)?;
    loop {
        if cur.eat(&Tok::Plus) {
            acc = acc.add(&product(cur, vars)?);
        } else if cur.eat(&Tok::Minus) {
            acc = acc.sub(&product(cur, vars)?);
        } else {
            return Ok(acc);
        }
    }
}

fn product(cur: &mut Cursor, vars: usize) -> Result<Polynomial<Rational>, ParseError> {
    let mut acc = unary(cur, vars)?;
    loop {
        match cur.peek() {
            Some(Tok::Star) => {
                cur.bump();
                acc = acc.mul(&unary(cur, vars)?);
            }
            Some(Tok::Slash) => {
                cur.bump();
                let col = cur.column();
                let d = power(cur, vars)?;
                let c = match (d.len(), d.degree()) {
                    (1, Some(0)) => d.coeff(&vec![0; vars]),
                    _ => return Err(ParseError::new(col, "division only by a nonzero constant")),
                };
                acc = acc.scale(&(Rational::one() / c));
            }
            Some(Tok::Ident(_)) | Some(Tok::LParen) => acc = acc.mul(&power(cur, vars)?),
            _ => return Ok(acc),
        }
    }
}

fn unary(cur: &mut Cursor, vars: usize) -> Result<Polynomial<Rational>, ParseError> {
    if cur.eat(&Tok::Minus) {
        return Ok(unary(cur, vars)?.neg());
    }
    cur.eat(&Tok::Plus);
    power(cur, vars)
}

fn power(cur: &mut Cursor, vars: usize) -> Result<Polynomial<Rational>, ParseError> {
    let base = atom(cur, vars)?;
    if cur.eat(&Tok::Caret) {
        let k = cur.number()?;
        let k = u32::try_from(k).map_err(|_| cur.error("exponent too large"))?;
        return Ok(base.pow(k));
    }
    Ok(base)
}

fn atom(cur: &mut Cursor, vars: usize) -> Result<Polynomial<Rational>, ParseError> {
    let col = cur.column();
    match cur.bump() {
        Some(Tok::Num(n)) => {
            let v = BigInt::from_str(&n).map_err(|_| ParseError::new(col, "bad integer"))?;
            Ok(Polynomial::constant(vars, Rational::from_integer(v)))
        }
        Some(Tok::Ident(name)) => match var_index(&name, vars) {
            Some(i) => Ok(Polynomial::var(vars, i)),
            None => Err(ParseError::new(col, format!("unknown variable {name} for {vars} variables"))),
        },
        Some(Tok::LParen) => {
            let p = sum(cur, vars)?;
            cur.expect(&Tok::RParen)?;
            Ok(p)
        }
        _ => Err(ParseError::new(col, "expected a number, variable or '('")),
    }
}

/// Sparse form: one `coeff i j k ...` line per term; `#` starts a comment.
pub fn parse_sparse_polynomial(text: &str, vars: usize) -> Result<Polynomial<Rational>, ParseError> {
    let mut p = Polynomial::zero(vars);
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| ParseError::new(0, format!("line {}: {m}", n + 1));
        let mut parts = line.split_whitespace();
        let c = parts
            .next()
            .and_then(|c| Rational::from_str(c).ok())
            .ok_or_else(|| err("bad coefficient"))?;
        let e = parts
            .map(|x| x.parse::<u32>().map_err(|_| err("bad exponent")))
            .collect::<Result<Vec<_>, _>>()?;
        if e.len() != vars {
            return Err(err(&format!("expected {vars} exponents")));
        }
        p.add_term(e, c);
    }
    Ok(p)
}

pub fn write_sparse_polynomial<C: Coeff>(p: &Polynomial<C>) -> String {
    p.terms()
        .map(|(e, c)| {
            let exps: Vec<String> = e.iter().map(|k| k.to_string()).collect();
            format!("{c} {}\n", exps.join(" "))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial<Rational> {
        parse_polynomial(s, 3).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("x*y - z^2").to_string(), "x*y - z^2");
        assert_eq!(p("-(z^2) + y*x").to_string(), "x*y - z^2");
        assert_eq!(p("x1*x2 - x3^2"), p("x*y-z^2"));
        assert_eq!(p("2x(y + 1)").to_string(), "2*x*y + 2*x");
        assert_eq!(p("x/2 - 3").to_string(), "(1/2)*x - 3");
        assert_eq!(p("(x - x)"), Polynomial::zero(3));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_polynomial("x / y", 3).is_err());
        assert!(parse_polynomial("w", 3).is_err());
        assert!(parse_polynomial("x +", 3).is_err());
        assert!(parse_polynomial("", 3).is_err());
        assert!(parse_polynomial("x / 0", 3).is_err());
        assert!(parse_polynomial("x / (1 - 1)", 3).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = p("x + y");
        assert_eq!(a.mul(&a), p("x^2 + 2*x*y + y^2"));
        assert_eq!(a.pow(3).degree(), Some(3));
        assert_eq!(p("x^2*y + x^3").order_in(0), Some(2));
        assert_eq!(Polynomial::<Rational>::zero(3).order_in(0), None);
    }

    #[test]
    fn substitution() {
        // x = u, y = u*v, z = u*w
        let u = Polynomial::var(3, 0);
        let images = [u.clone(), u.mul(&Polynomial::var(3, 1)), u.mul(&Polynomial::var(3, 2))];
        assert_eq!(p("x*y - z^2").substitute(&images), p("x^2*y - x^2*z^2"));
    }

    #[test]
    fn sparse_roundtrip() {
        let f = p("x*y - z^2 + 1/3");
        let text = write_sparse_polynomial(&f);
        assert_eq!(parse_sparse_polynomial(&text, 3).unwrap(), f);
        assert!(parse_sparse_polynomial("1 2 3 4", 2).is_err());
    }
}
