//! Golden-file text format for truncated series.
//!
//! ```text
//! vars=2 order=25 denom=5
//! 1  0 0
//! 3  1/5 3/5
//! ```
//!
//! One term per line, coefficient then the exponent components as reduced
//! fractions, in (total degree, lexicographic) order.

use std::str::FromStr;

use super::exponent::{fmt_rat, parse_rat, Exponent};
use super::expr::ExponentPolynomial;
use super::truncated::TruncatedSeries;
use super::SeriesError;
use crate::scalar::Coeff;

pub fn write_series<C: Coeff>(s: &TruncatedSeries<C>) -> String {
    let mut out = format!("vars={} order={} denom={}\n", s.vars(), fmt_rat(&s.order()), s.denom());
    for (e, c) in s.terms() {
        let comps: Vec<String> = e.components().iter().map(fmt_rat).collect();
        out.push_str(&format!("{c}  {}\n", comps.join(" ")));
    }
    out
}

/// Human-readable form, e.g. `1 + 2*t + 2*t^2 + O(deg > 2)`.
pub fn show_series<C: Coeff>(s: &TruncatedSeries<C>, names: &[String]) -> String {
    let p = ExponentPolynomial::from_terms(s.vars(), s.terms().map(|(e, c)| (e, c.clone())))
        .expect("series terms share the variable count");
    format!("{} + O(deg > {})", p.display_with(names), fmt_rat(&s.order()))
}

fn bad(line: usize, msg: impl Into<String>) -> SeriesError {
    SeriesError::Format {
        line,
        message: msg.into(),
    }
}

pub fn parse_series<C: Coeff + FromStr>(text: &str) -> Result<TruncatedSeries<C>, SeriesError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
    let (mut vars, mut order, mut denom) = (None, None, None);
    for field in header.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(|| bad(1, "malformed header field"))?;
        match key {
            "vars" => vars = value.parse::<usize>().ok(),
            "order" => order = parse_rat(value),
            "denom" => denom = value.parse::<u64>().ok(),
            _ => return Err(bad(1, format!("unknown header field {key}"))),
        }
    }
    let vars = vars.ok_or_else(|| bad(1, "missing vars"))?;
    let order = order.ok_or_else(|| bad(1, "missing order"))?;
    let denom = denom.ok_or_else(|| bad(1, "missing denom"))?;

    let mut terms = Vec::new();
    for (i, line) in lines {
        let mut parts = line.split_whitespace();
        let c: C = parts
            .next()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| bad(i + 1, "bad coefficient"))?;
        let comps = parts
            .map(|p| parse_rat(p).ok_or_else(|| bad(i + 1, format!("bad exponent {p}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if comps.len() != vars {
            return Err(bad(i + 1, format!("expected {vars} exponents")));
        }
        let e = Exponent::new(&comps)?;
        if denom % e.denom() != 0 {
            return Err(bad(i + 1, "exponent outside the declared denominator"));
        }
        terms.push((e, c));
    }
    let s = TruncatedSeries::from_terms(vars, order, terms)?;
    if s.denom() != denom {
        return Err(bad(1, format!("declared denom {denom}, terms need {}", s.denom())));
    }
    Ok(s)
}
