use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;

use super::SeriesError;
use crate::scalar::{gcd_u64, lcm_u64, Rat};

/// A monomial exponent in `(1/d)·Z^k_{≥0}`, stored in lowest terms.
///
/// Ordered by total degree first, then lexicographically, which is the
/// order used everywhere terms are listed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent {
    numer: Vec<u64>,
    denom: u64,
}

impl Exponent {
    pub fn new(components: &[Rat]) -> Result<Self, SeriesError> {
        let mut denom = 1u64;
        for c in components {
            if *c < Rat::from_integer(0) {
                return Err(SeriesError::NegativeExponent(c.to_string()));
            }
            denom = lcm_u64(denom, *c.denom() as u64);
        }
        let numer = components
            .iter()
            .map(|c| (*c.numer() as u64) * (denom / *c.denom() as u64))
            .collect();
        Ok(Self::from_scaled(numer, denom))
    }

    pub fn integral(components: &[u64]) -> Self {
        Self {
            numer: components.to_vec(),
            denom: 1,
        }
    }

    pub fn zero(vars: usize) -> Self {
        Self::integral(&vec![0; vars])
    }

    /// Builds `numer / denom` and reduces it to lowest terms.
    pub fn from_scaled(numer: Vec<u64>, denom: u64) -> Self {
        assert!(denom > 0, "exponent denominator must be positive");
        let g = numer.iter().fold(denom, |g, &n| gcd_u64(g, n));
        Self {
            numer: numer.into_iter().map(|n| n / g).collect(),
            denom: denom / g,
        }
    }

    pub fn vars(&self) -> usize {
        self.numer.len()
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numer
    }

    pub fn component(&self, i: usize) -> Rat {
        Rat::new(self.numer[i] as i64, self.denom as i64)
    }

    pub fn components(&self) -> Vec<Rat> {
        (0..self.vars()).map(|i| self.component(i)).collect()
    }

    pub fn total_degree(&self) -> Rat {
        Rat::new(self.numer.iter().sum::<u64>() as i64, self.denom as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.numer.iter().all(|&n| n == 0)
    }

    pub fn is_integral(&self) -> bool {
        self.denom == 1
    }

    /// Numerators rescaled to the common denominator `d` (a multiple of ours).
    pub(crate) fn scaled_to(&self, d: u64) -> ScaledExp {
        debug_assert_eq!(d % self.denom, 0);
        let f = d / self.denom;
        ScaledExp(self.numer.iter().map(|n| n * f).collect())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = lcm_u64(self.denom, other.denom);
        self.scaled_to(d).cmp(&other.scaled_to(d))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components().iter().map(fmt_rat).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Exponent numerators sharing a denominator held by the containing object.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct ScaledExp(pub(crate) Vec<u64>);

impl ScaledExp {
    pub(crate) fn zero(vars: usize) -> Self {
        ScaledExp(vec![0; vars])
    }

    pub(crate) fn degree(&self) -> u64 {
        self.0.iter().sum()
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        ScaledExp(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn scale(&self, f: u64) -> Self {
        ScaledExp(self.0.iter().map(|a| a * f).collect())
    }

    pub(crate) fn to_exponent(&self, denom: u64) -> Exponent {
        Exponent::from_scaled(self.0.clone(), denom)
    }
}

impl Ord for ScaledExp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ScaledExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `floor(order * d)`: the largest scaled total degree inside the region.
pub(crate) fn scaled_cap(order: Rat, d: u64) -> u64 {
    let n = *order.numer() as i128 * d as i128;
    Integer::div_floor(&n, &(*order.denom() as i128)) as u64
}

/// Smallest denominator under which every key in `keys` is still integral.
pub(crate) fn minimal_denom<'a>(keys: impl Iterator<Item = &'a ScaledExp>, d: u64) -> u64 {
    let g = keys.fold(d, |g, k| k.0.iter().fold(g, |g, &n| gcd_u64(g, n)));
    d / g
}

pub fn fmt_rat(r: &Rat) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            (d != 0).then(|| Rat::new(n, d))
        }
        None => Some(Rat::from_integer(s.trim().parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_reduces_denominator() {
        let e = Exponent::new(&[Rat::new(2, 4), Rat::new(1, 1)]).unwrap();
        assert_eq!(e.denom(), 2);
        assert_eq!(e.numerators(), &[1, 2]);
        assert_eq!(e, Exponent::from_scaled(vec![3, 6], 6));
    }

    #[test]
    fn negative_component_rejected() {
        assert!(Exponent::new(&[Rat::new(-1, 5)]).is_err());
    }

    #[test]
    fn order_is_degree_then_lex() {
        let a = Exponent::integral(&[0, 2]);
        let b = Exponent::integral(&[1, 0]);
        let c = Exponent::new(&[Rat::new(1, 5), Rat::new(3, 5)]).unwrap();
        assert!(b < a);
        assert!(c < b);
    }

    #[test]
    fn cap_floors() {
        assert_eq!(scaled_cap(Rat::new(7, 2), 5), 17);
        assert_eq!(scaled_cap(Rat::from_integer(3), 1), 3);
    }
}
