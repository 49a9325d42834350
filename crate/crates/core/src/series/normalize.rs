use std::collections::{BTreeMap, HashMap};

use super::exponent::{Exponent, ScaledExp};
use super::expr::{ExponentPolynomial, RationalExpr};
use super::truncated::{add_into, mul_geometric, TruncatedSeries};
use super::SeriesError;
use crate::scalar::{Coeff, Rat};

/// The factor `∏_i (t_i - 1) / (∏_i t_i - 1)` in front of a multi-index
/// Poincaré series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizationFactor {
    vars: usize,
}

impl NormalizationFactor {
    pub fn new(vars: usize) -> Result<Self, SeriesError> {
        if vars == 0 {
            return Err(SeriesError::NoVariables);
        }
        Ok(Self { vars })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// `∏_i (t_i - 1)` multiplied out.
    pub fn numerator<C: Coeff>(&self) -> ExponentPolynomial<C> {
        (0..self.vars).fold(ExponentPolynomial::one(self.vars), |acc, i| {
            let mut e = vec![0; self.vars];
            e[i] = 1;
            let ti = ExponentPolynomial::monomial(&Exponent::integral(&e), C::one());
            acc.mul(&ti.sub(&ExponentPolynomial::one(self.vars)))
        })
    }

    /// The factor as a closed form; `∏ t_i - 1 = -(1 - ∏ t_i)`, and for one
    /// variable the quotient cancels to 1.
    pub fn as_expr<C: Coeff>(&self) -> RationalExpr<C> {
        if self.vars == 1 {
            return RationalExpr::polynomial(ExponentPolynomial::one(1));
        }
        RationalExpr::new(self.numerator::<C>().neg(), [(Exponent::integral(&vec![1; self.vars]), 1)])
            .expect("diagonal exponent is nonzero")
    }

    /// Multiplies a power series by the factor. Only meaningful when the raw
    /// dimension sum has no terms at negative indices.
    pub fn apply<C: Coeff>(&self, s: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>, SeriesError> {
        if s.vars() != self.vars {
            return Err(SeriesError::VarCountMismatch {
                left: self.vars,
                right: s.vars(),
            });
        }
        s.mul(&self.as_expr::<C>().expand(s.order())?)
    }
}

/// Poincaré series of a multi-index filtration from its quotient dimensions.
///
/// `dim_quotient(lower, upper)` must return `dim F(lower)/F(upper)` for
/// `lower ≤ upper` componentwise, `upper - lower` a 0/1 vector. The filtration
/// is extended to all of `Z^k` by `F(l) = F(max(0, l))`, so the raw sum
/// `L = Σ_l dim F(l)/F(l+1) t^l` has terms at negative indices when `k ≥ 2`.
/// Multiplying by `∏(t_i - 1)` first cancels those terms; the division by
/// `∏ t_i - 1` is then an honest power series.
pub fn normalized_poincare<C, F>(vars: usize, order: u64, mut dim_quotient: F) -> Result<TruncatedSeries<C>, SeriesError>
where
    C: Coeff,
    F: FnMut(&[u64], &[u64]) -> C,
{
    if vars == 0 {
        return Err(SeriesError::NoVariables);
    }
    let mut cache: HashMap<Vec<i64>, C> = HashMap::new();
    let mut dim = |l: &[i64]| -> C {
        if let Some(c) = cache.get(l) {
            return c.clone();
        }
        let lower: Vec<u64> = l.iter().map(|&x| x.max(0) as u64).collect();
        let upper: Vec<u64> = l.iter().map(|&x| (x + 1).max(0) as u64).collect();
        let v = dim_quotient(&lower, &upper);
        cache.insert(l.to_vec(), v.clone());
        v
    };

    let mut map = BTreeMap::new();
    for e in simplex_points(vars, order) {
        // coefficient of t^e in ∏(t_i - 1)·L
        let mut acc = C::zero();
        for mask in 0u32..(1 << vars) {
            let shifted: Vec<i64> = e
                .iter()
                .enumerate()
                .map(|(i, &x)| x as i64 - ((mask >> i) & 1) as i64)
                .collect();
            let sign_negative = (vars as u32 - mask.count_ones()) % 2 == 1;
            let d = dim(&shifted);
            acc = if sign_negative { acc - d } else { acc + d };
        }
        add_into(&mut map, ScaledExp(e), acc);
    }
    map.retain(|_, v| !v.is_zero());
    mul_geometric(&mut map, &ScaledExp(vec![1; vars]), order);
    let map = map.into_iter().map(|(k, v)| (k, -v)).collect();
    Ok(TruncatedSeries::from_scaled_map(vars, Rat::from_integer(order as i64), 1, map))
}

/// All `e ∈ Z^k_{≥0}` with `|e| ≤ n`.
pub(crate) fn simplex_points(vars: usize, n: u64) -> Vec<Vec<u64>> {
    fn rec(prefix: &mut Vec<u64>, left: usize, budget: u64, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for x in 0..=budget {
            prefix.push(x);
            rec(prefix, left - 1, budget - x, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), vars, n, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_variable_factor_is_identity() {
        let f = NormalizationFactor::new(1).unwrap();
        let e: RationalExpr<i64> = f.as_expr();
        assert_eq!(e, RationalExpr::polynomial(ExponentPolynomial::one(1)));
        let s = TruncatedSeries::from_terms(1, Rat::from_integer(3), [(Exponent::integral(&[2]), 5i64)]).unwrap();
        assert_eq!(f.apply(&s).unwrap(), s);
    }

    #[test]
    fn zero_vars_rejected() {
        assert_eq!(NormalizationFactor::new(0), Err(SeriesError::NoVariables));
    }

    #[test]
    fn two_variable_factor_on_diagonal_series() {
        let f = NormalizationFactor::new(2).unwrap();
        let diag = TruncatedSeries::from_terms(
            2,
            Rat::from_integer(6),
            (0..=3).map(|l| (Exponent::integral(&[l, l]), 1i64)),
        )
        .unwrap();
        let out = f.apply(&diag).unwrap();
        assert_eq!(out.order(), Rat::from_integer(6));
        // the factor itself starts with -1
        assert_eq!(out.coeff(&Exponent::zero(2)), -1);
        assert_eq!(out.coeff(&Exponent::integral(&[1, 0])), 1);
    }

    #[test]
    fn simplex_count() {
        assert_eq!(simplex_points(2, 3).len(), 10);
        assert_eq!(simplex_points(3, 2).len(), 10);
    }

    #[test]
    fn one_variable_dimensions_pass_through() {
        // dims 1, 2, 3, ... for F(l)/F(l+1)
        let s: TruncatedSeries<i64> = normalized_poincare(1, 5, |lo, up| {
            if lo == up {
                0
            } else {
                lo[0] as i64 + 1
            }
        })
        .unwrap();
        assert_eq!(s.dense_coeffs(5), vec![1, 2, 3, 4, 5, 6]);
    }
}
