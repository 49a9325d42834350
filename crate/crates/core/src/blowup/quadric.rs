use std::collections::BTreeMap;

use super::poly::Polynomial;
use super::script::{BlowupScript, BlowupStep};
use super::{BlowupError, ExtOrder};
use crate::scalar::Coeff;
use crate::series::{Exponent, ExponentPolynomial, RationalExpr};

/// The quadric cone `xy - z² = 0` after `m` extra blow-ups along the
/// strict transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypersurfaceModel {
    m: u32,
}

fn t_pow(k: u64) -> Exponent {
    Exponent::integral(&[k])
}

impl HypersurfaceModel {
    /// Valuation of the distinguished form `xy - z²` on the first exceptional divisor.
    pub const BASE_VALUATION: u32 = 2;

    pub fn new(m: u32) -> Self {
        Self { m }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `#{(i, j, l) ≥ 0, k ∈ {0, 1} : i + j + k + (m + 2)·l = ℓ}`.
    pub fn dim_quotient(&self, level: u64) -> u64 {
        let step = (self.m + Self::BASE_VALUATION) as u64;
        let mut count = 0;
        for l in 0..=level / step {
            let rest = level - l * step;
            for k in 0..=rest.min(1) {
                // i + j = rest - k
                count += rest - k + 1;
            }
        }
        count
    }

    /// `(1 - t²)/((1 - t)³(1 - t^{m+2}))`.
    pub fn poincare<C: Coeff>(&self) -> RationalExpr<C> {
        let num = ExponentPolynomial::one_minus(&t_pow(2));
        RationalExpr::new(num, [(t_pow(1), 3), (t_pow(self.m as u64 + 2), 1)]).expect("nonzero factors")
    }

    /// `(1 - t²)/(1 - t)³`, the series of the limit filtration.
    pub fn limit<C: Coeff>() -> RationalExpr<C> {
        poincare_abstract_hypersurface(&[1, 1, 1], 2).expect("positive weights")
    }

    /// Checks `P = P·t^{m+2} + (1 - t²)/(1 - t)³` as rational functions.
    pub fn functional_equation_holds<C: Coeff>(&self) -> bool {
        let p = self.poincare::<C>();
        let shifted = p.mul_polynomial(&ExponentPolynomial::monomial(&t_pow(self.m as u64 + 2), C::one()));
        p.equals_as_rational(&shifted.add(&Self::limit()))
    }

    /// Chart `x = u, y = uv, z = uw`, the change `ṽ = v - w²`, then `m`
    /// blow-ups of `{u = ṽ = 0}` in the chart `ṽ = u·ṽ'`.
    pub fn script(&self) -> BlowupScript {
        let mut steps = vec![
            BlowupStep::Chart {
                center: vec![0, 1, 2],
                principal: 0,
            },
            BlowupStep::Change {
                target: 1,
                poly: Polynomial::var(3, 2).pow(2),
            },
        ];
        steps.extend((0..self.m).map(|_| BlowupStep::Chart {
            center: vec![0, 1],
            principal: 0,
        }));
        BlowupScript::new(3, steps).expect("well-formed quadric script")
    }
}

/// `(1 - t^d)/∏_i (1 - t^{w_i})`.
pub fn poincare_abstract_hypersurface<C: Coeff>(weights: &[u64], d: u64) -> Result<RationalExpr<C>, BlowupError> {
    if d == 0 || weights.contains(&0) {
        return Err(BlowupError::NonPositiveWeight);
    }
    let mut factors = BTreeMap::new();
    for &w in weights {
        *factors.entry(t_pow(w)).or_insert(0) += 1;
    }
    Ok(RationalExpr::new(ExponentPolynomial::one_minus(&t_pow(d)), factors)?)
}

/// Rewrites `z² → xy` until every term has `z`-degree at most 1.
///
/// `pick` chooses which reducible term to rewrite next (by index among the
/// reducible terms in key order). The rule set is a single binomial, so the
/// result does not depend on the choice.
pub fn quadric_normal_form_with<C: Coeff>(
    f: &Polynomial<C>,
    mut pick: impl FnMut(usize) -> usize,
) -> Result<Polynomial<C>, BlowupError> {
    if f.vars() != 3 {
        return Err(BlowupError::VarCountMismatch {
            expected: 3,
            found: f.vars(),
        });
    }
    let mut g = f.clone();
    loop {
        let reducible: Vec<(Vec<u32>, C)> = g
            .terms()
            .filter(|(e, _)| e[2] >= 2)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        if reducible.is_empty() {
            return Ok(g);
        }
        let (e, c) = reducible[pick(reducible.len()) % reducible.len()].clone();
        let rewritten = vec![e[0] + 1, e[1] + 1, e[2] - 2];
        g = g
            .sub(&Polynomial::monomial(e, c.clone()))
            .add(&Polynomial::monomial(rewritten, c));
    }
}

/// Leftmost-first normal form modulo `xy - z²`.
pub fn quadric_normal_form<C: Coeff>(f: &Polynomial<C>) -> Result<Polynomial<C>, BlowupError> {
    quadric_normal_form_with(f, |_| 0)
}

/// Order of `f̄` on the quadric cone: the least total degree in its normal
/// form, infinite when `xy - z²` divides `f`.
pub fn membership_g<C: Coeff>(f: &Polynomial<C>) -> Result<ExtOrder, BlowupError> {
    Ok(match quadric_normal_form(f)?.order() {
        Some(d) => ExtOrder::Finite(d as u64),
        None => ExtOrder::Infinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::poly::parse_polynomial;
    use crate::blowup::script::exceptional_order;
    use crate::scalar::Rat;
    use crate::Rational;
    use num_bigint::BigInt;

    fn p(s: &str) -> Polynomial<Rational> {
        parse_polynomial(s, 3).unwrap()
    }

    #[test]
    fn dims() {
        assert_eq!(HypersurfaceModel::new(0).dim_quotient(0), 1);
        assert_eq!(HypersurfaceModel::new(1).dim_quotient(3), 8);
        assert_eq!(HypersurfaceModel::new(0).dim_quotient(2), 6);
    }

    #[test]
    fn series_matches_dims() {
        let h = HypersurfaceModel::new(1);
        let s = h.poincare::<BigInt>().expand(Rat::from_integer(4)).unwrap();
        assert_eq!(s.dense_coeffs(4), [1, 3, 5, 8, 12].map(BigInt::from).to_vec());
    }

    #[test]
    fn display_and_functional_equation() {
        assert_eq!(
            HypersurfaceModel::new(2).poincare::<BigInt>().to_string(),
            "(1 - t^2)/((1 - t)^3(1 - t^4))"
        );
        for m in 0..6 {
            assert!(HypersurfaceModel::new(m).functional_equation_holds::<BigInt>());
        }
    }

    #[test]
    fn abstract_hypersurface() {
        let e: RationalExpr<BigInt> = poincare_abstract_hypersurface(&[1, 1, 1], 2).unwrap();
        assert_eq!(e.to_string(), "(1 - t^2)/(1 - t)^3");
        let one: RationalExpr<BigInt> = poincare_abstract_hypersurface(&[5], 5).unwrap();
        let s = one.expand(Rat::from_integer(12)).unwrap();
        assert_eq!(s.dense_coeffs(12), [1].into_iter().chain([0; 12]).map(BigInt::from).collect::<Vec<_>>());
        assert!(poincare_abstract_hypersurface::<BigInt>(&[0], 2).is_err());
    }

    #[test]
    fn quadric_pullbacks() {
        for m in 0..4u64 {
            let s = HypersurfaceModel::new(m as u32).script();
            assert_eq!(exceptional_order(&p("x*y - z^2"), &s).unwrap(), ExtOrder::Finite(m + 2));
            assert_eq!(exceptional_order(&p("y"), &s).unwrap(), ExtOrder::Finite(1));
        }
        let s3 = HypersurfaceModel::new(3).script();
        assert_eq!(s3.pullback_exact(&p("x*y - z^2")).unwrap(), p("x^5*y"));
        let s1 = HypersurfaceModel::new(1).script();
        let f = p("x*y^2*z*(x*y - z^2)^2");
        assert_eq!(exceptional_order(&f, &s1).unwrap(), ExtOrder::Finite(10));
    }

    #[test]
    fn membership() {
        assert_eq!(membership_g(&p("x*y - z^2")).unwrap(), ExtOrder::Infinite);
        assert_eq!(membership_g(&p("z^2")).unwrap(), ExtOrder::Finite(2));
        assert_eq!(membership_g(&p("x + (x*y - z^2)*y")).unwrap(), ExtOrder::Finite(1));
        assert_eq!(quadric_normal_form(&p("z^5")).unwrap(), p("x^2*y^2*z"));
    }
}
