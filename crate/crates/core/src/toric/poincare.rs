use super::cone::{Cone2D, WeightVector};
use super::enumerate::enumerate_weighted_points;
use super::ToricError;
use crate::scalar::Coeff;
use crate::series::{normalized_poincare, Exponent, ExponentPolynomial, RationalExpr, TruncatedSeries};

/// Poincaré series of the multi-index filtration `F(ℓ) = {v : ⟨u_i, v⟩ ≥ ℓ_i}`
/// on the semigroup algebra, with one variable per weight.
///
/// `dim F(ℓ)/F(ℓ+1̄)` counts the lattice points with every weight at least
/// `ℓ_i` and some weight equal to `ℓ_j`.
pub fn poincare_toric_enumerated<C: Coeff>(
    cone: &Cone2D,
    weights: &[WeightVector],
    order: u64,
) -> Result<TruncatedSeries<C>, ToricError> {
    let points = enumerate_weighted_points(cone, weights, order as i64)?;
    let s = normalized_poincare(weights.len(), order, |lower, upper| {
        let n = points
            .iter()
            .filter(|p| {
                let w = &p.weights;
                let in_lower = w.iter().zip(lower).all(|(&a, &l)| a >= l as i64);
                let in_upper = w.iter().zip(upper).all(|(&a, &u)| a >= u as i64);
                in_lower && !in_upper
            })
            .count();
        C::from_usize(n).expect("count fits the coefficient ring")
    })?;
    Ok(s)
}

/// Closed form `Σ_s t^{⟨u,s⟩} / ((1 - t^{⟨u,gen1⟩})(1 - t^{⟨u,gen2⟩}))`,
/// summed over the fundamental points `s`.
///
/// `gen2` is the period: the cone's points are the disjoint translates
/// `s + N·gen1 + N·gen2`.
pub fn poincare_toric_closed<C: Coeff>(cone: &Cone2D, weight: &WeightVector) -> Result<RationalExpr<C>, ToricError> {
    weight.check(cone)?;
    let numerator = cone
        .fundamental_points()
        .into_iter()
        .fold(ExponentPolynomial::zero(1), |acc, s| {
            let e = Exponent::integral(&[weight.eval(s) as u64]);
            acc.add(&ExponentPolynomial::monomial(&e, C::one()))
        });
    let factor = |v| (Exponent::integral(&[weight.eval(v) as u64]), 1);
    Ok(RationalExpr::new(numerator, [factor(cone.gen1()), factor(cone.gen2())])?)
}
