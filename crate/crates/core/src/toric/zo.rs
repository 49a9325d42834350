use std::collections::BTreeMap;

use super::plumbing::PlumbingGraph;
use super::ToricError;
use crate::scalar::{Coeff, Rat};
use crate::series::{Exponent, ExponentPolynomial, RationalExpr, TruncatedSeries};

/// Power of `(1 - t^{E_v^*})` contributed by vertex `v`.
///
/// This is `valency - 2`: in `δ_v - 2` with `δ_v` counting arrows, each
/// arrow's `+1` is cancelled by its own `(1 - t^{E_v^*})^{-1}` factor.
pub fn zo_vertex_power(g: &PlumbingGraph, v: usize) -> i64 {
    g.valency(v) as i64 - 2
}

/// The vector `E_v^*` with components listed in `tracked` order.
pub fn dual_exponent(g: &PlumbingGraph, v: usize, tracked: &[usize]) -> Result<Exponent, ToricError> {
    let cols = g.inverse_columns()?;
    Ok(Exponent::new(&tracked.iter().map(|&w| cols[v][w]).collect::<Vec<Rat>>())?)
}

fn check_tracking(g: &PlumbingGraph, tracked: &[usize]) -> Result<(), ToricError> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    for &v in tracked {
        if v >= n {
            return Err(ToricError::VertexOutOfRange { vertex: v, count: n });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(ToricError::DuplicateTracked(v));
        }
    }
    match seen.iter().position(|s| !s) {
        Some(v) => Err(ToricError::UntrackedVertex(v)),
        None => Ok(()),
    }
}

/// Topological series `Z_o = ∏_v (1 - t^{E_v^*})^{valency(v) - 2}`, one
/// variable per vertex in `tracked` order.
pub fn compute_zo<C: Coeff>(g: &PlumbingGraph, tracked: &[usize]) -> Result<RationalExpr<C>, ToricError> {
    check_tracking(g, tracked)?;
    let k = tracked.len();
    let mut numerator = ExponentPolynomial::one(k);
    let mut factors = BTreeMap::new();
    for v in 0..g.vertex_count() {
        let p = zo_vertex_power(g, v);
        if p == 0 {
            continue;
        }
        let e = dual_exponent(g, v, tracked)?;
        if p > 0 {
            numerator = numerator.mul(&ExponentPolynomial::one_minus(&e).pow(p as u32));
        } else {
            *factors.entry(e).or_insert(0) += (-p) as u32;
        }
    }
    Ok(RationalExpr::new(numerator, factors)?)
}

/// Keeps the integral-exponent terms of `z` and sets every variable outside
/// `keep` to 1, truncated at `order`.
///
/// The expansion order is taken from the support bound of `z`, so the
/// specialization is exact rather than retried.
pub fn reduce_zo_to_p<C: Coeff>(z: &RationalExpr<C>, keep: &[usize], order: Rat) -> Result<TruncatedSeries<C>, ToricError> {
    let k = z.vars();
    if keep.is_empty() {
        return Err(ToricError::BadKeepVars("no variable kept".into()));
    }
    let mut kept = vec![false; k];
    for &v in keep {
        if v >= k || std::mem::replace(&mut kept[v], true) {
            return Err(ToricError::BadKeepVars(format!("index {v} invalid or repeated")));
        }
    }
    let eliminate: Vec<usize> = (0..k).filter(|&v| !kept[v]).collect();
    let bound = z.support_bound(&eliminate)?;
    let s = z.expand(bound.required_order(order))?;
    Ok(s.integral_part().specialize_vars_to_one(&eliminate, order, &bound)?)
}

/// Variable order for the blown-up `X_{n,q}` chain: the arrow vertex first,
/// then the remaining vertices ascending.
pub fn arrow_first_tracking(g: &PlumbingGraph) -> Vec<usize> {
    let arrows = g.arrow_vertices();
    let mut out = arrows.clone();
    out.extend((0..g.vertex_count()).filter(|v| !arrows.contains(v)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::parse_rational_expr;
    use num_bigint::BigInt;

    fn x52() -> PlumbingGraph {
        PlumbingGraph::cyclic_quotient(5, 2).unwrap()
    }

    #[test]
    fn x52_zo_display() {
        let z: RationalExpr<BigInt> = compute_zo(&x52(), &[0, 1]).unwrap();
        assert_eq!(z.to_string(), "1/((1 - t^(2/5)*s^(1/5))(1 - t^(1/5)*s^(3/5)))");
    }

    #[test]
    fn single_vertex_without_arrow() {
        let g = PlumbingGraph::new(vec![-1], [], []).unwrap();
        let z: RationalExpr<BigInt> = compute_zo(&g, &[0]).unwrap();
        assert_eq!(z.to_string(), "1/(1 - t)^2");
    }

    #[test]
    fn all_valency_two_is_one() {
        // a cycle of -3 curves: every vertex has valency 2
        let g = PlumbingGraph::new(vec![-3, -3, -3], [(0, 1), (1, 2), (2, 0)], []).unwrap();
        let z: RationalExpr<i64> = compute_zo(&g, &[0, 1, 2]).unwrap();
        assert_eq!(z, RationalExpr::polynomial(ExponentPolynomial::one(3)));
    }

    #[test]
    fn tracking_must_cover_all_vertices() {
        assert_eq!(compute_zo::<i64>(&x52(), &[0]), Err(ToricError::UntrackedVertex(1)));
        assert_eq!(compute_zo::<i64>(&x52(), &[0, 0]), Err(ToricError::DuplicateTracked(0)));
    }

    #[test]
    fn reduction_m0() {
        let z: RationalExpr<BigInt> = compute_zo(&x52(), &[0, 1]).unwrap();
        let p = reduce_zo_to_p(&z, &[0], Rat::from_integer(10)).unwrap();
        let closed: RationalExpr<BigInt> =
            parse_rational_expr("(1 + 2*t + 2*t^2)/((1 - t)(1 - t^2))", &["t".to_string()]).unwrap();
        assert_eq!(p, closed.expand(Rat::from_integer(10)).unwrap());
        assert_eq!(p.dense_coeffs(3), [1, 3, 6, 8].map(BigInt::from).to_vec());
    }

    #[test]
    fn reduction_m1_low_order() {
        let g = x52().blowup_at_arrow(0, 1).unwrap();
        let tracked = arrow_first_tracking(&g);
        assert_eq!(tracked, vec![2, 0, 1]);
        let z: RationalExpr<BigInt> = compute_zo(&g, &tracked).unwrap();
        let p = reduce_zo_to_p(&z, &[0], Rat::from_integer(3)).unwrap();
        assert_eq!(p.dense_coeffs(3), [1, 1, 2, 3].map(BigInt::from).to_vec());
    }

    #[test]
    fn arrow_exponent_tower() {
        let mut g = x52();
        for m in 0..=6i64 {
            let tracked = arrow_first_tracking(&g);
            let e = dual_exponent(&g, tracked[0], &tracked).unwrap();
            assert_eq!(e.component(0), Rat::new(2 + 5 * m, 5));
            g = g.blowup_at_arrow(tracked[0], 1).unwrap();
        }
    }

    #[test]
    fn keep_vars_validated() {
        let z: RationalExpr<i64> = compute_zo(&x52(), &[0, 1]).unwrap();
        assert!(reduce_zo_to_p(&z, &[], Rat::from_integer(3)).is_err());
        assert!(reduce_zo_to_p(&z, &[2], Rat::from_integer(3)).is_err());
        assert!(reduce_zo_to_p(&z, &[0, 0], Rat::from_integer(3)).is_err());
    }
}
