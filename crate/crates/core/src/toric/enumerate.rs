use super::cone::{Cone2D, LatticePoint, WeightVector};
use super::ToricError;

/// A lattice point of the cone together with its weights `(⟨u_i, v⟩)_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPoint {
    pub point: LatticePoint,
    pub weights: Vec<i64>,
}

impl WeightedPoint {
    pub fn min_weight(&self) -> i64 {
        *self.weights.iter().min().expect("at least one weight")
    }
}

/// Every lattice point `v` of the cone with `min_i ⟨u_i, v⟩ ≤ bound`, each
/// once, sorted by point.
///
/// Points are generated as `s + k·gen1 + j·gen2` over the fundamental
/// points `s`; positivity on both generators makes every loop finite.
pub fn enumerate_weighted_points(
    cone: &Cone2D,
    weights: &[WeightVector],
    bound: i64,
) -> Result<Vec<WeightedPoint>, ToricError> {
    if weights.is_empty() {
        return Err(ToricError::NoWeights);
    }
    for w in weights {
        w.check(cone)?;
    }
    let (g1, g2) = (cone.gen1(), cone.gen2());
    let within = |v: LatticePoint| weights.iter().any(|w| w.eval(v) <= bound);
    let mut out = Vec::new();
    for s in cone.fundamental_points() {
        let mut base = s;
        while within(base) {
            let mut v = base;
            while within(v) {
                out.push(WeightedPoint {
                    point: v,
                    weights: weights.iter().map(|w| w.eval(v)).collect(),
                });
                v = [v[0] + g2[0], v[1] + g2[1]];
            }
            base = [base[0] + g1[0], base[1] + g1[1]];
        }
    }
    out.sort_by_key(|p| p.point);
    Ok(out)
}
