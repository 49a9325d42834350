use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::ToricError;

pub type LatticePoint = [i64; 2];

pub(crate) fn det(a: LatticePoint, b: LatticePoint) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn dot(a: LatticePoint, b: LatticePoint) -> i64 {
    a[0] * b[0] + a[1] * b[1]
}

fn is_primitive(v: LatticePoint) -> bool {
    v[0].gcd(&v[1]) == 1
}

/// A strictly convex rational cone in `R²` spanned by two primitive vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone2D {
    gen1: LatticePoint,
    gen2: LatticePoint,
}

impl Cone2D {
    pub fn new(gen1: LatticePoint, gen2: LatticePoint) -> Result<Self, ToricError> {
        for g in [gen1, gen2] {
            if !is_primitive(g) {
                return Err(ToricError::NotPrimitive(g));
            }
        }
        if det(gen1, gen2) == 0 {
            return Err(ToricError::DependentGenerators(gen1, gen2));
        }
        Ok(Self { gen1, gen2 })
    }

    /// Dual cone of the cyclic quotient `X_{n,q}`: spanned by `(1,0)` and `(q,n)`.
    pub fn cyclic_quotient(n: i64, q: i64) -> Result<Self, ToricError> {
        if !(0 < q && q < n) || n.gcd(&q) != 1 {
            return Err(ToricError::InvalidCyclicQuotient { n, q });
        }
        Self::new([1, 0], [q, n])
    }

    pub fn gen1(&self) -> LatticePoint {
        self.gen1
    }

    pub fn gen2(&self) -> LatticePoint {
        self.gen2
    }

    /// Index of the sublattice spanned by the generators.
    pub fn index(&self) -> i64 {
        det(self.gen1, self.gen2).abs()
    }

    fn orientation(&self) -> i64 {
        det(self.gen1, self.gen2).signum()
    }

    pub fn contains(&self, v: LatticePoint) -> bool {
        let s = self.orientation();
        s * det(self.gen1, v) >= 0 && s * det(v, self.gen2) >= 0
    }

    /// Lattice points `a·gen1 + b·gen2` with `0 ≤ a, b < 1`, sorted.
    ///
    /// Every lattice point of the cone is uniquely such a point plus a
    /// nonnegative integer combination of the generators.
    pub fn fundamental_points(&self) -> Vec<LatticePoint> {
        let (g1, g2) = (self.gen1, self.gen2);
        let d = det(g1, g2);
        let xs = [0, g1[0], g2[0], g1[0] + g2[0]];
        let ys = [0, g1[1], g2[1], g1[1] + g2[1]];
        let mut out = Vec::new();
        for x in *xs.iter().min().unwrap()..=*xs.iter().max().unwrap() {
            for y in *ys.iter().min().unwrap()..=*ys.iter().max().unwrap() {
                let v = [x, y];
                // a = det(v, g2)/d, b = det(g1, v)/d
                let (a, b) = (det(v, g2) * d.signum(), det(g1, v) * d.signum());
                if (0..d.abs()).contains(&a) && (0..d.abs()).contains(&b) {
                    out.push(v);
                }
            }
        }
        out.sort();
        out
    }

    /// Minimal generators of the lattice-point semigroup, from `gen1` to `gen2`.
    ///
    /// Walks the boundary of the convex hull of the nonzero lattice points:
    /// consecutive elements form lattice bases and satisfy
    /// `v_{i-1} + v_{i+1} = b_i v_i`.
    pub fn hilbert_basis(&self) -> Vec<LatticePoint> {
        if self.orientation() < 0 {
            let swap = |v: LatticePoint| [v[1], v[0]];
            let mirrored = Cone2D {
                gen1: swap(self.gen1),
                gen2: swap(self.gen2),
            };
            return mirrored.hilbert_basis().into_iter().map(swap).collect();
        }
        let g1 = self.gen1;
        let g2 = self.gen2;
        // a vector w with det(w, g1) = 1
        let e = g1[0].extended_gcd(&g1[1]);
        let mut prev = [e.y * e.gcd.signum(), -e.x * e.gcd.signum()];
        debug_assert_eq!(det(prev, g1), 1);
        let mut cur = g1;
        let mut out = vec![g1];
        while det(cur, g2) != 0 {
            let k = Integer::div_ceil(&det(prev, g2), &det(cur, g2));
            let next = [k * cur[0] - prev[0], k * cur[1] - prev[1]];
            prev = cur;
            cur = next;
            out.push(cur);
        }
        out
    }
}

/// A linear weight `v ↦ ⟨u, v⟩` on the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector(pub LatticePoint);

impl WeightVector {
    pub fn new(a: i64, b: i64) -> Self {
        Self([a, b])
    }

    /// The weight `(1, m)` of the `m`-th exceptional curve over the arrow.
    pub fn tower(m: i64) -> Self {
        Self([1, m])
    }

    pub fn eval(&self, v: LatticePoint) -> i64 {
        dot(self.0, v)
    }

    /// Strict positivity on every nonzero lattice point of the cone.
    pub fn is_positive_on(&self, cone: &Cone2D) -> bool {
        self.eval(cone.gen1()) > 0 && self.eval(cone.gen2()) > 0
    }

    pub(crate) fn check(&self, cone: &Cone2D) -> Result<(), ToricError> {
        if self.is_positive_on(cone) {
            Ok(())
        } else {
            Err(ToricError::NonPositiveWeight(self.0))
        }
    }
}
