//! Rank-2 toric models: cones, weighted lattice points, toric Poincaré
//! series, plumbing graphs and the topological series `Z_o`.

mod cone;
mod enumerate;
mod plumbing;
mod poincare;
mod zo;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::SeriesError;

pub use cone::{Cone2D, LatticePoint, WeightVector};
pub use enumerate::{enumerate_weighted_points, WeightedPoint};
pub use plumbing::{GraphSpec, PlumbingGraph};
pub use poincare::{poincare_toric_closed, poincare_toric_enumerated};
pub use zo::{arrow_first_tracking, compute_zo, dual_exponent, reduce_zo_to_p, zo_vertex_power};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(LatticePoint),
    #[error("generators {0:?} and {1:?} are linearly dependent")]
    DependentGenerators(LatticePoint, LatticePoint),
    #[error("invalid cyclic quotient ({n}, {q}): need 0 < q < n and gcd(n, q) = 1")]
    InvalidCyclicQuotient { n: i64, q: i64 },
    #[error("weight {0:?} is not strictly positive on the cone")]
    NonPositiveWeight(LatticePoint),
    #[error("at least one weight vector is required")]
    NoWeights,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {vertex} out of range ({count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("intersection matrix is not negative definite")]
    NotNegativeDefinite,
    #[error("vertex {0} carries no arrow")]
    NoArrow(usize),
    #[error("vertex {0} is not tracked; every vertex needs a variable")]
    UntrackedVertex(usize),
    #[error("vertex {0} tracked twice")]
    DuplicateTracked(usize),
    #[error("invalid kept variables: {0}")]
    BadKeepVars(String),
    #[error("rational entry does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// JSON shape of a cone: `{"gen1": [1, 0], "gen2": [2, 5]}` or `{"cyclic": [5, 2]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConeSpec {
    Cyclic { cyclic: [i64; 2] },
    Generators { gen1: LatticePoint, gen2: LatticePoint },
}

impl ConeSpec {
    pub fn build(&self) -> Result<Cone2D, ToricError> {
        match *self {
            ConeSpec::Cyclic { cyclic: [n, q] } => Cone2D::cyclic_quotient(n, q),
            ConeSpec::Generators { gen1, gen2 } => Cone2D::new(gen1, gen2),
        }
    }
}
