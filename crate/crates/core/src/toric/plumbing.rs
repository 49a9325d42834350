use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ToricError;
use crate::scalar::Rat;

/// JSON shape of a plumbing graph:
/// `{"vertices": [-3, -2], "edges": [[0, 1]], "arrows": {"0": 1}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<i64>,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub arrows: BTreeMap<usize, u32>,
}

/// A connected resolution graph with negative definite intersection matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingGraph {
    self_int: Vec<i64>,
    edges: BTreeSet<(usize, usize)>,
    arrows: BTreeMap<usize, u32>,
}

impl PlumbingGraph {
    pub fn new(
        self_int: Vec<i64>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        arrows: impl IntoIterator<Item = (usize, u32)>,
    ) -> Result<Self, ToricError> {
        let n = self_int.len();
        if n == 0 {
            return Err(ToricError::EmptyGraph);
        }
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(ToricError::VertexOutOfRange { vertex: v, count: n });
                }
            }
            if a == b {
                return Err(ToricError::SelfLoop(a));
            }
            if !edge_set.insert((a.min(b), a.max(b))) {
                return Err(ToricError::DuplicateEdge(a, b));
            }
        }
        let mut arrow_map = BTreeMap::new();
        for (v, k) in arrows {
            if v >= n {
                return Err(ToricError::VertexOutOfRange { vertex: v, count: n });
            }
            if k > 0 {
                *arrow_map.entry(v).or_insert(0) += k;
            }
        }
        let g = Self {
            self_int,
            edges: edge_set,
            arrows: arrow_map,
        };
        if !g.is_connected() {
            return Err(ToricError::Disconnected);
        }
        g.neg_inverse()?;
        Ok(g)
    }

    pub fn from_spec(spec: &GraphSpec) -> Result<Self, ToricError> {
        Self::new(
            spec.vertices.clone(),
            spec.edges.iter().map(|e| (e[0], e[1])),
            spec.arrows.iter().map(|(&v, &k)| (v, k)),
        )
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.self_int.clone(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            arrows: self.arrows.clone(),
        }
    }

    /// Minimal resolution graph of `X_{n,q}`: the chain `-b_1, ..., -b_r`
    /// with `n/q = b_1 - 1/(b_2 - ...)`, one arrow on the first vertex.
    pub fn cyclic_quotient(n: i64, q: i64) -> Result<Self, ToricError> {
        if !(0 < q && q < n) || n.gcd(&q) != 1 {
            return Err(ToricError::InvalidCyclicQuotient { n, q });
        }
        let (mut a, mut b) = (n, q);
        let mut chain = Vec::new();
        while b > 0 {
            let c = Integer::div_ceil(&a, &b);
            chain.push(-c);
            (a, b) = (b, c * b - a);
        }
        let r = chain.len();
        Self::new(chain, (1..r).map(|i| (i - 1, i)), [(0, 1)])
    }

    pub fn vertex_count(&self) -> usize {
        self.self_int.len()
    }

    pub fn self_intersections(&self) -> &[i64] {
        &self.self_int
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn arrows(&self, v: usize) -> u32 {
        self.arrows.get(&v).copied().unwrap_or(0)
    }

    /// Vertices carrying at least one arrow, ascending.
    pub fn arrow_vertices(&self) -> Vec<usize> {
        self.arrows.keys().copied().collect()
    }

    /// Number of graph edges at `v`; arrows are not counted.
    pub fn valency(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The intersection matrix: `e_v` on the diagonal, 1 for each edge.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0; n]; n];
        for (v, &e) in self.self_int.iter().enumerate() {
            m[v][v] = e;
        }
        for &(a, b) in &self.edges {
            m[a][b] = 1;
            m[b][a] = 1;
        }
        m
    }

    /// `-I^{-1}` over the rationals; fails unless `-I` is positive definite.
    ///
    /// Elimination without pivoting on `-I`: all pivots are positive exactly
    /// when every leading principal minor is, which is Sylvester's criterion.
    pub fn neg_inverse(&self) -> Result<Vec<Vec<BigRational>>, ToricError> {
        let n = self.vertex_count();
        let big = |x: i64| BigRational::from_integer(BigInt::from(x));
        let mut a: Vec<Vec<BigRational>> = self
            .intersection_matrix()
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r: Vec<_> = row.into_iter().map(|x| big(-x)).collect();
                r.extend((0..n).map(|j| big((i == j) as i64)));
                r
            })
            .collect();
        for col in 0..n {
            if !a[col][col].is_positive() {
                return Err(ToricError::NotNegativeDefinite);
            }
            let p = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x = &*x / &p;
            }
            for row in 0..n {
                if row != col && !a[row][col].is_zero() {
                    let f = a[row][col].clone();
                    #[allow(clippy::needless_range_loop)] // rows `row` and `col` of the same matrix
                    for j in 0..2 * n {
                        let delta = &f * &a[col][j];
                        a[row][j] -= delta;
                    }
                }
            }
        }
        Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Columns of `-I^{-1}`: column `v` lists the coefficients of `E_v^*`.
    pub fn inverse_columns(&self) -> Result<Vec<Vec<Rat>>, ToricError> {
        let inv = self.neg_inverse()?;
        let n = self.vertex_count();
        (0..n)
            .map(|v| {
                (0..n)
                    .map(|w| {
                        let x = &inv[w][v];
                        match (x.numer().to_i64(), x.denom().to_i64()) {
                            (Some(p), Some(q)) => Ok(Rat::new(p, q)),
                            _ => Err(ToricError::Overflow),
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `times` point blow-ups at the base point of an arrow on `vertex`.
    ///
    /// Each step appends a `-1` vertex joined to the current arrow vertex,
    /// moves the arrow onto it and lowers the old vertex's self-intersection.
    pub fn blowup_at_arrow(&self, vertex: usize, times: u32) -> Result<Self, ToricError> {
        if vertex >= self.vertex_count() {
            return Err(ToricError::VertexOutOfRange {
                vertex,
                count: self.vertex_count(),
            });
        }
        if self.arrows(vertex) == 0 {
            return Err(ToricError::NoArrow(vertex));
        }
        let mut g = self.clone();
        let mut cur = vertex;
        for _ in 0..times {
            let new = g.self_int.len();
            g.self_int.push(-1);
            g.self_int[cur] -= 1;
            g.edges.insert((cur, new));
            let k = g.arrows.get_mut(&cur).expect("arrow present");
            *k -= 1;
            if *k == 0 {
                g.arrows.remove(&cur);
            }
            *g.arrows.entry(new).or_insert(0) += 1;
            cur = new;
        }
        Ok(g)
    }
}
