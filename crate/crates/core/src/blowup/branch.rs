use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use super::script::{BlowupScript, BlowupStep};
use super::BlowupError;
use crate::Rational;

/// Precision used when a parametrization file lists no `precision`.
pub const DEFAULT_BRANCH_PRECISION: u64 = 40;

/// A branch `t ↦ (γ_1(t), ..., γ_n(t))` through the origin, each coordinate
/// known up to and including `t^precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchParametrization {
    coords: Vec<Vec<Rational>>,
    precision: u64,
}

fn trim(mut c: Vec<Rational>) -> Vec<Rational> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

impl BranchParametrization {
    /// Coordinates as dense coefficient lists (index = power of `t`); terms
    /// above `precision` are dropped.
    pub fn new(coords: Vec<Vec<Rational>>, precision: u64) -> Result<Self, BlowupError> {
        if coords.is_empty() {
            return Err(BlowupError::ConstantBranch);
        }
        let keep = precision as usize + 1;
        let coords: Vec<Vec<Rational>> = coords
            .into_iter()
            .map(|mut c| {
                c.truncate(keep);
                trim(c)
            })
            .collect();
        if coords.iter().any(|c| c.first().is_some_and(|x| !x.is_zero())) {
            return Err(BlowupError::NotThroughOrigin);
        }
        if coords.iter().all(|c| c.is_empty()) {
            return Err(BlowupError::ConstantBranch);
        }
        Ok(Self { coords, precision })
    }

    /// Builds from sparse `(order, coeff)` pairs per coordinate.
    pub fn from_pairs(pairs: &[Vec<(u64, Rational)>], precision: u64) -> Result<Self, BlowupError> {
        let coords = pairs
            .iter()
            .map(|c| {
                let len = c.iter().map(|(k, _)| *k as usize + 1).max().unwrap_or(0);
                let mut dense = vec![Rational::zero(); len];
                for (k, v) in c {
                    dense[*k as usize] += v.clone();
                }
                dense
            })
            .collect();
        Self::new(coords, precision)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn coord(&self, i: usize) -> &[Rational] {
        &self.coords[i]
    }

    /// Parameter order of coordinate `i`; `None` if it vanishes to the full
    /// precision.
    pub fn coord_order(&self, i: usize) -> Option<u64> {
        self.coords[i].iter().position(|x| !x.is_zero()).map(|k| k as u64)
    }

    pub fn to_spec(&self) -> BranchSpec {
        BranchSpec::WithPrecision {
            coords: self
                .coords
                .iter()
                .map(|c| {
                    c.iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(k, v)| (k as u64, CoeffSpec::from_rational(v)))
                        .collect()
                })
                .collect(),
            precision: self.precision,
        }
    }

    pub fn from_spec(spec: &BranchSpec) -> Result<Self, BlowupError> {
        let (coords, precision) = match spec {
            BranchSpec::WithPrecision { coords, precision } => (coords, Some(*precision)),
            BranchSpec::Bare(coords) => (coords, None),
        };
        let pairs = coords
            .iter()
            .map(|c| c.iter().map(|(k, v)| Ok((*k, v.to_rational()?))).collect())
            .collect::<Result<Vec<Vec<_>>, BlowupError>>()?;
        let top = pairs.iter().flatten().map(|(k, _)| *k).max().unwrap_or(0);
        Self::from_pairs(&pairs, precision.unwrap_or(DEFAULT_BRANCH_PRECISION.max(top)))
    }
}

/// A coefficient in a parametrization file: an integer or a string such as `"-3/2"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Int(i64),
    Text(String),
}

impl CoeffSpec {
    fn from_rational(r: &Rational) -> Self {
        if r.is_integer() {
            if let Ok(i) = i64::try_from(r.to_integer()) {
                return CoeffSpec::Int(i);
            }
        }
        CoeffSpec::Text(r.to_string())
    }

    fn to_rational(&self) -> Result<Rational, BlowupError> {
        match self {
            CoeffSpec::Int(i) => Ok(Rational::from_integer((*i).into())),
            CoeffSpec::Text(s) => Rational::from_str(s.trim()).map_err(|_| BlowupError::BadCoefficient(s.clone())),
        }
    }
}

/// Parametrization file: `[[[2, 1]], [[3, 1]]]` (coordinate → list of
/// `[order, coeff]`) or `{"coords": ..., "precision": 30}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BranchSpec {
    WithPrecision { coords: Vec<Vec<(u64, CoeffSpec)>>, precision: u64 },
    Bare(Vec<Vec<(u64, CoeffSpec)>>),
}

/// `f ∘ γ` up to the precision of `γ`, as a dense coefficient list.
fn compose(f: &Polynomial<Rational>, gamma: &BranchParametrization) -> Vec<Rational> {
    let keep = gamma.precision as usize + 1;
    let mul = |a: &[Rational], b: &[Rational]| {
        let mut out = vec![Rational::zero(); (a.len() + b.len()).saturating_sub(1).min(keep)];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(keep.saturating_sub(i)) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let mut total = vec![Rational::zero(); keep];
    for (e, c) in f.terms() {
        let mut term = vec![c.clone()];
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                term = mul(&term, &gamma.coords[i]);
            }
        }
        for (k, v) in term.into_iter().enumerate() {
            total[k] += v;
        }
    }
    total
}

/// Parameter order of `f ∘ γ`.
///
/// Certified whenever a nonzero coefficient appears within the precision;
/// otherwise the order is only known to exceed it.
pub fn curve_valuation(f: &Polynomial<Rational>, gamma: &BranchParametrization) -> Result<u64, BlowupError> {
    if f.vars() != gamma.dim() {
        return Err(BlowupError::VarCountMismatch {
            expected: gamma.dim(),
            found: f.vars(),
        });
    }
    compose(f, gamma)
        .iter()
        .position(|x| !x.is_zero())
        .map(|k| k as u64)
        .ok_or(BlowupError::Uncertified {
            at_least: gamma.precision + 1,
        })
}

/// How to pick the chart when both coordinates have the same order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    First,
    Last,
}

/// `a / b` for power series known up to `t^n`, with `b(0) ≠ 0`.
fn divide_unit(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let b0_inv = Rational::one() / b[0].clone();
    let mut q: Vec<Rational> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut acc = a.get(k).cloned().unwrap_or_else(Rational::zero);
        for j in 1..=k.min(b.len().saturating_sub(1)) {
            acc -= &b[j] * &q[k - j];
        }
        q.push(acc * &b0_inv);
    }
    trim(q)
}

/// One point blow-up following `g`: the chart steps, the strict transform,
/// the principal coordinate and whether the other one was recentred.
fn blowup_once(
    g: &BranchParametrization,
    tie: TieBreak,
) -> Result<(Vec<BlowupStep>, BranchParametrization, usize, bool), BlowupError> {
    let (o0, o1) = (g.coord_order(0), g.coord_order(1));
    let p = match (o0, o1) {
        (None, None) => {
            return Err(BlowupError::InsufficientPrecision {
                precision: g.precision,
            })
        }
        (Some(_), None) => 0,
        (None, Some(_)) => 1,
        (Some(a), Some(b)) if a == b => match tie {
            TieBreak::First => 0,
            TieBreak::Last => 1,
        },
        (Some(a), Some(b)) => usize::from(b < a),
    };
    let q = 1 - p;
    let a = g.coord_order(p).expect("principal order exists") as usize;
    let n = g.precision as usize - a;
    if a > n {
        // the strict transform would lose its own principal coordinate
        return Err(BlowupError::InsufficientPrecision { precision: g.precision });
    }
    let unit = &g.coords[p][a..];
    let shifted: Vec<Rational> = g.coords[q].iter().skip(a).cloned().collect();
    let mut quotient = divide_unit(&shifted, unit, n);
    let mut steps = vec![BlowupStep::Chart {
        center: vec![0, 1],
        principal: p,
    }];
    let recentred = match quotient.first().filter(|c| !c.is_zero()).cloned() {
        Some(c) => {
            steps.push(BlowupStep::Change {
                target: q,
                poly: Polynomial::constant(2, c),
            });
            quotient[0] = Rational::zero();
            true
        }
        None => false,
    };
    let mut coords = vec![Vec::new(), Vec::new()];
    coords[p] = g.coords[p].clone();
    coords[q] = quotient;
    Ok((steps, BranchParametrization::new(coords, n as u64)?, p, recentred))
}

/// `m` point blow-ups of the plane following the branch `γ`.
///
/// Each step uses the chart of the coordinate of least parameter order
/// (`tie` decides equal orders), divides the other coordinate by it, and
/// recentres that quotient by its constant term. Returns the script and the
/// strict transform's parametrization, whose precision drops by the
/// principal order at every step.
pub fn branch_blowup_script(
    gamma: &BranchParametrization,
    m: u32,
    tie: TieBreak,
) -> Result<(BlowupScript, BranchParametrization), BlowupError> {
    if gamma.dim() != 2 {
        return Err(BlowupError::NotPlane(gamma.dim()));
    }
    let mut steps = Vec::new();
    let mut g = gamma.clone();
    for _ in 0..m {
        let (s, next, _, _) = blowup_once(&g, tie)?;
        steps.extend(s);
        g = next;
    }
    Ok((BlowupScript::new(2, steps)?, g))
}

/// Number of blow-ups after which the strict transform is smooth, meets the
/// exceptional locus only in the last divisor and is transverse to it. This
/// is the embedded resolution the tower of divisors starts from.
pub fn resolution_length(gamma: &BranchParametrization, tie: TieBreak) -> Result<u32, BlowupError> {
    if gamma.dim() != 2 {
        return Err(BlowupError::NotPlane(gamma.dim()));
    }
    // which coordinate hyperplanes of the current chart are exceptional
    let mut exceptional = [false, false];
    let mut g = gamma.clone();
    for k in 1.. {
        let (_, next, p, recentred) = blowup_once(&g, tie)?;
        exceptional[p] = true;
        if recentred {
            exceptional[1 - p] = false;
        }
        g = next;
        if g.coord_order(p) == Some(1) && !exceptional[1 - p] {
            return Ok(k);
        }
    }
    unreachable!("precision runs out first")
}
