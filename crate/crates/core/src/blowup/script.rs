use serde::{Deserialize, Serialize};

use super::poly::{parse_polynomial, poly_var_names, Polynomial};
use super::{BlowupError, ExtOrder};
use crate::scalar::Rat;
use crate::series::{Exponent, TruncatedSeries};
use crate::Rational;

/// One step of a chart-level blow-up chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlowupStep {
    /// Blow up the locus `{x_i = 0 : i ∈ center}` in the chart where
    /// `principal` generates the exceptional divisor: `x_p = u` and
    /// `x_j = u·x_j` for the other center variables.
    Chart { center: Vec<usize>, principal: usize },
    /// New coordinate `x_t - poly`, i.e. substitute `x_t = x_t + poly`.
    /// `poly` may not involve `x_t`.
    Change { target: usize, poly: Polynomial<Rational> },
}

impl BlowupStep {
    fn images(&self, dim: usize) -> Vec<Polynomial<Rational>> {
        let mut images: Vec<_> = (0..dim).map(|i| Polynomial::var(dim, i)).collect();
        match self {
            BlowupStep::Chart { center, principal } => {
                let u = Polynomial::var(dim, *principal);
                for &j in center.iter().filter(|&&j| j != *principal) {
                    images[j] = u.mul(&images[j]);
                }
            }
            BlowupStep::Change { target, poly } => {
                images[*target] = images[*target].add(poly);
            }
        }
        images
    }
}

/// A validated sequence of [`BlowupStep`]s in `dim` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupScript {
    dim: usize,
    steps: Vec<BlowupStep>,
}

impl BlowupScript {
    pub fn new(dim: usize, steps: Vec<BlowupStep>) -> Result<Self, BlowupError> {
        let bad = |i: usize, m: String| Err(BlowupError::InvalidScript(format!("step {i}: {m}")));
        if dim == 0 {
            return Err(BlowupError::InvalidScript("dimension 0".into()));
        }
        for (i, step) in steps.iter().enumerate() {
            match step {
                BlowupStep::Chart { center, principal } => {
                    if center.len() < 2 {
                        return bad(i, "center needs at least two variables".into());
                    }
                    if let Some(&v) = center.iter().find(|&&v| v >= dim) {
                        return bad(i, format!("variable {v} out of range"));
                    }
                    let mut sorted = center.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != center.len() {
                        return bad(i, "repeated center variable".into());
                    }
                    if !center.contains(principal) {
                        return bad(i, "principal variable not in the center".into());
                    }
                }
                BlowupStep::Change { target, poly } => {
                    if *target >= dim || poly.vars() != dim {
                        return bad(i, "target or polynomial outside the ambient variables".into());
                    }
                    if poly.involves(*target) {
                        return bad(i, "coordinate change involves its own target".into());
                    }
                }
            }
        }
        Ok(Self { dim, steps })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[BlowupStep] {
        &self.steps
    }

    /// Script extended by `step`, revalidated.
    pub fn then(&self, step: BlowupStep) -> Result<Self, BlowupError> {
        let mut steps = self.steps.clone();
        steps.push(step);
        Self::new(self.dim, steps)
    }

    /// Slot of the exceptional coordinate introduced by the last blow-up.
    pub fn exceptional_var(&self) -> Result<usize, BlowupError> {
        let last = self
            .steps
            .iter()
            .rposition(|s| matches!(s, BlowupStep::Chart { .. }))
            .ok_or(BlowupError::NoBlowup)?;
        let BlowupStep::Chart { principal, .. } = &self.steps[last] else {
            unreachable!()
        };
        let touched = self.steps[last + 1..]
            .iter()
            .any(|s| matches!(s, BlowupStep::Change { target, .. } if target == principal));
        if touched {
            return Err(BlowupError::ExceptionalCoordinateChanged(*principal));
        }
        Ok(*principal)
    }

    /// `f ∘ π` exactly, in the final chart's variables.
    pub fn pullback_exact(&self, f: &Polynomial<Rational>) -> Result<Polynomial<Rational>, BlowupError> {
        if f.vars() != self.dim {
            return Err(BlowupError::VarCountMismatch {
                expected: self.dim,
                found: f.vars(),
            });
        }
        Ok(self.steps.iter().fold(f.clone(), |g, s| g.substitute(&s.images(self.dim))))
    }

    pub fn to_spec(&self) -> ScriptSpec {
        let names = poly_var_names(self.dim);
        ScriptSpec::Full {
            dim: self.dim,
            steps: self
                .steps
                .iter()
                .map(|s| match s {
                    BlowupStep::Chart { center, principal } => StepSpec::Blowup {
                        center: center.clone(),
                        principal: *principal,
                    },
                    BlowupStep::Change { target, poly } => StepSpec::Change {
                        target: *target,
                        poly: poly.display_with(&names),
                    },
                })
                .collect(),
        }
    }

    pub fn from_spec(spec: &ScriptSpec, default_dim: usize) -> Result<Self, BlowupError> {
        let (dim, steps) = match spec {
            ScriptSpec::Full { dim, steps } => (*dim, steps),
            ScriptSpec::Steps(steps) => (default_dim, steps),
        };
        let steps = steps
            .iter()
            .map(|s| {
                Ok(match s {
                    StepSpec::Blowup { center, principal } => BlowupStep::Chart {
                        center: center.clone(),
                        principal: *principal,
                    },
                    StepSpec::Change { target, poly } => BlowupStep::Change {
                        target: *target,
                        poly: parse_polynomial(poly, dim)?,
                    },
                })
            })
            .collect::<Result<Vec<_>, BlowupError>>()?;
        Self::new(dim, steps)
    }
}

/// JSON shape of one step:
/// `{"blowup": {"center": [0, 1, 2], "principal": 0}}` or
/// `{"change": {"target": 1, "poly": "z^2"}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepSpec {
    Blowup { center: Vec<usize>, principal: usize },
    Change { target: usize, poly: String },
}

/// A script file: `{"dim": 3, "steps": [...]}` or a bare list of steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScriptSpec {
    Full { dim: usize, steps: Vec<StepSpec> },
    Steps(Vec<StepSpec>),
}

/// `f ∘ π` as a series truncated at total degree `order`.
///
/// A nonzero pullback with no term inside the region is reported as
/// [`BlowupError::OrderInsufficient`] rather than returned as zero.
pub fn pullback(f: &Polynomial<Rational>, script: &BlowupScript, order: Rat) -> Result<TruncatedSeries<Rational>, BlowupError> {
    let g = script.pullback_exact(f)?;
    let terms = g
        .terms()
        .map(|(e, c)| (Exponent::integral(&e.iter().map(|&k| k as u64).collect::<Vec<_>>()), c.clone()));
    let s = TruncatedSeries::from_terms(script.dim(), order, terms)?;
    if s.is_zero() && !g.is_zero() {
        return Err(BlowupError::OrderInsufficient {
            lowest: g.order().unwrap_or(0),
        });
    }
    Ok(s)
}

/// Splits `p = x^α·q` with `q` not divisible by any coordinate.
fn split_monomial(p: &Polynomial<Rational>) -> (Vec<u32>, Polynomial<Rational>) {
    let mut alpha: Option<Vec<u32>> = None;
    for (e, _) in p.terms() {
        alpha = Some(match alpha {
            None => e.clone(),
            Some(a) => a.iter().zip(e).map(|(x, y)| *x.min(y)).collect(),
        });
    }
    let alpha = alpha.unwrap_or_else(|| vec![0; p.vars()]);
    let rest = Polynomial::from_terms(
        p.vars(),
        p.terms()
            .map(|(e, c)| (e.iter().zip(&alpha).map(|(x, a)| x - a).collect(), c.clone())),
    );
    (alpha, rest)
}

fn push_factor(factors: &mut Vec<(Polynomial<Rational>, u64)>, base: Polynomial<Rational>, k: u64) {
    match factors.iter_mut().find(|(b, _)| *b == base) {
        Some((_, m)) => *m += k,
        None => factors.push((base, k)),
    }
}

/// Order of `f ∘ π` along the last exceptional divisor: the exponent of the
/// largest power of its coordinate dividing the exact pullback.
///
/// The pullback is carried as a product `∏ B_i^{k_i}` with the monomial
/// content split off after every step. The order along a coordinate
/// hyperplane is a valuation, so it is `Σ k_i·ord(B_i)`, and powers of
/// earlier exceptional coordinates are never expanded by later changes.
pub fn exceptional_order(f: &Polynomial<Rational>, script: &BlowupScript) -> Result<ExtOrder, BlowupError> {
    let u = script.exceptional_var()?;
    let dim = script.dim();
    if f.vars() != dim {
        return Err(BlowupError::VarCountMismatch {
            expected: dim,
            found: f.vars(),
        });
    }
    if f.is_zero() {
        return Ok(ExtOrder::Infinite);
    }
    let mut factors = vec![(f.clone(), 1u64)];
    for step in script.steps() {
        let images = step.images(dim);
        let mut next = Vec::with_capacity(factors.len() + dim);
        let mut mono = vec![0u64; dim];
        for (base, k) in &factors {
            let (alpha, rest) = split_monomial(&base.substitute(&images));
            for (m, a) in mono.iter_mut().zip(alpha) {
                *m += a as u64 * k;
            }
            // nonzero constants never acquire an order
            if rest.degree() != Some(0) {
                push_factor(&mut next, rest, *k);
            }
        }
        for (j, m) in mono.into_iter().enumerate().filter(|(_, m)| *m > 0) {
            push_factor(&mut next, Polynomial::var(dim, j), m);
        }
        factors = next;
    }
    let order = factors
        .iter()
        .map(|(b, k)| b.order_in(u).expect("nonzero factor") as u64 * k)
        .sum();
    Ok(ExtOrder::Finite(order))
}
