use std::fmt::Write as _;

use super::{toric_description, LimitsError};
use crate::blowup::{
    branch_blowup_script, curve_valuation, exceptional_order, membership_g, resolution_length, BlowupScript,
    BranchParametrization, ExtOrder, HypersurfaceModel, Polynomial, TieBreak,
};
use crate::toric::{Cone2D, LatticePoint, WeightVector};
use crate::Rational;

/// A tower of filtrations `F_{I,m}` given by valuation oracles, together
/// with the valuations defining the candidate limit `G_I`.
pub trait FiltrationFamily {
    type Element;

    /// `|I|`.
    fn indices(&self) -> usize;

    fn description(&self) -> String;

    fn describe(&self, f: &Self::Element) -> String;

    /// `val_{E_{i,m}}(f)`.
    fn valuation(&self, f: &Self::Element, i: usize, m: u32) -> Result<ExtOrder, LimitsError>;

    /// `val_{C_i}(f̄)`.
    fn target(&self, f: &Self::Element, i: usize) -> Result<ExtOrder, LimitsError>;
}

/// The quadric cone `xy - z²`: `E_m` from [`HypersurfaceModel::script`],
/// limit valuation from the normal form modulo `xy - z²`.
#[derive(Clone, Copy, Debug, Default)]
pub struct QuadricFamily;

impl FiltrationFamily for QuadricFamily {
    type Element = Polynomial<Rational>;

    fn indices(&self) -> usize {
        1
    }

    fn description(&self) -> String {
        "quadric xy - z^2".into()
    }

    fn describe(&self, f: &Self::Element) -> String {
        f.to_string()
    }

    fn valuation(&self, f: &Self::Element, _i: usize, m: u32) -> Result<ExtOrder, LimitsError> {
        Ok(exceptional_order(f, &HypersurfaceModel::new(m).script())?)
    }

    fn target(&self, f: &Self::Element, _i: usize) -> Result<ExtOrder, LimitsError> {
        Ok(membership_g(f)?)
    }
}

/// A plane branch. `E_0` is the last divisor of the embedded resolution
/// and `E_m` comes from `m` further blow-ups at the point on the strict
/// transform. The limit is the parameter order along the branch.
#[derive(Clone, Debug)]
pub struct BranchFamily {
    gamma: BranchParametrization,
    tie: TieBreak,
    resolution: u32,
}

impl BranchFamily {
    pub fn new(gamma: BranchParametrization) -> Result<Self, LimitsError> {
        Self::with_tie(gamma, TieBreak::First)
    }

    pub fn with_tie(gamma: BranchParametrization, tie: TieBreak) -> Result<Self, LimitsError> {
        let resolution = resolution_length(&gamma, tie)?;
        Ok(Self { gamma, tie, resolution })
    }

    pub fn gamma(&self) -> &BranchParametrization {
        &self.gamma
    }

    /// Blow-ups of the embedded resolution.
    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    /// Script whose last divisor is `E_m`.
    pub fn script(&self, m: u32) -> Result<BlowupScript, LimitsError> {
        Ok(branch_blowup_script(&self.gamma, self.resolution + m, self.tie)?.0)
    }
}

impl FiltrationFamily for BranchFamily {
    type Element = Polynomial<Rational>;

    fn indices(&self) -> usize {
        1
    }

    fn description(&self) -> String {
        "plane branch".into()
    }

    fn describe(&self, f: &Self::Element) -> String {
        f.to_string()
    }

    fn valuation(&self, f: &Self::Element, _i: usize, m: u32) -> Result<ExtOrder, LimitsError> {
        Ok(exceptional_order(f, &self.script(m)?)?)
    }

    fn target(&self, f: &Self::Element, _i: usize) -> Result<ExtOrder, LimitsError> {
        Ok(ExtOrder::Finite(curve_valuation(f, &self.gamma)?))
    }
}

/// Monomials of a toric surface under the tower weights `(1, m)`; the
/// limit valuation is the first coordinate on the ray `b = 0` and infinite
/// elsewhere.
#[derive(Clone, Copy, Debug)]
pub struct ToricFamily {
    pub cone: Cone2D,
}

impl FiltrationFamily for ToricFamily {
    type Element = LatticePoint;

    fn indices(&self) -> usize {
        1
    }

    fn description(&self) -> String {
        toric_description(&self.cone)
    }

    fn describe(&self, v: &LatticePoint) -> String {
        format!("({},{})", v[0], v[1])
    }

    fn valuation(&self, v: &LatticePoint, _i: usize, m: u32) -> Result<ExtOrder, LimitsError> {
        let w = WeightVector::tower(m as i64);
        if !self.cone.contains(*v) {
            return Err(LimitsError::Oracle(format!("point {v:?} outside the cone")));
        }
        w.is_positive_on(&self.cone)
            .then(|| ExtOrder::Finite(w.eval(*v) as u64))
            .ok_or_else(|| LimitsError::Oracle(format!("weight (1,{m}) not positive on the cone")))
    }

    fn target(&self, v: &LatticePoint, _i: usize) -> Result<ExtOrder, LimitsError> {
        Ok(if v[1] == 0 {
            ExtOrder::Finite(v[0] as u64)
        } else {
            ExtOrder::Infinite
        })
    }
}

/// What was checked for one `(f, i, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SandwichOutcome {
    Ok,
    /// Names of the failed conditions.
    Violation(Vec<&'static str>),
    Error(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichLine {
    pub element: String,
    pub index: usize,
    pub m: u32,
    pub valuation: Option<ExtOrder>,
    pub target: Option<ExtOrder>,
    pub outcome: SandwichOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichReport {
    pub family: String,
    pub m_max: u32,
    pub lines: Vec<SandwichLine>,
}

impl SandwichReport {
    pub fn violations(&self) -> usize {
        self.lines
            .iter()
            .filter(|l| matches!(l.outcome, SandwichOutcome::Violation(_)))
            .count()
    }

    pub fn errors(&self) -> usize {
        self.lines
            .iter()
            .filter(|l| matches!(l.outcome, SandwichOutcome::Error(_)))
            .count()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0 && self.errors() == 0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let show = |x: Option<ExtOrder>| x.map_or("?".to_string(), |v| v.to_string());
            let status = match &l.outcome {
                SandwichOutcome::Ok => "ok".to_string(),
                SandwichOutcome::Violation(v) => format!("VIOLATION {}", v.join(",")),
                SandwichOutcome::Error(e) => format!("ERROR {e}"),
            };
            let _ = writeln!(
                out,
                "f={} i={} m={} val={} target={} {status}",
                l.element,
                l.index,
                l.m,
                show(l.valuation),
                show(l.target)
            );
        }
        let _ = writeln!(
            out,
            "sandwich family=\"{}\" mmax={} checks={} violations={} errors={} status={}",
            self.family,
            self.m_max,
            self.lines.len(),
            self.violations(),
            self.errors(),
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

/// Checks, for every element, index and `0 ≤ m ≤ m_max`:
/// `val_m ≤ T`, `val_m ≥ min(T, m)` and `val_m ≥ val_{m-1}`, where `T` is
/// the limit valuation. Together the first two give equality from
/// `m = M(T) = T` on. Oracle failures are recorded per line.
pub fn check_sandwich<F: FiltrationFamily>(
    fam: &F,
    corpus: &[F::Element],
    m_max: u32,
) -> Result<SandwichReport, LimitsError> {
    if corpus.is_empty() {
        return Err(LimitsError::EmptyCorpus);
    }
    let mut lines = Vec::new();
    for f in corpus {
        let element = fam.describe(f);
        for i in 0..fam.indices() {
            let target = fam.target(f, i);
            let mut prev: Option<ExtOrder> = None;
            for m in 0..=m_max {
                let val = fam.valuation(f, i, m);
                let outcome = match (&val, &target) {
                    (Err(e), _) | (_, Err(e)) => SandwichOutcome::Error(e.to_string()),
                    (Ok(v), Ok(t)) => {
                        let mut failed = Vec::new();
                        if v > t {
                            failed.push("above-limit");
                        }
                        let floor = (*t).min(ExtOrder::Finite(m as u64));
                        if *v < floor {
                            failed.push("below-min(T,m)");
                        }
                        if prev.is_some_and(|p| *v < p) {
                            failed.push("not-monotone");
                        }
                        if failed.is_empty() {
                            SandwichOutcome::Ok
                        } else {
                            SandwichOutcome::Violation(failed)
                        }
                    }
                };
                prev = val.as_ref().ok().copied().or(prev);
                lines.push(SandwichLine {
                    element: element.clone(),
                    index: i,
                    m,
                    valuation: val.ok(),
                    target: target.as_ref().ok().copied(),
                    outcome,
                });
            }
        }
    }
    Ok(SandwichReport {
        family: fam.description(),
        m_max,
        lines,
    })
}
