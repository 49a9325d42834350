//! Blow-up chains in chart coordinates: pullbacks, exceptional orders,
//! branch valuations and the quadric-cone model.

mod branch;
mod poly;
mod quadric;
mod script;

use std::fmt;

use thiserror::Error;

use crate::series::SeriesError;
use crate::text::ParseError;

pub use branch::{
    branch_blowup_script, curve_valuation, resolution_length, BranchParametrization, BranchSpec, CoeffSpec, TieBreak,
    DEFAULT_BRANCH_PRECISION,
};
pub use poly::{parse_polynomial, parse_sparse_polynomial, poly_var_names, write_sparse_polynomial, Polynomial};
pub use quadric::{
    membership_g, poincare_abstract_hypersurface, quadric_normal_form, quadric_normal_form_with, HypersurfaceModel,
};
pub use script::{exceptional_order, pullback, BlowupScript, BlowupStep, ScriptSpec, StepSpec};

/// A nonnegative integer or `+∞`. `Finite(_) < Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtOrder {
    Finite(u64),
    Infinite,
}

impl ExtOrder {
    pub fn finite(self) -> Option<u64> {
        match self {
            ExtOrder::Finite(a) => Some(a),
            ExtOrder::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == ExtOrder::Infinite
    }
}

impl fmt::Display for ExtOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtOrder::Finite(a) => write!(f, "{a}"),
            ExtOrder::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid script: {0}")]
    InvalidScript(String),
    #[error("script contains no blow-up step")]
    NoBlowup,
    #[error("a coordinate change after the last blow-up moves the exceptional coordinate {0}")]
    ExceptionalCoordinateChanged(usize),
    #[error("expected {expected} variables, found {found}")]
    VarCountMismatch { expected: usize, found: usize },
    #[error("truncation order too small: the pullback starts in degree {lowest}")]
    OrderInsufficient { lowest: u32 },
    #[error("order not certified: vanishes to the available precision, order is at least {at_least}")]
    Uncertified { at_least: u64 },
    #[error("branch is constant")]
    ConstantBranch,
    #[error("branch does not pass through the origin")]
    NotThroughOrigin,
    #[error("branch following needs a plane branch, got {0} coordinates")]
    NotPlane(usize),
    #[error("parametrization precision {precision} exhausted before the requested blow-ups")]
    InsufficientPrecision { precision: u64 },
    #[error("bad coefficient {0:?}")]
    BadCoefficient(String),
    #[error("weights and degree must be positive")]
    NonPositiveWeight,
    #[error(transparent)]
    Series(#[from] SeriesError),
}
