//! Exact truncated multivariate series and closed-form generating functions
//! with nonnegative rational exponents.

mod exponent;
mod expr;
mod format;
mod normalize;
mod parse;
mod truncated;

use thiserror::Error;

pub use exponent::{fmt_rat, Exponent};
pub use expr::{default_var_names, ExponentPolynomial, RationalExpr};
pub use format::{parse_series, show_series, write_series};
pub use normalize::{normalized_poincare, NormalizationFactor};
pub use parse::parse_rational_expr;
pub use truncated::{Agreement, SupportBound, TruncatedSeries};


#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable counts differ: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("a series needs at least one variable")]
    NoVariables,
    #[error("negative truncation order {0}")]
    NegativeOrder(String),
    #[error("negative exponent component {0}")]
    NegativeExponent(String),
    #[error("denominator factor (1 - t^0) is zero")]
    ZeroDenominatorFactor,
    #[error("requested order {requested} exceeds the available truncation order {available}")]
    OrderExceeded { requested: String, available: String },
    #[error("variable index {index} out of range for {vars} variables")]
    InvalidVariable { index: usize, vars: usize },
    #[error("unsound specialization: needs input order {needed}, series is truncated at {available}")]
    UnsoundSpecialization { needed: String, available: String },
    #[error("term {0} violates the declared support bound")]
    SupportBoundViolated(String),
    #[error("factor with exponent {0} lives only in eliminated variables; specialization diverges")]
    NotSpecializable(String),
    #[error("series format, line {line}: {message}")]
    Format { line: usize, message: String },
}
