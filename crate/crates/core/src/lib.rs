//! Exact computations with divisorial filtrations on surface and
//! hypersurface germs and with their Poincaré series.

pub mod blowup;
pub mod limits;
pub mod scalar;
pub mod series;
pub mod text;
pub mod toric;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Coefficients of every dimension-counting series.
pub type Integer = BigInt;
/// Exact rational scalars for polynomial and branch coefficients.
pub type Rational = BigRational;
pub type Series = series::TruncatedSeries<Integer>;
pub type Expr = series::RationalExpr<Integer>;
