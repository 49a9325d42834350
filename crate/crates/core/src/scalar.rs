//! Coefficient traits shared by every generic container in the crate.

use std::fmt::{Debug, Display};
use std::ops::{Div, Neg, Sub};

use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Zero};

/// Exponent-level rationals: components, truncation orders, weights.
pub type Rat = Ratio<i64>;

/// Minimum requirements on series and polynomial coefficients.
///
/// Any commutative ring with exact equality works: `i64`, `BigInt`,
/// `Ratio<i64>`, `BigRational`.
pub trait Coeff:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + FromPrimitive
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Send
    + Sync
    + 'static
{
}

impl<T> Coeff for T where
    T: Clone
        + Debug
        + Display
        + PartialEq
        + Zero
        + One
        + FromPrimitive
        + Neg<Output = T>
        + Sub<Output = T>
        + Send
        + Sync
        + 'static
{
}

/// Coefficients that also form an ordered field (exact linear algebra).
pub trait FieldCoeff: Coeff + Div<Output = Self> + PartialOrd {}

impl<T> FieldCoeff for T where T: Coeff + Div<Output = T> + PartialOrd {}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a.max(b);
    }
    a / gcd_u64(a, b) * b
}
