//! Coefficient fields for exact polynomial arithmetic.
//!
//! Everything downstream (polynomials, series, matrices) is generic over a
//! [`Scalar`], which is an exact field with decidable equality. The two
//! instances used in practice are `Rat` (arbitrary-precision rationals) and
//! [`crate::cyclo::CycNum`] (cyclotomic numbers).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

/// Arbitrary-precision rational number, the base coefficient field.
pub type Rat = BigRational;

/// Exact field operations required of polynomial/series coefficients.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn div_exact(&self, rhs: &Self) -> Self {
        self.clone() * rhs.inv().expect("division by zero scalar")
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn is_zero(&self) -> bool {
        <Rat as Zero>::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }
    fn inv(&self) -> Option<Self> {
        if <Rat as Zero>::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the rational n/d.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical textual form of a rational: `p` for integers, `p/q` otherwise,
/// with the sign on the numerator.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rat::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Rat::from_integer(n))
    }
}

/// True if `r` is the square of a rational, returning the positive root.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Exact integer k-th root of a nonnegative BigInt, if one exists.
pub fn bigint_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    assert!(!n.is_negative() && k >= 1);
    let r = n.nth_root(k);
    if num::pow::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_string_round_trip() {
        for (n, d) in [(1, 1), (-3, 2), (0, 1), (7, 5)] {
            let r = ratio(n, d);
            assert_eq!(rat_from_str(&rat_to_string(&r)).unwrap(), r);
        }
    }

    #[test]
    fn sqrt_detection() {
        assert_eq!(rat_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rat_sqrt(&rat(2)), None);
        assert_eq!(rat_sqrt(&rat(-4)), None);
    }
}
