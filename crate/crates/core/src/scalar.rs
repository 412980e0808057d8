//! Scalar traits the geometry is generic over.
//!
//! [`Ring`] is enough for exterior products, contractions and the
//! Chevalley–Eilenberg differential, so symbolic coefficients (see
//! [`crate::poly::MultiPoly`]) can flow through the same code. [`Scalar`]
//! adds field operations and an order; it is implemented for the exact
//! [`Rational`] type and for `f32`/`f64`.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number. All verification happens over this type.
pub type Rational = BigRational;

/// Commutative ring with unit, by-value arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Ordered field used for linear algebra, metrics and curvature.
pub trait Scalar: Ring + Num + PartialOrd + Display + Send + Sync + 'static {
    /// `num / den`; panics on a zero denominator.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Lift an exact rational into this scalar type.
    fn from_rational(q: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// Square root when it exists in the type (a rational square for exact
    /// types, any non-negative value for floats).
    fn sqrt_exact(&self) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

impl Scalar for Rational {
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if Signed::is_negative(self) {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_ratio(num: i64, den: i64) -> Self {
                assert!(den != 0, "zero denominator");
                num as $t / den as $t
            }

            fn from_rational(q: &Rational) -> Self {
                ToPrimitive::to_f64(q).unwrap_or(f64::NAN) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn sqrt_exact(&self) -> Option<Self> {
                (*self >= 0.0).then(|| self.sqrt())
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

/// Parse `"p/q"`, `"p"` or `"-p/q"` into a rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    let q: Rational = t.parse().ok()?;
    Some(q)
}

/// Render a rational as `"p/q"` (or `"p"` for integers).
pub fn fmt_rational<T: Scalar>(x: &T) -> String {
    x.to_string()
}

/// `n!` as a scalar.
pub fn factorial<T: Scalar>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_int(k as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn rational_sqrt() {
        assert_eq!(q(9, 4).sqrt_exact(), Some(q(3, 2)));
        assert_eq!(q(2, 1).sqrt_exact(), None);
        assert_eq!(q(-4, 1).sqrt_exact(), None);
        assert_eq!(q(0, 1).sqrt_exact(), Some(q(0, 1)));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-7"), Some(q(-7, 1)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(q(-1, 2).to_string(), "-1/2");
        assert_eq!(q(4, 2).to_string(), "2");
    }

    #[test]
    fn float_impls() {
        assert_eq!(f64::from_ratio(1, 4), 0.25);
        assert_eq!(4.0f32.sqrt_exact(), Some(2.0));
        assert_eq!(factorial::<f64>(4), 24.0);
        assert_eq!(factorial::<Rational>(3), q(6, 1));
    }
}
