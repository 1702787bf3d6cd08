//! Scalar abstraction shared by every geometric routine.
//!
//! All predicates in this crate are written against [`Scalar`]. With
//! [`Rational`](crate::Rational) they are exact; with `f64`/`f32` they are
//! quick approximations suitable for plotting or exploration.

use std::fmt::{Debug, Display};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// `true` when arithmetic and comparisons are exact.
    const EXACT: bool;

    fn from_rational(value: &BigRational) -> Self;

    /// Converts to an exact rational. Floats convert through their binary
    /// expansion.
    fn to_rational(&self) -> BigRational;

    fn to_f64(&self) -> f64;

    /// Returns `(lo, hi)` with `lo <= sqrt(self) <= hi` and
    /// `hi - lo <= 10^-digits`. Inexact scalars return `(s, s)`.
    fn sqrt_bracket(&self, digits: u32) -> (Self, Self);

    fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(&BigRational::new(numer.into(), denom.into()))
    }

    fn from_int(value: i64) -> Self {
        Self::ratio(value, 1)
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(value: &BigRational) -> Self {
        value.clone()
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sqrt_bracket(&self, digits: u32) -> (Self, Self) {
        sqrt_bracket_rational(self, digits)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(value: &BigRational) -> Self {
                ToPrimitive::to_f64(value).unwrap_or(f64::NAN) as $t
            }

            fn to_rational(&self) -> BigRational {
                BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn sqrt_bracket(&self, _digits: u32) -> (Self, Self) {
                let s = self.sqrt();
                (s, s)
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

/// Rational bracket of a square root at `digits` decimal places.
///
/// Negative inputs are clamped to zero.
pub fn sqrt_bracket_rational(value: &BigRational, digits: u32) -> (BigRational, BigRational) {
    if !value.is_positive() {
        return (BigRational::zero(), BigRational::zero());
    }
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (value.numer() * &scale * &scale).div_floor(value.denom());
    let root = scaled.sqrt();
    let lo = BigRational::new(root.clone(), scale.clone());
    if &root * &root * value.denom() == value.numer() * &scale * &scale {
        return (lo.clone(), lo);
    }
    let hi = BigRational::new(root + BigInt::one(), scale);
    (lo, hi)
}

/// Parses an integer or `p/q` literal into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Literal(text.to_string());
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p, q),
        None => (text, "1"),
    };
    if numer.is_empty() || denom.is_empty() || denom.starts_with(['+', '-']) {
        return Err(bad());
    }
    let numer = BigInt::from_str_radix(numer, 10).map_err(|_| bad())?;
    let denom = BigInt::from_str_radix(denom, 10).map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(numer, denom))
}

/// `p/q` form, or plain `p` when the denominator is 1.
pub fn format_rational(value: &BigRational) -> String {
    value.to_string()
}

/// Truncated decimal expansion with exactly `digits` fractional digits.
pub fn format_decimal(value: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (value.numer().abs() * &scale) / value.denom();
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let sign = if value.numer().sign() == Sign::Minus && !scaled.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{:0>width$}",
        frac_part.to_string(),
        width = digits as usize
    )
}

/// Lower decimal bracket of `sqrt(value)`.
pub fn format_sqrt_decimal(value: &BigRational, digits: u32) -> String {
    format_decimal(&sqrt_bracket_rational(value, digits).0, digits)
}

pub(crate) fn usize_scalar<S: Scalar>(n: usize) -> S {
    S::from_rational(&BigRational::from_usize(n).expect("usize fits a rational"))
}

pub(crate) fn pow<S: Scalar>(base: &S, exp: usize) -> S {
    let mut acc = S::one();
    for _ in 0..exp {
        acc = acc * base.clone();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn parses_literals() {
        assert_eq!(parse_rational("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_rational("4/6").unwrap(), q(2, 3));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert_eq!(parse_rational("-2/5").unwrap(), q(-2, 5));
        assert!(matches!(parse_rational("1/0"), Err(Error::DivisionByZero)));
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("/3").is_err());
    }

    #[test]
    fn formats_rationals() {
        assert_eq!(format_rational(&q(613, 73)), "613/73");
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert_eq!(format_decimal(&q(1, 3), 4), "0.3333");
        assert_eq!(format_decimal(&q(-5, 4), 2), "-1.25");
        assert_eq!(format_decimal(&q(613, 73), 0), "8");
    }

    #[test]
    fn sqrt_brackets() {
        let (lo, hi) = sqrt_bracket_rational(&q(8, 1), 6);
        assert!(&lo * &lo <= q(8, 1));
        assert!(&hi * &hi >= q(8, 1));
        assert!(&hi - &lo <= q(1, 1_000_000));
        let (lo, hi) = sqrt_bracket_rational(&q(9, 4), 3);
        assert_eq!(lo, q(3, 2));
        assert_eq!(hi, q(3, 2));
        assert_eq!(format_sqrt_decimal(&q(2, 1), 5), "1.41421");
    }
}
