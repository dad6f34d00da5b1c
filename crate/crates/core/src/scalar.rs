//! Numeric field abstraction shared by the metric and LP code.
//!
//! Everything that only needs field arithmetic and comparisons is written
//! against [`Scalar`], so the same routine runs on `f64` or exactly on
//! [`Rational`]. Exact types report zero slack, so every tolerance test
//! degenerates into an exact comparison.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Ordered field used for distances, weights and LP data.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `true` for exact arithmetic.
    const EXACT: bool;

    /// Absolute comparison slack at magnitude `scale` for relative tolerance `rel`.
    fn slack(scale: &Self, rel: f64) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts a finite `f64`. Rationals take the exact binary value.
    fn from_f64_exact(x: f64) -> Option<Self> {
        if x.is_finite() {
            Self::from_f64(x)
        } else {
            None
        }
    }

    fn from_int(x: i64) -> Self {
        Self::from_i64(x).expect("integer conversion")
    }

    fn half() -> Self {
        Self::one() / Self::from_int(2)
    }

    /// Nearest value to an exact rational.
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn slack(scale: &Self, rel: f64) -> Self {
        scale.abs().max(f64::MIN_POSITIVE) * rel
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn slack(_scale: &Self, _rel: f64) -> Self {
        Rational::zero()
    }
}

/// `a <= b` up to `tol`.
pub(crate) fn le_tol<T: Scalar>(a: &T, b: &T, tol: &T) -> bool {
    a.clone() <= b.clone() + tol.clone()
}

/// `|a - b| <= tol`.
pub fn eq_tol<T: Scalar>(a: &T, b: &T, tol: &T) -> bool {
    (a.clone() - b.clone()).abs() <= *tol
}

pub(crate) fn max_of<'a, T: Scalar>(values: impl IntoIterator<Item = &'a T>) -> T {
    values
        .into_iter()
        .fold(T::zero(), |m, v| if *v > m { v.clone() } else { m })
}

/// Parses a plain decimal (`-12.5`, `3`, `1e-3`, `7/2`) into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let all = all / BigInt::from(10);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("2.5").unwrap(), rational(5, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), rational(-1, 8));
        assert_eq!(parse_rational("3").unwrap(), rational(3, 1));
        assert_eq!(parse_rational("1e-3").unwrap(), rational(1, 1000));
        assert_eq!(parse_rational("1.5E2").unwrap(), rational(150, 1));
        assert_eq!(parse_rational("7/2").unwrap(), rational(7, 2));
        assert_eq!(parse_rational(".5").unwrap(), rational(1, 2));
        assert!(parse_rational("abc").is_none());
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("").is_none());
    }

    #[test]
    fn exact_slack_is_zero() {
        assert!(Rational::slack(&rational(5, 1), 1e-9).is_zero());
        assert!((f64::slack(&10.0, 1e-9) - 1e-8).abs() < 1e-20);
    }
}
