//! Exact scalar types usable as interval bounds.
//!
//! Interval arithmetic in this crate never touches machine floats. Bounds are
//! exact rationals; [`BigRational`] is the default, and [`Ratio<i128>`] is a
//! faster alternative for small formats whose parameters fit in 128 bits.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact, totally ordered field element.
pub trait Scalar:
    Clone + Ord + fmt::Debug + fmt::Display + num_traits::Num + Signed + Send + Sync + 'static
{
    /// Converts from an arbitrary-precision rational, failing when the value
    /// does not fit.
    fn from_big(value: &BigRational) -> Option<Self>;

    fn to_big(&self) -> BigRational;

    fn from_i64(value: i64) -> Self;
}

impl Scalar for BigRational {
    fn from_big(value: &BigRational) -> Option<Self> {
        Some(value.clone())
    }

    fn to_big(&self) -> BigRational {
        self.clone()
    }

    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
}

impl Scalar for Ratio<i128> {
    fn from_big(value: &BigRational) -> Option<Self> {
        let numer = value.numer().to_i128()?;
        let denom = value.denom().to_i128()?;
        Some(Ratio::new(numer, denom))
    }

    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }

    fn from_i64(value: i64) -> Self {
        Ratio::from_integer(i128::from(value))
    }
}

/// `2^exp` as an exact rational.
pub fn pow2(exp: i64) -> BigRational {
    let magnitude = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        BigRational::from_integer(magnitude)
    } else {
        BigRational::new(BigInt::one(), magnitude)
    }
}

/// Formats a rational in lowest terms: a decimal when the expansion
/// terminates, `p/q` otherwise.
pub fn format_rational(value: &BigRational) -> String {
    if value.is_integer() {
        return value.numer().to_string();
    }
    let mut denom = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let digits = twos.max(fives);
    let scaled = value.abs() * BigRational::from_integer(BigInt::from(10).pow(digits));
    let text = scaled.to_integer().to_string();
    let width = digits as usize + 1;
    let padded = format!("{text:0>width$}");
    let (int_part, frac_part) = padded.split_at(padded.len() - digits as usize);
    let sign = if value.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

/// Parses `p`, `p/q`, or a decimal such as `-0.085546875` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = BigInt::from(10).pow(frac_part.len() as u32);
    let value = BigRational::new(digits, scale);
    Some(if negative { -value } else { value })
}

#[cfg(test)]
pub(crate) fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
