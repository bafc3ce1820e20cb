//! Floating-point formats and the error parameters derived from them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::scalar::{pow2, Scalar};
use crate::Error;

/// A binary floating-point sort `(_ FloatingPoint eb sb)`.
///
/// `sb` counts the hidden bit, so binary64 is `(11, 53)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpFormat {
    eb: u32,
    sb: u32,
}

pub const MAX_EXPONENT_BITS: u32 = 30;
pub const MAX_SIGNIFICAND_BITS: u32 = 4096;

impl FpFormat {
    pub const FLOAT16: FpFormat = FpFormat { eb: 5, sb: 11 };
    pub const FLOAT32: FpFormat = FpFormat { eb: 8, sb: 24 };
    pub const FLOAT64: FpFormat = FpFormat { eb: 11, sb: 53 };
    pub const FLOAT128: FpFormat = FpFormat { eb: 15, sb: 113 };

    pub fn new(eb: u32, sb: u32) -> Result<Self, Error> {
        if eb < 2 || sb < 2 {
            return Err(Error::InvalidFormat {
                eb,
                sb,
                reason: "both eb and sb must be at least 2",
            });
        }
        if eb > MAX_EXPONENT_BITS || sb > MAX_SIGNIFICAND_BITS {
            return Err(Error::InvalidFormat {
                eb,
                sb,
                reason: "format too large",
            });
        }
        Ok(FpFormat { eb, sb })
    }

    pub fn eb(self) -> u32 {
        self.eb
    }

    pub fn sb(self) -> u32 {
        self.sb
    }

    /// Largest exponent, `2^(eb-1) - 1`.
    pub fn e_max(self) -> i64 {
        (1i64 << (self.eb - 1)) - 1
    }

    /// Smallest exponent of a finite value, `1 - e_max`.
    pub fn e_min(self) -> i64 {
        1 - self.e_max()
    }

    /// Inverse slope of the relative error bound, `2^(sb-1)`.
    pub fn ed(self) -> BigRational {
        pow2(i64::from(self.sb) - 1)
    }

    /// Absolute error bound near zero: the smallest positive subnormal,
    /// `2^(2 - e_max - sb)`.
    pub fn em(self) -> BigRational {
        pow2(2 - self.e_max() - i64::from(self.sb))
    }

    /// Largest finite magnitude, `(2^sb - 1) * 2^(e_max - sb + 1)`.
    pub fn max_fp(self) -> BigRational {
        let significand = (BigInt::one() << self.sb) - BigInt::one();
        BigRational::from_integer(significand) * pow2(self.e_max() - i64::from(self.sb) + 1)
    }

    /// Componentwise minimum, used to clamp a precision ladder step to a bound.
    pub fn clamp_to(self, bound: FpFormat) -> FpFormat {
        FpFormat {
            eb: self.eb.min(bound.eb),
            sb: self.sb.min(bound.sb),
        }
    }

    /// Number of distinct values including both zeros, both infinities and a
    /// single NaN.
    pub fn value_count(self) -> Option<u128> {
        if self.eb + self.sb > 120 {
            return None;
        }
        let exponents = (2u128 << (self.eb - 1)) - 2;
        let per_sign = exponents * (1u128 << (self.sb - 1)) + (1u128 << (self.sb - 1)) - 1;
        Some(2 * per_sign + 5)
    }

    pub fn precision(self) -> Precision<BigRational> {
        Precision {
            ed: self.ed(),
            em: self.em(),
            max: self.max_fp(),
        }
    }
}

impl fmt::Display for FpFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({},{})", self.eb, self.sb)
    }
}

/// Checked constructor mirroring [`FpFormat::new`].
pub fn make_format(eb: u32, sb: u32) -> Result<FpFormat, Error> {
    FpFormat::new(eb, sb)
}

/// The three numbers the rounding operators need.
///
/// Usually all three come from one format, but the incremental ladder pairs
/// the error slope of a coarse format with the range of the bound format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Precision<S> {
    pub ed: S,
    pub em: S,
    pub max: S,
}

impl<S: Scalar> Precision<S> {
    pub fn of(format: FpFormat) -> Option<Self> {
        Self::mixed(format, format)
    }

    /// Error parameters of `error`, range of `range`.
    pub fn mixed(error: FpFormat, range: FpFormat) -> Option<Self> {
        Some(Precision {
            ed: S::from_big(&error.ed())?,
            em: S::from_big(&error.em())?,
            max: S::from_big(&range.max_fp())?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::big;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_format_parameters() {
        let f = make_format(4, 4).unwrap();
        assert_eq!(f.e_max(), 7);
        assert_eq!(f.ed(), big(8));
        assert_eq!(f.em(), q(1, 512));
        assert_eq!(f.max_fp(), big(240));
    }

    #[test]
    fn binary64_parameters() {
        let f = make_format(11, 53).unwrap();
        assert_eq!(f.e_max(), 1023);
        assert_eq!(f.ed(), pow2(52));
        assert_eq!(f.em(), pow2(-1074));
        let max = BigRational::from_integer((BigInt::one() << 53) - BigInt::one()) * pow2(971);
        assert_eq!(f.max_fp(), max);
        // f64::MAX is exactly (2^53 - 1) * 2^971.
        let from_hw = BigRational::from_float(f64::MAX).unwrap();
        assert_eq!(f.max_fp(), from_hw);
        assert_eq!(f.em(), BigRational::from_float(f64::from_bits(1)).unwrap());
    }

    #[test]
    fn tiny_format_parameters() {
        let f = make_format(2, 2).unwrap();
        assert_eq!(f.e_max(), 1);
        assert_eq!(f.ed(), big(2));
        assert_eq!(f.em(), q(1, 2));
        assert_eq!(f.max_fp(), big(3));
    }

    #[test]
    fn degenerate_formats_rejected() {
        assert!(make_format(1, 4).is_err());
        assert!(make_format(4, 1).is_err());
        assert!(make_format(0, 0).is_err());
    }

    #[test]
    fn value_counts() {
        // 256 bit patterns, 14 of which are NaN payloads collapsed to one.
        assert_eq!(FpFormat::new(4, 4).unwrap().value_count(), Some(243));
        assert_eq!(FpFormat::new(2, 2).unwrap().value_count(), Some(15));
    }

    #[test]
    fn clamp_takes_componentwise_minimum() {
        let step = FpFormat::new(15, 113).unwrap();
        assert_eq!(step.clamp_to(FpFormat::FLOAT64), FpFormat::FLOAT64);
        let step = FpFormat::new(8, 24).unwrap();
        assert_eq!(step.clamp_to(FpFormat::FLOAT64), FpFormat::FLOAT32);
    }
}
