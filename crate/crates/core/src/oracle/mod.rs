//! Reference semantics of binary floating point, exact and exhaustive.

mod arith;
mod search;
mod sweep;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::format::FpFormat;
use crate::ia::{XRat, XVal};
use crate::scalar::pow2;
use crate::Error;

pub use arith::{fp_eval_op, fp_round};
pub use search::{
    brute_force_check, fp_eval_formula, fp_eval_term, BruteForce, ModeMap, OracleVerdict,
    SEARCH_LIMIT,
};
pub use sweep::{sweep_comparisons, sweep_enclosure, sweep_operators, SweepReport};

/// Largest format [`enumerate_fp`] accepts, in number of values.
pub const ENUMERATION_LIMIT: u128 = 1 << 20;

/// The five SMT-LIB rounding modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RoundingMode {
    RNE,
    RNA,
    RTP,
    RTN,
    RTZ,
}

impl RoundingMode {
    pub const ALL: [RoundingMode; 5] = [
        RoundingMode::RNE,
        RoundingMode::RNA,
        RoundingMode::RTP,
        RoundingMode::RTN,
        RoundingMode::RTZ,
    ];

    pub fn smt_name(self) -> &'static str {
        match self {
            RoundingMode::RNE => "RNE",
            RoundingMode::RNA => "RNA",
            RoundingMode::RTP => "RTP",
            RoundingMode::RTN => "RTN",
            RoundingMode::RTZ => "RTZ",
        }
    }
}

impl fmt::Display for RoundingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.smt_name())
    }
}

impl FromStr for RoundingMode {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "RNE" | "roundNearestTiesToEven" => RoundingMode::RNE,
            "RNA" | "roundNearestTiesToAway" => RoundingMode::RNA,
            "RTP" | "roundTowardPositive" => RoundingMode::RTP,
            "RTN" | "roundTowardNegative" => RoundingMode::RTN,
            "RTZ" | "roundTowardZero" => RoundingMode::RTZ,
            _ => return Err(()),
        })
    }
}

/// A floating-point datum. Finite values are nonzero and canonical:
/// `m >= 2^(sb-1)` unless `e` is the minimum exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FpValue {
    Finite { negative: bool, m: u128, e: i64 },
    PosZero,
    NegZero,
    PosInf,
    NegInf,
    NaN,
}

impl FpValue {
    pub fn is_nan(self) -> bool {
        self == FpValue::NaN
    }

    pub fn is_zero(self) -> bool {
        matches!(self, FpValue::PosZero | FpValue::NegZero)
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, FpValue::PosInf | FpValue::NegInf)
    }

    /// Sign bit; false for NaN.
    pub fn is_negative(self) -> bool {
        match self {
            FpValue::Finite { negative, .. } => negative,
            FpValue::NegZero | FpValue::NegInf => true,
            _ => false,
        }
    }

    pub fn zero(negative: bool) -> Self {
        if negative {
            FpValue::NegZero
        } else {
            FpValue::PosZero
        }
    }

    pub fn inf(negative: bool) -> Self {
        if negative {
            FpValue::NegInf
        } else {
            FpValue::PosInf
        }
    }

    pub fn neg(self) -> Self {
        match self {
            FpValue::Finite { negative, m, e } => FpValue::Finite {
                negative: !negative,
                m,
                e,
            },
            FpValue::PosZero => FpValue::NegZero,
            FpValue::NegZero => FpValue::PosZero,
            FpValue::PosInf => FpValue::NegInf,
            FpValue::NegInf => FpValue::PosInf,
            FpValue::NaN => FpValue::NaN,
        }
    }

    pub fn abs(self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self
        }
    }

    /// The real value of a zero or finite datum.
    pub fn to_rational(self, fmt: FpFormat) -> Option<BigRational> {
        match self {
            FpValue::PosZero | FpValue::NegZero => Some(BigRational::zero()),
            FpValue::Finite { negative, m, e } => {
                let v =
                    BigRational::from_integer(BigInt::from(m)) * pow2(e - i64::from(fmt.sb()) + 1);
                Some(if negative { -v } else { v })
            }
            _ => None,
        }
    }

    /// The valuation into the extended reals; both zeros map to 0.
    pub fn value(self, fmt: FpFormat) -> XVal<BigRational> {
        match self {
            FpValue::NaN => XVal::NaN,
            FpValue::PosInf => XVal::Real(XRat::PosInf),
            FpValue::NegInf => XVal::Real(XRat::NegInf),
            _ => XVal::Real(XRat::Finite(self.to_rational(fmt).expect("finite"))),
        }
    }

    /// SMT-LIB `=` on floating point: NaN equals NaN, zeros differ by sign.
    pub fn seq_eq(self, other: Self) -> bool {
        self == other
    }

    /// SMT-LIB `fp.eq`.
    pub fn fp_eq(self, other: Self, fmt: FpFormat) -> bool {
        self.fp_cmp(other, fmt) == Some(std::cmp::Ordering::Equal)
    }

    /// Numeric order; `None` when either side is NaN.
    pub fn fp_cmp(self, other: Self, fmt: FpFormat) -> Option<std::cmp::Ordering> {
        match (self.value(fmt), other.value(fmt)) {
            (XVal::Real(a), XVal::Real(b)) => Some(a.cmp(&b)),
            _ => None,
        }
    }

    /// Decodes the three fields of an IEEE interchange encoding.
    pub fn from_fields(
        fmt: FpFormat,
        sign: bool,
        biased_exp: u64,
        trailing: u128,
    ) -> Result<Self, Error> {
        let (eb, sb) = (fmt.eb(), fmt.sb());
        if sb > 127 || (eb < 64 && biased_exp >> eb != 0) || trailing >> (sb - 1) != 0 {
            return Err(Error::InvalidFormat {
                eb,
                sb,
                reason: "bit fields out of range",
            });
        }
        let all_ones = (1u64 << eb) - 1;
        Ok(if biased_exp == all_ones {
            if trailing == 0 {
                FpValue::inf(sign)
            } else {
                FpValue::NaN
            }
        } else if biased_exp == 0 {
            if trailing == 0 {
                FpValue::zero(sign)
            } else {
                FpValue::Finite {
                    negative: sign,
                    m: trailing,
                    e: fmt.e_min(),
                }
            }
        } else {
            let m = (1u128 << (sb - 1)) | trailing;
            FpValue::Finite {
                negative: sign,
                m,
                e: biased_exp as i64 - fmt.e_max(),
            }
        })
    }

    /// Encodes into `(sign, biased exponent, trailing significand)`; NaN uses
    /// the quiet pattern with only the top trailing bit set.
    pub fn to_fields(self, fmt: FpFormat) -> (bool, u64, u128) {
        let all_ones = (1u64 << fmt.eb()) - 1;
        let hidden = 1u128 << (fmt.sb() - 1);
        match self {
            FpValue::PosZero => (false, 0, 0),
            FpValue::NegZero => (true, 0, 0),
            FpValue::PosInf => (false, all_ones, 0),
            FpValue::NegInf => (true, all_ones, 0),
            FpValue::NaN => (false, all_ones, hidden >> 1),
            FpValue::Finite { negative, m, e } => {
                if m < hidden {
                    (negative, 0, m)
                } else {
                    (negative, (e + fmt.e_max()) as u64, m - hidden)
                }
            }
        }
    }

    /// Short human-readable rendering used in reports.
    pub fn display(self, fmt: FpFormat) -> String {
        match self {
            FpValue::PosZero => "+0".into(),
            FpValue::NegZero => "-0".into(),
            FpValue::PosInf => "+oo".into(),
            FpValue::NegInf => "-oo".into(),
            FpValue::NaN => "NaN".into(),
            _ => crate::scalar::format_rational(&self.to_rational(fmt).expect("finite")),
        }
    }
}

/// Every value of `fmt` once, in ascending order, followed by NaN.
pub fn enumerate_fp(fmt: FpFormat) -> Result<Vec<FpValue>, Error> {
    let count = fmt
        .value_count()
        .filter(|&n| n <= ENUMERATION_LIMIT)
        .ok_or(Error::Exhaustion {
            what: "format enumeration",
            limit: ENUMERATION_LIMIT as f64,
        })?;
    let hidden = 1u128 << (fmt.sb() - 1);
    let mut positive = Vec::with_capacity(count as usize / 2);
    for m in 1..hidden {
        positive.push(FpValue::Finite {
            negative: false,
            m,
            e: fmt.e_min(),
        });
    }
    for e in fmt.e_min()..=fmt.e_max() {
        for m in hidden..(hidden << 1) {
            positive.push(FpValue::Finite {
                negative: false,
                m,
                e,
            });
        }
    }
    let mut out = Vec::with_capacity(count as usize);
    out.push(FpValue::NegInf);
    out.extend(positive.iter().rev().map(|v| v.neg()));
    out.push(FpValue::NegZero);
    out.push(FpValue::PosZero);
    out.extend(positive);
    out.push(FpValue::PosInf);
    out.push(FpValue::NaN);
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

pub(crate) fn one_half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::big;

    fn f(eb: u32, sb: u32) -> FpFormat {
        FpFormat::new(eb, sb).unwrap()
    }

    #[test]
    fn tiny_format_magnitudes() {
        let fmt = f(2, 2);
        let values = enumerate_fp(fmt).unwrap();
        let mut mags: Vec<BigRational> = values
            .iter()
            .filter(|v| {
                matches!(
                    v,
                    FpValue::Finite {
                        negative: false,
                        ..
                    }
                )
            })
            .map(|v| v.to_rational(fmt).unwrap())
            .collect();
        mags.sort();
        let expected: Vec<BigRational> = ["1/2", "1", "3/2", "2", "3"]
            .iter()
            .map(|s| crate::scalar::parse_rational(s).unwrap())
            .collect();
        assert_eq!(mags, expected);
        assert_eq!(values.len(), 15);
        assert!(values.contains(&FpValue::NaN) && values.contains(&FpValue::NegZero));
    }

    #[test]
    fn small_format_extremes() {
        let fmt = f(4, 4);
        let values = enumerate_fp(fmt).unwrap();
        assert_eq!(values.len() % 2, 1);
        let reals: Vec<BigRational> = values.iter().filter_map(|v| v.to_rational(fmt)).collect();
        assert_eq!(reals.iter().max(), Some(&big(240)));
        let min_pos = reals
            .iter()
            .filter(|r| **r > BigRational::zero())
            .min()
            .unwrap();
        assert_eq!(*min_pos, fmt.em());
        assert!(values
            .windows(2)
            .take(values.len() - 3)
            .all(|w| w[0].fp_cmp(w[1], fmt).unwrap().is_le()));
    }

    #[test]
    fn enumeration_guard() {
        assert!(enumerate_fp(FpFormat::FLOAT32).is_err());
        assert!(enumerate_fp(f(5, 11)).is_ok());
    }

    #[test]
    fn field_roundtrip() {
        let fmt = f(4, 4);
        for v in enumerate_fp(fmt).unwrap() {
            let (s, e, t) = v.to_fields(fmt);
            assert_eq!(FpValue::from_fields(fmt, s, e, t).unwrap(), v);
        }
        let one = FpValue::from_fields(fmt, false, 7, 0).unwrap();
        assert_eq!(one.to_rational(fmt), Some(big(1)));
    }

    #[test]
    fn binary64_fields_match_hardware() {
        let fmt = FpFormat::FLOAT64;
        for x in [1.0f64, -0.1, 5e-324, f64::MAX, 2.5e-310] {
            let bits = x.to_bits();
            let v = FpValue::from_fields(
                fmt,
                bits >> 63 == 1,
                (bits >> 52) & 0x7ff,
                u128::from(bits & ((1 << 52) - 1)),
            )
            .unwrap();
            assert_eq!(v.to_rational(fmt), BigRational::from_float(x));
        }
    }
}
