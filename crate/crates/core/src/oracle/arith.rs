use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{one_half, FpValue, RoundingMode};
use crate::format::FpFormat;
use crate::ia::FpaOp;
use crate::scalar::pow2;

/// `floor(log2 a)` for positive `a`.
fn floor_log2(a: &BigRational) -> i64 {
    let mut e = a.numer().bits() as i64 - a.denom().bits() as i64;
    if pow2(e) > *a {
        e -= 1;
    }
    while pow2(e + 1) <= *a {
        e += 1;
    }
    e
}

fn overflow(negative: bool, mode: RoundingMode, fmt: FpFormat) -> FpValue {
    let to_inf = match mode {
        RoundingMode::RNE | RoundingMode::RNA => true,
        RoundingMode::RTZ => false,
        RoundingMode::RTP => !negative,
        RoundingMode::RTN => negative,
    };
    if to_inf {
        FpValue::inf(negative)
    } else {
        let m = (1u128 << fmt.sb()) - 1;
        FpValue::Finite {
            negative,
            m,
            e: fmt.e_max(),
        }
    }
}

/// Correctly rounds an exact rational into `fmt`. Zero rounds to `+0`;
/// nonzero values that underflow keep their sign.
pub fn fp_round(x: &BigRational, mode: RoundingMode, fmt: FpFormat) -> FpValue {
    if x.is_zero() {
        return FpValue::PosZero;
    }
    let negative = x.is_negative();
    let a = x.abs();
    let sb = i64::from(fmt.sb());
    let mut e = floor_log2(&a).max(fmt.e_min());
    if e > fmt.e_max() {
        return overflow(negative, mode, fmt);
    }
    let scaled = a / pow2(e - sb + 1);
    let (whole, rem) = scaled.numer().div_rem(scaled.denom());
    let frac = BigRational::new(rem, scaled.denom().clone());
    let half = one_half();
    let up = !frac.is_zero()
        && match mode {
            RoundingMode::RNE => frac > half || (frac == half && whole.is_odd()),
            RoundingMode::RNA => frac >= half,
            RoundingMode::RTP => !negative,
            RoundingMode::RTN => negative,
            RoundingMode::RTZ => false,
        };
    let mut m = whole.to_u128().expect("significand fits") + u128::from(up);
    if m == 1u128 << sb {
        m >>= 1;
        e += 1;
        if e > fmt.e_max() {
            return overflow(negative, mode, fmt);
        }
    }
    if m == 0 {
        FpValue::zero(negative)
    } else {
        FpValue::Finite { negative, m, e }
    }
}

fn exact_zero_sum(mode: RoundingMode) -> FpValue {
    FpValue::zero(mode == RoundingMode::RTN)
}

fn add(mode: RoundingMode, a: FpValue, b: FpValue, fmt: FpFormat) -> FpValue {
    use FpValue::*;
    match (a, b) {
        (NaN, _) | (_, NaN) | (PosInf, NegInf) | (NegInf, PosInf) => NaN,
        (PosInf, _) | (_, PosInf) => PosInf,
        (NegInf, _) | (_, NegInf) => NegInf,
        _ if a.is_zero() && b.is_zero() => {
            if a == b {
                a
            } else {
                exact_zero_sum(mode)
            }
        }
        _ if a.is_zero() => b,
        _ if b.is_zero() => a,
        _ => {
            let sum = a.to_rational(fmt).expect("finite") + b.to_rational(fmt).expect("finite");
            if sum.is_zero() {
                exact_zero_sum(mode)
            } else {
                fp_round(&sum, mode, fmt)
            }
        }
    }
}

fn mul(mode: RoundingMode, a: FpValue, b: FpValue, fmt: FpFormat) -> FpValue {
    let negative = a.is_negative() != b.is_negative();
    if a.is_nan() || b.is_nan() {
        FpValue::NaN
    } else if a.is_infinite() || b.is_infinite() {
        if a.is_zero() || b.is_zero() {
            FpValue::NaN
        } else {
            FpValue::inf(negative)
        }
    } else if a.is_zero() || b.is_zero() {
        FpValue::zero(negative)
    } else {
        let p = a.to_rational(fmt).expect("finite") * b.to_rational(fmt).expect("finite");
        fp_round(&p, mode, fmt)
    }
}

fn div(mode: RoundingMode, a: FpValue, b: FpValue, fmt: FpFormat) -> FpValue {
    let negative = a.is_negative() != b.is_negative();
    if a.is_nan()
        || b.is_nan()
        || (a.is_infinite() && b.is_infinite())
        || (a.is_zero() && b.is_zero())
    {
        FpValue::NaN
    } else if a.is_infinite() || b.is_zero() {
        FpValue::inf(negative)
    } else if b.is_infinite() || a.is_zero() {
        FpValue::zero(negative)
    } else {
        let q = a.to_rational(fmt).expect("finite") / b.to_rational(fmt).expect("finite");
        fp_round(&q, mode, fmt)
    }
}

/// Applies an operator with IEEE-754 semantics. Unary operators ignore `b`
/// and `mode`.
pub fn fp_eval_op(op: FpaOp, mode: RoundingMode, a: FpValue, b: FpValue, fmt: FpFormat) -> FpValue {
    match op {
        FpaOp::Neg => a.neg(),
        FpaOp::Abs => a.abs(),
        FpaOp::Add => add(mode, a, b, fmt),
        FpaOp::Sub => add(mode, a, b.neg(), fmt),
        FpaOp::Mul => mul(mode, a, b, fmt),
        FpaOp::Div => div(mode, a, b, fmt),
    }
}
