//! Rational interval arithmetic over the extended reals with a NaN flag.
//!
//! An [`RInterval`] denotes the set `{v : lo <= v <= hi}` of extended reals,
//! plus NaN when `nan` is set. Bounds are exact; nothing here uses machine
//! floats.

mod cmp;
mod ops;
mod round;

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;

use crate::scalar::{format_rational, Scalar};
use crate::Error;

pub use cmp::{eval_cmp, CmpSpec, Mode, Polarity, Rel};
pub use ops::{iv_abs, iv_add, iv_div, iv_mul, iv_neg, iv_op, iv_sub, iv_sub_exact, FpaOp};
pub use round::{contains_fp, round_down, round_up};

/// A rational or one of the two infinities.
///
/// The derived order puts `NegInf` below every rational and `PosInf` above.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XRat<S> {
    NegInf,
    Finite(S),
    PosInf,
}

impl<S: Scalar> XRat<S> {
    pub fn zero() -> Self {
        XRat::Finite(S::zero())
    }

    pub fn from_i64(n: i64) -> Self {
        XRat::Finite(S::from_i64(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, XRat::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn finite(&self) -> Option<&S> {
        match self {
            XRat::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, XRat::Finite(v) if v.is_zero())
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        match self {
            XRat::NegInf => -1,
            XRat::PosInf => 1,
            XRat::Finite(v) if v.is_positive() => 1,
            XRat::Finite(v) if v.is_negative() => -1,
            XRat::Finite(_) => 0,
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            XRat::NegInf => XRat::PosInf,
            XRat::PosInf => XRat::NegInf,
            XRat::Finite(v) => XRat::Finite(-v.clone()),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            XRat::Finite(v) => XRat::Finite(v.abs()),
            _ => XRat::PosInf,
        }
    }

    pub(crate) fn inf(sign: i8) -> Self {
        if sign < 0 {
            XRat::NegInf
        } else {
            XRat::PosInf
        }
    }

    /// Extended sum; `None` for `-oo + +oo`.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        match (self, other) {
            (XRat::Finite(a), XRat::Finite(b)) => Some(XRat::Finite(a.clone() + b.clone())),
            (XRat::NegInf, XRat::PosInf) | (XRat::PosInf, XRat::NegInf) => None,
            (XRat::Finite(_), inf) | (inf, _) => Some(inf.clone()),
        }
    }

    /// Extended product with `0 * oo = 0`, the convention for bounds of an
    /// unbounded set of reals.
    pub fn bound_mul(&self, other: &Self) -> Self {
        match (self, other) {
            (XRat::Finite(a), XRat::Finite(b)) => XRat::Finite(a.clone() * b.clone()),
            _ => {
                let sign = self.signum() * other.signum();
                if sign == 0 {
                    XRat::zero()
                } else {
                    XRat::inf(sign)
                }
            }
        }
    }

    /// `1/x` on a bound of a zero-free set, with `1/oo = 0`.
    pub(crate) fn bound_recip(&self) -> Self {
        match self {
            XRat::Finite(v) => XRat::Finite(S::one() / v.clone()),
            _ => XRat::zero(),
        }
    }

    pub fn to_big(&self) -> XRat<BigRational> {
        match self {
            XRat::NegInf => XRat::NegInf,
            XRat::PosInf => XRat::PosInf,
            XRat::Finite(v) => XRat::Finite(v.to_big()),
        }
    }
}

impl<S: Scalar> fmt::Display for XRat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XRat::NegInf => f.write_str("-oo"),
            XRat::PosInf => f.write_str("+oo"),
            XRat::Finite(v) => f.write_str(&format_rational(&v.to_big())),
        }
    }
}

/// An extended real or NaN. NaN compares unordered with everything,
/// including itself.
#[derive(Clone, Debug)]
pub enum XVal<S> {
    Real(XRat<S>),
    NaN,
}

impl<S: Scalar> PartialEq for XVal<S> {
    fn eq(&self, other: &Self) -> bool {
        matches!((self, other), (XVal::Real(a), XVal::Real(b)) if a == b)
    }
}

impl<S: Scalar> PartialOrd for XVal<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (XVal::Real(a), XVal::Real(b)) => Some(a.cmp(b)),
            _ => None,
        }
    }
}

impl<S: Scalar> fmt::Display for XVal<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XVal::Real(v) => v.fmt(f),
            XVal::NaN => f.write_str("NaN"),
        }
    }
}

/// A closed interval of extended reals, optionally joined with NaN.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RInterval<S> {
    lo: XRat<S>,
    hi: XRat<S>,
    nan: bool,
}

impl<S: Scalar> RInterval<S> {
    pub fn new(lo: XRat<S>, hi: XRat<S>, nan: bool) -> Result<Self, Error> {
        if lo > hi {
            return Err(Error::EmptyInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(RInterval { lo, hi, nan })
    }

    pub(crate) fn new_unchecked(lo: XRat<S>, hi: XRat<S>, nan: bool) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        RInterval { lo, hi, nan }
    }

    pub fn point(v: S) -> Self {
        let x = XRat::Finite(v);
        RInterval {
            lo: x.clone(),
            hi: x,
            nan: false,
        }
    }

    pub fn from_bounds(lo: S, hi: S) -> Result<Self, Error> {
        Self::new(XRat::Finite(lo), XRat::Finite(hi), false)
    }

    pub fn zero() -> Self {
        Self::point(S::zero())
    }

    pub fn pos_inf() -> Self {
        RInterval {
            lo: XRat::PosInf,
            hi: XRat::PosInf,
            nan: false,
        }
    }

    pub fn neg_inf() -> Self {
        RInterval {
            lo: XRat::NegInf,
            hi: XRat::NegInf,
            nan: false,
        }
    }

    pub fn entire() -> Self {
        RInterval {
            lo: XRat::NegInf,
            hi: XRat::PosInf,
            nan: false,
        }
    }

    /// Stand-in for the value set `{NaN}`, which is not an interval.
    pub fn nan_surrogate() -> Self {
        RInterval {
            lo: XRat::NegInf,
            hi: XRat::PosInf,
            nan: true,
        }
    }

    /// Tightest interval holding exactly `v`; NaN maps to the surrogate.
    pub fn of_value(v: &XVal<S>) -> Self {
        match v {
            XVal::NaN => Self::nan_surrogate(),
            XVal::Real(x) => RInterval {
                lo: x.clone(),
                hi: x.clone(),
                nan: false,
            },
        }
    }

    pub fn lo(&self) -> &XRat<S> {
        &self.lo
    }

    pub fn hi(&self) -> &XRat<S> {
        &self.hi
    }

    pub fn has_nan(&self) -> bool {
        self.nan
    }

    pub fn with_nan(mut self, nan: bool) -> Self {
        self.nan = nan;
        self
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// True when the real part is exactly `[0, 0]`.
    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn reaches_inf(&self) -> bool {
        self.lo == XRat::NegInf || self.hi == XRat::PosInf
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= XRat::zero() && XRat::zero() <= self.hi
    }

    pub fn contains(&self, v: &XVal<S>) -> bool {
        match v {
            XVal::NaN => self.nan,
            XVal::Real(x) => &self.lo <= x && x <= &self.hi,
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi && (!self.nan || other.nan)
    }

    pub fn to_big(&self) -> RInterval<BigRational> {
        RInterval {
            lo: self.lo.to_big(),
            hi: self.hi.to_big(),
            nan: self.nan,
        }
    }
}

impl<S: Scalar> fmt::Display for RInterval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)?;
        if self.nan {
            f.write_str(" u {NaN}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::big;

    type X = XRat<BigRational>;

    #[test]
    fn extended_order() {
        assert!(X::NegInf < X::Finite(big(-1000)));
        assert!(X::Finite(big(1000)) < X::PosInf);
        assert!(X::NegInf < X::PosInf);
    }

    #[test]
    fn nan_is_unordered() {
        let nan = XVal::<BigRational>::NaN;
        let one = XVal::Real(X::Finite(big(1)));
        assert!(nan != nan);
        assert!(!(nan < one) && !(nan > one) && !(nan <= one) && !(nan >= one) && nan != one);
        assert!(!(nan <= nan) && !(nan >= nan));
        assert_eq!(one.partial_cmp(&one), Some(Ordering::Equal));
    }

    #[test]
    fn bound_products() {
        assert_eq!(X::PosInf.bound_mul(&X::zero()), X::zero());
        assert_eq!(X::NegInf.bound_mul(&X::Finite(big(-2))), X::PosInf);
        assert_eq!(X::NegInf.checked_add(&X::PosInf), None);
        assert_eq!(X::NegInf.checked_add(&X::Finite(big(3))), Some(X::NegInf));
    }

    #[test]
    fn empty_rejected() {
        assert!(RInterval::new(X::Finite(big(2)), X::Finite(big(1)), false).is_err());
        assert!(RInterval::new(X::PosInf, X::NegInf, true).is_err());
    }

    #[test]
    fn membership() {
        let x = RInterval::new(X::NegInf, X::Finite(big(0)), true).unwrap();
        assert!(x.contains(&XVal::NaN));
        assert!(x.contains(&XVal::Real(X::NegInf)));
        assert!(!x.contains(&XVal::Real(X::PosInf)));
        assert_eq!(x.to_string(), "[-oo, 0] u {NaN}");
    }
}
