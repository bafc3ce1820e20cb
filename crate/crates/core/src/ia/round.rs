use super::{RInterval, XRat};
use crate::format::Precision;
use crate::scalar::Scalar;

/// Downward rounding bound: `x - |x|/ed - em`.
///
/// Values below `-max` become `-oo`. Values above `max` are clamped to `max`,
/// since every rounding mode saturates there at worst. Infinities are fixed.
pub fn round_down<S: Scalar>(x: &XRat<S>, prec: &Precision<S>) -> XRat<S> {
    let XRat::Finite(v) = x else { return x.clone() };
    let w = v.clone() - v.abs() / prec.ed.clone() - prec.em.clone();
    if w < -prec.max.clone() {
        XRat::NegInf
    } else if w > prec.max {
        XRat::Finite(prec.max.clone())
    } else {
        XRat::Finite(w)
    }
}

/// Upward rounding bound, the mirror image of [`round_down`].
pub fn round_up<S: Scalar>(x: &XRat<S>, prec: &Precision<S>) -> XRat<S> {
    let XRat::Finite(v) = x else { return x.clone() };
    let w = v.clone() + v.abs() / prec.ed.clone() + prec.em.clone();
    if w > prec.max {
        XRat::PosInf
    } else if w < -prec.max.clone() {
        XRat::Finite(-prec.max.clone())
    } else {
        XRat::Finite(w)
    }
}

/// Sufficient test that `x` holds at least one value of the format:
/// NaN, or `lo <= round_down(hi)`.
pub fn contains_fp<S: Scalar>(x: &RInterval<S>, prec: &Precision<S>) -> bool {
    x.has_nan() || x.lo() <= &round_down(x.hi(), prec)
}
