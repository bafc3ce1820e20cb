use std::fmt;

use super::round::{round_down, round_up};
use super::{RInterval, XRat};
use crate::format::Precision;
use crate::scalar::Scalar;

/// The arithmetic operators of the supported fragment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FpaOp {
    Neg,
    Abs,
    Add,
    Sub,
    Mul,
    Div,
}

impl FpaOp {
    pub const BINARY: [FpaOp; 4] = [FpaOp::Add, FpaOp::Sub, FpaOp::Mul, FpaOp::Div];

    pub fn is_unary(self) -> bool {
        matches!(self, FpaOp::Neg | FpaOp::Abs)
    }

    pub fn smt_name(self) -> &'static str {
        match self {
            FpaOp::Neg => "fp.neg",
            FpaOp::Abs => "fp.abs",
            FpaOp::Add => "fp.add",
            FpaOp::Sub => "fp.sub",
            FpaOp::Mul => "fp.mul",
            FpaOp::Div => "fp.div",
        }
    }
}

impl fmt::Display for FpaOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FpaOp::Neg => "neg",
            FpaOp::Abs => "abs",
            FpaOp::Add => "add",
            FpaOp::Sub => "sub",
            FpaOp::Mul => "mul",
            FpaOp::Div => "div",
        };
        f.write_str(name)
    }
}

/// One of the at most three parts of an interval's real set.
enum Piece<S> {
    NegInf,
    PosInf,
    /// The reals between the bounds; an infinite bound means unbounded.
    Reals(XRat<S>, XRat<S>),
}

fn pieces<S: Scalar>(x: &RInterval<S>) -> Vec<Piece<S>> {
    let mut out = Vec::with_capacity(3);
    if *x.lo() == XRat::NegInf {
        out.push(Piece::NegInf);
    }
    if *x.lo() != XRat::PosInf && *x.hi() != XRat::NegInf {
        out.push(Piece::Reals(x.lo().clone(), x.hi().clone()));
    }
    if *x.hi() == XRat::PosInf {
        out.push(Piece::PosInf);
    }
    out
}

fn has_zero<S: Scalar>(lo: &XRat<S>, hi: &XRat<S>) -> bool {
    lo.signum() <= 0 && hi.signum() >= 0
}

fn has_nonzero<S: Scalar>(lo: &XRat<S>, hi: &XRat<S>) -> bool {
    !(lo.is_zero() && hi.is_zero())
}

/// Running hull of result values before rounding.
struct Hull<S> {
    bounds: Option<(XRat<S>, XRat<S>)>,
    nan: bool,
}

impl<S: Scalar> Hull<S> {
    fn new(nan: bool) -> Self {
        Hull { bounds: None, nan }
    }

    fn range(&mut self, lo: XRat<S>, hi: XRat<S>) {
        self.bounds = Some(match self.bounds.take() {
            None => (lo, hi),
            Some((a, b)) => (a.min(lo), b.max(hi)),
        });
    }

    fn value(&mut self, v: XRat<S>) {
        self.range(v.clone(), v);
    }

    fn corners(&mut self, values: [XRat<S>; 4]) {
        let lo = values.iter().min().cloned();
        let hi = values.iter().max().cloned();
        if let (Some(lo), Some(hi)) = (lo, hi) {
            self.range(lo, hi);
        }
    }

    fn finish(self, prec: &Precision<S>) -> RInterval<S> {
        match self.bounds {
            None => RInterval::nan_surrogate(),
            Some((lo, hi)) => {
                RInterval::new_unchecked(round_down(&lo, prec), round_up(&hi, prec), self.nan)
            }
        }
    }
}

pub fn iv_neg<S: Scalar>(x: &RInterval<S>) -> RInterval<S> {
    RInterval::new_unchecked(x.hi().neg(), x.lo().neg(), x.has_nan())
}

pub fn iv_abs<S: Scalar>(x: &RInterval<S>) -> RInterval<S> {
    let zero = XRat::zero();
    if *x.lo() >= zero {
        x.clone()
    } else if *x.hi() <= zero {
        iv_neg(x)
    } else {
        let top = x.lo().neg().max(x.hi().clone());
        RInterval::new_unchecked(zero, top, x.has_nan())
    }
}

pub fn iv_add<S: Scalar>(x: &RInterval<S>, y: &RInterval<S>, prec: &Precision<S>) -> RInterval<S> {
    let mut hull = Hull::new(x.has_nan() || y.has_nan());
    for px in pieces(x) {
        for py in pieces(y) {
            match (&px, &py) {
                (Piece::NegInf, Piece::PosInf) | (Piece::PosInf, Piece::NegInf) => hull.nan = true,
                (Piece::NegInf, _) | (_, Piece::NegInf) => hull.value(XRat::NegInf),
                (Piece::PosInf, _) | (_, Piece::PosInf) => hull.value(XRat::PosInf),
                (Piece::Reals(a, b), Piece::Reals(c, d)) => {
                    let lo = a.checked_add(c).expect("lower bounds are never +oo");
                    let hi = b.checked_add(d).expect("upper bounds are never -oo");
                    hull.range(lo, hi);
                }
            }
        }
    }
    hull.finish(prec)
}

pub fn iv_sub<S: Scalar>(x: &RInterval<S>, y: &RInterval<S>, prec: &Precision<S>) -> RInterval<S> {
    iv_add(x, &iv_neg(y), prec)
}

/// Signs present among the values of a piece.
fn piece_signs<S: Scalar>(lo: &XRat<S>, hi: &XRat<S>) -> (bool, bool, bool) {
    (lo.signum() < 0, has_zero(lo, hi), hi.signum() > 0)
}

pub fn iv_mul<S: Scalar>(x: &RInterval<S>, y: &RInterval<S>, prec: &Precision<S>) -> RInterval<S> {
    if x.is_zero() || y.is_zero() {
        let nan = x.has_nan()
            || y.has_nan()
            || (x.is_zero() && y.reaches_inf())
            || (y.is_zero() && x.reaches_inf());
        return RInterval::zero().with_nan(nan);
    }
    let mut hull = Hull::new(x.has_nan() || y.has_nan());
    for px in pieces(x) {
        for py in pieces(y) {
            match (&px, &py) {
                (Piece::Reals(a, b), Piece::Reals(c, d)) => hull.corners([
                    a.bound_mul(c),
                    a.bound_mul(d),
                    b.bound_mul(c),
                    b.bound_mul(d),
                ]),
                (Piece::Reals(a, b), inf) | (inf, Piece::Reals(a, b)) => {
                    let s = if matches!(inf, Piece::NegInf) { -1 } else { 1 };
                    let (neg, zero, pos) = piece_signs(a, b);
                    if zero {
                        hull.nan = true;
                    }
                    if neg {
                        hull.value(XRat::inf(-s));
                    }
                    if pos {
                        hull.value(XRat::inf(s));
                    }
                }
                (p, q) => {
                    let same = matches!(p, Piece::NegInf) == matches!(q, Piece::NegInf);
                    hull.value(if same { XRat::PosInf } else { XRat::NegInf });
                }
            }
        }
    }
    hull.finish(prec)
}

pub fn iv_div<S: Scalar>(x: &RInterval<S>, y: &RInterval<S>, prec: &Precision<S>) -> RInterval<S> {
    let mut hull = Hull::new(x.has_nan() || y.has_nan());
    for px in pieces(x) {
        for py in pieces(y) {
            match (&px, &py) {
                (Piece::Reals(a, b), Piece::Reals(c, d)) => {
                    if has_zero(c, d) {
                        if has_zero(a, b) {
                            hull.nan = true;
                        }
                        if has_nonzero(a, b) {
                            hull.value(XRat::NegInf);
                            hull.value(XRat::PosInf);
                        } else if has_nonzero(c, d) {
                            hull.value(XRat::zero());
                        }
                    } else {
                        let (rc, rd) = (d.bound_recip(), c.bound_recip());
                        hull.corners([
                            a.bound_mul(&rc),
                            a.bound_mul(&rd),
                            b.bound_mul(&rc),
                            b.bound_mul(&rd),
                        ]);
                    }
                }
                (Piece::Reals(..), _) => hull.value(XRat::zero()),
                (inf, Piece::Reals(c, d)) => {
                    let s = if matches!(inf, Piece::NegInf) { -1 } else { 1 };
                    let (neg, zero, pos) = piece_signs(c, d);
                    if neg || zero {
                        hull.value(XRat::inf(-s));
                    }
                    if pos || zero {
                        hull.value(XRat::inf(s));
                    }
                }
                _ => hull.nan = true,
            }
        }
    }
    hull.finish(prec)
}

/// Dispatches a binary operator; unary operators ignore `y`.
pub fn iv_op<S: Scalar>(
    op: FpaOp,
    x: &RInterval<S>,
    y: &RInterval<S>,
    prec: &Precision<S>,
) -> RInterval<S> {
    match op {
        FpaOp::Neg => iv_neg(x),
        FpaOp::Abs => iv_abs(x),
        FpaOp::Add => iv_add(x, y, prec),
        FpaOp::Sub => iv_sub(x, y, prec),
        FpaOp::Mul => iv_mul(x, y, prec),
        FpaOp::Div => iv_div(x, y, prec),
    }
}

fn sub_bound<S: Scalar>(a: &XRat<S>, b: &XRat<S>) -> XRat<S> {
    match (a, b) {
        (XRat::PosInf, XRat::PosInf) | (XRat::NegInf, XRat::NegInf) => XRat::zero(),
        _ => a
            .checked_add(&b.neg())
            .expect("opposite infinities handled above"),
    }
}

/// Difference without widening, used by the comparison predicates.
///
/// Only the signs of the bounds matter there, so `oo - oo` of equal signs is
/// taken as 0: it marks two coinciding infinities.
pub fn iv_sub_exact<S: Scalar>(f: &RInterval<S>, g: &RInterval<S>) -> RInterval<S> {
    let lo = sub_bound(f.lo(), g.hi());
    let hi = sub_bound(f.hi(), g.lo());
    RInterval::new_unchecked(lo, hi, f.has_nan() || g.has_nan())
}
