use std::fmt;

use super::ops::iv_sub_exact;
use super::{RInterval, XRat};
use crate::scalar::Scalar;

/// Relations of atoms. `SeqEq` is SMT-LIB `=`, `FpEq` is `fp.eq`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    SeqEq,
    FpEq,
    Ge,
    Gt,
}

impl Rel {
    pub const ALL: [Rel; 4] = [Rel::SeqEq, Rel::FpEq, Rel::Ge, Rel::Gt];
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rel::SeqEq => "=",
            Rel::FpEq => "fp.eq",
            Rel::Ge => "fp.geq",
            Rel::Gt => "fp.gt",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

/// `Weak` can only refute, `Strong` can only confirm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Weak,
    Strong,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Weak => "weak",
            Mode::Strong => "strong",
        })
    }
}

/// A comparison predicate on intervals.
///
/// `zero_guard` makes the predicates on `=` sound with respect to the sign of
/// zero, which intervals cannot see: a strong positive `=` refuses a shared
/// point 0, and a weak negative `=` accepts whenever both sides contain 0.
/// With the guard off the predicates are the plain textbook ones, which are
/// exact when both sides are the same term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CmpSpec {
    pub rel: Rel,
    pub polarity: Polarity,
    pub mode: Mode,
    pub zero_guard: bool,
}

impl CmpSpec {
    pub fn new(rel: Rel, polarity: Polarity, mode: Mode) -> Self {
        CmpSpec {
            rel,
            polarity,
            mode,
            zero_guard: true,
        }
    }

    pub fn unguarded(self) -> Self {
        CmpSpec {
            zero_guard: false,
            ..self
        }
    }
}

fn order_holds<S: Scalar>(strict: bool, bound: &XRat<S>) -> bool {
    let zero = XRat::zero();
    if strict {
        *bound > zero
    } else {
        *bound >= zero
    }
}

/// `f R g` for `R` in {>=, >}, or its negation `f R' g` in {<, <=}.
fn ordered<S: Scalar>(
    strict: bool,
    polarity: Polarity,
    mode: Mode,
    f: &RInterval<S>,
    g: &RInterval<S>,
) -> bool {
    let d = iv_sub_exact(f, g);
    match (polarity, mode) {
        (Polarity::Positive, Mode::Weak) => order_holds(strict, d.hi()),
        (Polarity::Positive, Mode::Strong) => !d.has_nan() && order_holds(strict, d.lo()),
        (Polarity::Negative, Mode::Weak) => d.has_nan() || !order_holds(strict, d.lo()),
        (Polarity::Negative, Mode::Strong) => !order_holds(strict, d.hi()),
    }
}

fn fp_eq<S: Scalar>(polarity: Polarity, mode: Mode, f: &RInterval<S>, g: &RInterval<S>) -> bool {
    match (polarity, mode) {
        (Polarity::Positive, Mode::Weak) => {
            ordered(false, polarity, mode, f, g) && ordered(false, polarity, mode, g, f)
        }
        (Polarity::Positive, Mode::Strong) => {
            !f.has_nan() && !g.has_nan() && f.is_point() && g.is_point() && f.lo() == g.lo()
        }
        (Polarity::Negative, _) => {
            ordered(false, polarity, mode, f, g) || ordered(false, polarity, mode, g, f)
        }
    }
}

fn seq_eq<S: Scalar>(spec: CmpSpec, f: &RInterval<S>, g: &RInterval<S>) -> bool {
    let CmpSpec {
        polarity,
        mode,
        zero_guard,
        ..
    } = spec;
    match (polarity, mode) {
        (Polarity::Positive, Mode::Weak) => {
            (f.has_nan() && g.has_nan()) || fp_eq(polarity, mode, f, g)
        }
        (Polarity::Positive, Mode::Strong) => {
            fp_eq(polarity, mode, f, g) && !(zero_guard && f.lo().is_zero())
        }
        (Polarity::Negative, Mode::Weak) => {
            fp_eq(polarity, mode, f, g) || (zero_guard && f.contains_zero() && g.contains_zero())
        }
        (Polarity::Negative, Mode::Strong) => {
            (!f.has_nan() || !g.has_nan()) && fp_eq(polarity, mode, f, g)
        }
    }
}

/// Evaluates a comparison predicate between two intervals.
pub fn eval_cmp<S: Scalar>(spec: CmpSpec, f: &RInterval<S>, g: &RInterval<S>) -> bool {
    match spec.rel {
        Rel::Ge => ordered(false, spec.polarity, spec.mode, f, g),
        Rel::Gt => ordered(true, spec.polarity, spec.mode, f, g),
        Rel::FpEq => fp_eq(spec.polarity, spec.mode, f, g),
        Rel::SeqEq => seq_eq(spec, f, g),
    }
}
