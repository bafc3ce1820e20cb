//! Benchmark generation: bounded unrollings of small linear systems and a
//! translation of real-arithmetic scripts into floating-point arithmetic.

mod bmc;
mod ra;

pub use bmc::{gen_bmc, BmcInstance, BmcSystem, C1, C2, C3, C4, C5, INTEGRATOR_GAIN};
pub use ra::{ra_to_fpa, RaToFpaOptions};

use num_rational::BigRational;

use crate::format::FpFormat;
use crate::oracle::{fp_round, RoundingMode};
use crate::smt::FpaTerm;

/// `c` as an exact literal of `fmt` when representable, otherwise as the
/// constant rounded to nearest.
pub fn constant(c: &BigRational, fmt: FpFormat) -> FpaTerm {
    let v = fp_round(c, RoundingMode::RNE, fmt);
    if v.to_rational(fmt).as_ref() == Some(c) {
        FpaTerm::lit(v, fmt)
    } else {
        FpaTerm::Const {
            value: c.clone(),
            mode: RoundingMode::RNE,
            format: fmt,
        }
    }
}
