//! Decides floating-point SMT formulas by enclosing them in rational
//! interval arithmetic and handing the result to a real-arithmetic solver.
//!
//! A formula is translated twice. The weak encoding treats variables as
//! points and can only prove unsatisfiability; the strong encoding lets
//! variables range over intervals holding a floating-point value and can
//! only prove satisfiability. [`driver::solve`] runs both.
//!
//! The interval layer is generic over its exact scalar. [`Interval`] uses
//! arbitrary precision rationals; [`SmallInterval`] uses `i128` ratios,
//! which suffice for small formats and run faster.

pub mod bench;
pub mod driver;
pub mod encode;
pub mod format;
pub mod ia;
pub mod oracle;
pub mod scalar;
pub mod smt;

use num_rational::{BigRational, Ratio};

pub use format::{make_format, FpFormat, Precision};
pub use scalar::Scalar;

pub type Interval = ia::RInterval<BigRational>;
pub type SmallInterval = ia::RInterval<Ratio<i128>>;
pub type Bound = ia::XRat<BigRational>;
pub type Value = ia::XVal<BigRational>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: unsupported construct `{construct}`")]
    Unsupported {
        line: usize,
        col: usize,
        construct: String,
    },
    #[error("{line}:{col}: sort error: {message}")]
    Sort {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("invalid format ({eb}, {sb}): {reason}")]
    InvalidFormat {
        eb: u32,
        sb: u32,
        reason: &'static str,
    },
    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: String, hi: String },
    #[error("{what} exceeds the limit of {limit:e} cases")]
    Exhaustion { what: &'static str, limit: f64 },
    #[error("no value assigned to `{0}`")]
    MissingAssignment(String),
    #[error("cannot encode: {0}")]
    Encode(String),
    #[error("nonlinear term in a linear encoding: {0}")]
    Nonlinear(String),
    #[error("cannot start backend `{command}`: {source}")]
    BackendSpawn {
        command: String,
        source: std::io::Error,
    },
    #[error("backend exited with {status}: {stderr}")]
    BackendCrash { status: String, stderr: String },
    #[error("unexpected backend output: {0}")]
    BackendOutput(String),
    #[error("backend timed out after {0:.1}s")]
    Timeout(f64),
    #[error("soundness violation: {0}")]
    SoundnessViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_backend(&self) -> bool {
        matches!(
            self,
            Error::BackendSpawn { .. }
                | Error::BackendCrash { .. }
                | Error::BackendOutput(_)
                | Error::Timeout(_)
        )
    }
}
