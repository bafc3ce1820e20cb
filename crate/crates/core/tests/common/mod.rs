#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use fp2ria::driver::BackendConfig;
use fp2ria::ia::{iv_op, round_down, round_up, FpaOp, Rel, XRat};
use fp2ria::oracle::{enumerate_fp, FpValue, RoundingMode};
use fp2ria::smt::{FpaFormula, FpaTerm, RmSlot};
use fp2ria::{FpFormat, Interval, Precision};

pub const OPS: [FpaOp; 6] = [
    FpaOp::Neg,
    FpaOp::Abs,
    FpaOp::Add,
    FpaOp::Sub,
    FpaOp::Mul,
    FpaOp::Div,
];

/// The backend named by `RIA_BACKEND`, else z3.
pub fn backend() -> BackendConfig {
    BackendConfig::from_env()
}

pub fn f44() -> FpFormat {
    FpFormat::new(4, 4).unwrap()
}

pub fn rational(rng: &mut ChaCha8Rng, magnitude: i64, max_den: i64) -> BigRational {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(-magnitude * den..=magnitude * den);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Values of `fmt` for leaves: every special value is likely, and finite
/// values come from the whole enumeration for small formats.
pub fn leaf_value(rng: &mut ChaCha8Rng, fmt: FpFormat) -> FpValue {
    let specials = [
        FpValue::NaN,
        FpValue::PosInf,
        FpValue::NegInf,
        FpValue::PosZero,
        FpValue::NegZero,
    ];
    if rng.gen_bool(0.2) {
        return *specials.choose(rng).unwrap();
    }
    match enumerate_fp(fmt) {
        Ok(all) => *all.choose(rng).unwrap(),
        Err(_) => {
            let scale: i32 = rng.gen_range(-60..=60);
            let q = rational(rng, 1000, 1000) * BigRational::from_integer(2.into()).pow(scale);
            fp2ria::oracle::fp_round(&q, RoundingMode::RNE, fmt)
        }
    }
}

pub fn leaf(rng: &mut ChaCha8Rng, fmt: FpFormat, vars: &[&str]) -> FpaTerm {
    if !vars.is_empty() && rng.gen_bool(0.6) {
        return FpaTerm::var(*vars.choose(rng).unwrap(), fmt);
    }
    if rng.gen_bool(0.15) {
        return FpaTerm::Const {
            value: rational(rng, 20, 10),
            mode: RoundingMode::RNE,
            format: fmt,
        };
    }
    FpaTerm::lit(leaf_value(rng, fmt), fmt)
}

/// A term with exactly `ops` operations and unspecified rounding modes.
pub fn term(rng: &mut ChaCha8Rng, fmt: FpFormat, vars: &[&str], ops: usize) -> FpaTerm {
    if ops == 0 {
        return leaf(rng, fmt, vars);
    }
    let op = *OPS.choose(rng).unwrap();
    if op.is_unary() {
        return FpaTerm::unary(op, term(rng, fmt, vars, ops - 1));
    }
    let left = rng.gen_range(0..ops);
    FpaTerm::binary(
        op,
        RmSlot::Unspecified,
        term(rng, fmt, vars, left),
        term(rng, fmt, vars, ops - 1 - left),
    )
}

/// Up to three atoms over up to three variables with at most four
/// operations in total, combined with random connectives.
pub fn formula(rng: &mut ChaCha8Rng, fmt: FpFormat) -> FpaFormula {
    let names = ["x", "y", "z"];
    let vars = &names[..rng.gen_range(1..=3)];
    let atoms = rng.gen_range(1..=3);
    let mut budget = rng.gen_range(0..=4usize);
    let mut parts: Vec<FpaFormula> = (0..atoms)
        .map(|i| {
            let mine = if i + 1 == atoms {
                budget
            } else {
                rng.gen_range(0..=budget)
            };
            budget -= mine;
            let l = rng.gen_range(0..=mine);
            let rel = *Rel::ALL.choose(rng).unwrap();
            let a = FpaFormula::atom(rel, term(rng, fmt, vars, l), term(rng, fmt, vars, mine - l));
            if rng.gen_bool(0.35) {
                FpaFormula::not(a)
            } else {
                a
            }
        })
        .collect();
    while parts.len() > 1 {
        let b = parts.pop().unwrap();
        let a = parts.pop().unwrap();
        let joined = if rng.gen_bool(0.6) {
            FpaFormula::And(vec![a, b])
        } else {
            FpaFormula::Or(vec![a, b])
        };
        parts.push(if rng.gen_bool(0.15) {
            FpaFormula::not(joined)
        } else {
            joined
        });
    }
    parts.pop().unwrap()
}

/// Enclosure of a ground term computed by the interval library.
pub fn eval_ground(t: &FpaTerm, prec: &Precision<BigRational>) -> Interval {
    match t {
        FpaTerm::Literal(v, f) => Interval::of_value(&v.value(*f)),
        FpaTerm::Const { value, .. } => {
            let x = XRat::Finite(value.clone());
            Interval::new(round_down(&x, prec), round_up(&x, prec), false).unwrap()
        }
        FpaTerm::Unary(op, a) => {
            let a = eval_ground(a, prec);
            iv_op(*op, &a, &a, prec)
        }
        FpaTerm::Binary(op, _, a, b) => {
            iv_op(*op, &eval_ground(a, prec), &eval_ground(b, prec), prec)
        }
        FpaTerm::Var(..) => panic!("not ground"),
    }
}
