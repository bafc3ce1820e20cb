use std::fmt::{self, Write};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;

use super::constant;
use crate::format::FpFormat;
use crate::ia::FpaOp;
use crate::oracle::FpValue;
use crate::scalar::{format_rational, parse_rational};
use crate::smt::{print_sort, print_term, quote, FpaTerm, RmSlot};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BmcSystem {
    /// `y(i) = x(i) + 0.9 y(i-1)`.
    Integrator,
    /// `y1(i) = c1 x(i) - c2 y1(i-1) - c3 y2(i-1)`, `y2(i) = y1(i-1)`.
    Filter,
    /// `y(i)` is `y(i-1)` rotated by the matrix `[[c4, -c5], [c5, c4]]`.
    Rotation,
}

pub const C1: &str = "0.058167";
pub const C2: &str = "1.4891";
pub const C3: &str = "0.88367";
pub const C4: &str = "0.86602540303";
pub const C5: &str = "0.5";
pub const INTEGRATOR_GAIN: &str = "0.9";

impl BmcSystem {
    pub const ALL: [BmcSystem; 3] = [
        BmcSystem::Integrator,
        BmcSystem::Filter,
        BmcSystem::Rotation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BmcSystem::Integrator => "integrator",
            BmcSystem::Filter => "filter",
            BmcSystem::Rotation => "rotation",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            BmcSystem::Integrator => 1,
            BmcSystem::Filter | BmcSystem::Rotation => 2,
        }
    }

    pub fn has_input(self) -> bool {
        self != BmcSystem::Rotation
    }

    /// One step of the recurrence over exact rationals.
    pub fn step(self, x: &BigRational, y: &[BigRational]) -> Vec<BigRational> {
        let c = |s: &str| parse_rational(s).expect("constant");
        match self {
            BmcSystem::Integrator => vec![x + c(INTEGRATOR_GAIN) * &y[0]],
            BmcSystem::Filter => vec![c(C1) * x - c(C2) * &y[0] - c(C3) * &y[1], y[0].clone()],
            BmcSystem::Rotation => {
                vec![c(C4) * &y[0] - c(C5) * &y[1], c(C5) * &y[0] + c(C4) * &y[1]]
            }
        }
    }

    /// First output component after `inputs.len()` steps from the zero state.
    pub fn simulate(self, inputs: &[BigRational]) -> BigRational {
        let mut y = vec![BigRational::zero(); self.dimension()];
        for x in inputs {
            y = self.step(x, &y);
        }
        y[0].clone()
    }
}

impl fmt::Display for BmcSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BmcSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        BmcSystem::ALL
            .into_iter()
            .find(|sys| sys.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown system `{s}` (expected integrator, filter or rotation)")
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BmcInstance {
    pub system: BmcSystem,
    pub k: usize,
    pub th: BigRational,
    pub fmt: FpFormat,
}

impl BmcInstance {
    pub fn new(system: BmcSystem, k: usize, th: BigRational, fmt: FpFormat) -> Result<Self, Error> {
        if k == 0 {
            return Err(Error::Encode("unrolling depth must be at least 1".into()));
        }
        Ok(BmcInstance { system, k, th, fmt })
    }

    /// `<system>_k<k>_th<th>.smt2`, with the threshold in decimal when it
    /// has a finite expansion.
    pub fn file_name(&self) -> String {
        let th = format_rational(&self.th).replace('/', "over");
        format!("{}_k{}_th{}.smt2", self.system, self.k, th)
    }
}

struct Builder {
    fmt: FpFormat,
    modes: Vec<String>,
}

impl Builder {
    fn op(&mut self, op: FpaOp, a: FpaTerm, b: FpaTerm) -> FpaTerm {
        let name = format!("rm.{}", self.modes.len());
        self.modes.push(name.clone());
        FpaTerm::binary(op, RmSlot::Var(name), a, b)
    }

    fn scale(&mut self, c: &str, v: FpaTerm) -> FpaTerm {
        let c = constant(&parse_rational(c).expect("constant"), self.fmt);
        self.op(FpaOp::Mul, c, v)
    }
}

/// The unrolled system as a floating-point SMT-LIB script. States are
/// `define-fun` macros over the inputs, every operation has its own free
/// rounding mode, and the last assertion is `y(k) >= th` on the first
/// component.
pub fn gen_bmc(inst: &BmcInstance) -> String {
    let fmt = inst.fmt;
    let sort = print_sort(fmt);
    let mut b = Builder {
        fmt,
        modes: Vec::new(),
    };
    let zero = FpaTerm::lit(FpValue::PosZero, fmt);
    let var = |name: String| FpaTerm::var(name, fmt);
    let state = |i: usize, j: usize| {
        if i == 0 {
            zero.clone()
        } else {
            var(format!("y{j}.{i}"))
        }
    };
    let mut states = Vec::new();
    for i in 1..=inst.k {
        let x = var(format!("x.{i}"));
        let rhs = match inst.system {
            BmcSystem::Integrator => {
                let g = b.scale(INTEGRATOR_GAIN, state(i - 1, 1));
                vec![b.op(FpaOp::Add, x, g)]
            }
            BmcSystem::Filter => {
                let a = b.scale(C1, x);
                let p = b.scale(C2, state(i - 1, 1));
                let q = b.scale(C3, state(i - 1, 2));
                let d = b.op(FpaOp::Sub, a, p);
                vec![b.op(FpaOp::Sub, d, q), state(i - 1, 1)]
            }
            BmcSystem::Rotation => {
                let (y1, y2) = (state(i - 1, 1), state(i - 1, 2));
                let a = b.scale(C4, y1.clone());
                let p = b.scale(C5, y2.clone());
                let first = b.op(FpaOp::Sub, a, p);
                let c = b.scale(C5, y1);
                let d = b.scale(C4, y2);
                vec![first, b.op(FpaOp::Add, c, d)]
            }
        };
        states.push(rhs);
    }
    let mut out = String::new();
    let _ = writeln!(out, "(set-logic QF_FP)");
    if inst.system.has_input() {
        for i in 1..=inst.k {
            let _ = writeln!(out, "(declare-const {} {sort})", quote(&format!("x.{i}")));
        }
    }
    for m in &b.modes {
        let _ = writeln!(out, "(declare-const {} RoundingMode)", quote(m));
    }
    for (i, rhs) in states.iter().enumerate() {
        for (j, t) in rhs.iter().enumerate() {
            let _ = writeln!(
                out,
                "(define-fun {} () {sort} {})",
                quote(&format!("y{}.{}", j + 1, i + 1)),
                print_term(t)
            );
        }
    }
    if inst.system.has_input() {
        let one = print_term(&constant(&BigRational::from_integer(1.into()), fmt));
        let minus_one = print_term(&constant(&BigRational::from_integer((-1).into()), fmt));
        for i in 1..=inst.k {
            let x = quote(&format!("x.{i}"));
            let _ = writeln!(
                out,
                "(assert (fp.leq {minus_one} {x}))\n(assert (fp.leq {x} {one}))"
            );
        }
    }
    let th = print_term(&constant(&inst.th, fmt));
    let _ = writeln!(
        out,
        "(assert (fp.geq {} {th}))",
        quote(&format!("y1.{}", inst.k))
    );
    out.push_str("(check-sat)\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smt::parse_script;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn integrator_maxima() {
        let ones = |k| vec![q("1"); k];
        let maxima: Vec<BigRational> = (1..=3)
            .map(|k| BmcSystem::Integrator.simulate(&ones(k)))
            .collect();
        assert_eq!(maxima, vec![q("1"), q("1.9"), q("2.71")]);
        assert!(BmcSystem::Rotation.simulate(&ones(4)).is_zero());
    }

    #[test]
    fn scripts_parse() {
        for system in BmcSystem::ALL {
            for k in 1..=3 {
                let inst = BmcInstance::new(system, k, q("2.71"), FpFormat::FLOAT64).unwrap();
                let text = gen_bmc(&inst);
                let script = parse_script(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
                let phi = script.formula();
                assert_eq!(phi.formats(), vec![FpFormat::FLOAT64]);
                let inputs = if system.has_input() { 2 * k } else { 0 };
                assert_eq!(phi.atom_count(), inputs + 1);
                assert!(phi.mode_vars().iter().all(|m| script.mode_vars.contains(m)));
            }
        }
    }

    #[test]
    fn naming_and_constants() {
        let inst =
            BmcInstance::new(BmcSystem::Integrator, 3, q("2.71"), FpFormat::FLOAT64).unwrap();
        assert_eq!(inst.file_name(), "integrator_k3_th2.71.smt2");
        assert!(BmcInstance::new(BmcSystem::Filter, 0, q("1"), FpFormat::FLOAT64).is_err());
        let text = gen_bmc(&inst);
        assert!(text.contains("((_ fp.const 11 53) 0.9 RNE)"));
        assert!(text.contains("(fp.leq x.1 (fp #b0 #b01111111111 #b"));
        assert_eq!(
            "Rotation".parse::<BmcSystem>().unwrap(),
            BmcSystem::Rotation
        );
    }
}
