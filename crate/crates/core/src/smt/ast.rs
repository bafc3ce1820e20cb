use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;

use crate::format::FpFormat;
use crate::ia::{FpaOp, Rel};
use crate::oracle::{fp_round, FpValue, RoundingMode};

/// The rounding argument of a binary operator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RmSlot {
    Concrete(RoundingMode),
    /// A free `RoundingMode` constant; the same name means the same mode.
    Var(String),
    /// Any mode, chosen independently at this site.
    Unspecified,
}

impl fmt::Display for RmSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RmSlot::Concrete(m) => m.fmt(f),
            RmSlot::Var(name) => f.write_str(name),
            RmSlot::Unspecified => f.write_str("_"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FpaTerm {
    Literal(FpValue, FpFormat),
    /// A decimal constant rounded once with a fixed mode, written
    /// `((_ fp.const eb sb) <decimal> <mode>)`.
    Const {
        value: BigRational,
        mode: RoundingMode,
        format: FpFormat,
    },
    Var(String, FpFormat),
    Unary(FpaOp, Box<FpaTerm>),
    Binary(FpaOp, RmSlot, Box<FpaTerm>, Box<FpaTerm>),
}

impl FpaTerm {
    pub fn var(name: impl Into<String>, format: FpFormat) -> Self {
        FpaTerm::Var(name.into(), format)
    }

    pub fn lit(value: FpValue, format: FpFormat) -> Self {
        FpaTerm::Literal(value, format)
    }

    /// The literal holding the nearest-even rounding of `value`.
    pub fn real(value: &BigRational, format: FpFormat) -> Self {
        FpaTerm::Literal(fp_round(value, RoundingMode::RNE, format), format)
    }

    pub fn unary(op: FpaOp, arg: FpaTerm) -> Self {
        debug_assert!(op.is_unary());
        FpaTerm::Unary(op, Box::new(arg))
    }

    pub fn binary(op: FpaOp, rm: RmSlot, lhs: FpaTerm, rhs: FpaTerm) -> Self {
        debug_assert!(!op.is_unary());
        FpaTerm::Binary(op, rm, Box::new(lhs), Box::new(rhs))
    }

    pub fn format(&self) -> FpFormat {
        match self {
            FpaTerm::Literal(_, f) | FpaTerm::Var(_, f) => *f,
            FpaTerm::Const { format, .. } => *format,
            FpaTerm::Unary(_, a) | FpaTerm::Binary(_, _, a, _) => a.format(),
        }
    }

    /// The value of a constant leaf.
    pub fn constant_value(&self) -> Option<FpValue> {
        match self {
            FpaTerm::Literal(v, _) => Some(*v),
            FpaTerm::Const {
                value,
                mode,
                format,
            } => Some(fp_round(value, *mode, *format)),
            _ => None,
        }
    }

    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a FpaTerm)) {
        f(self);
        match self {
            FpaTerm::Unary(_, a) => a.visit(f),
            FpaTerm::Binary(_, _, a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    pub fn op_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |t| {
            if matches!(t, FpaTerm::Unary(..) | FpaTerm::Binary(..)) {
                n += 1;
            }
        });
        n
    }
}

/// A quantifier-free formula. `And(vec![])` is true and `Or(vec![])` false.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FpaFormula {
    Atom(Rel, FpaTerm, FpaTerm),
    Not(Box<FpaFormula>),
    And(Vec<FpaFormula>),
    Or(Vec<FpaFormula>),
}

impl FpaFormula {
    pub fn atom(rel: Rel, lhs: FpaTerm, rhs: FpaTerm) -> Self {
        FpaFormula::Atom(rel, lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FpaFormula) -> Self {
        FpaFormula::Not(Box::new(f))
    }

    pub fn truth() -> Self {
        FpaFormula::And(Vec::new())
    }

    pub fn falsity() -> Self {
        FpaFormula::Or(Vec::new())
    }

    pub fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a FpaFormula)) {
        match self {
            FpaFormula::Atom(..) => f(self),
            FpaFormula::Not(g) => g.visit_atoms(f),
            FpaFormula::And(gs) | FpaFormula::Or(gs) => gs.iter().for_each(|g| g.visit_atoms(f)),
        }
    }

    pub fn visit_terms<'a>(&'a self, f: &mut impl FnMut(&'a FpaTerm)) {
        self.visit_atoms(&mut |atom| {
            if let FpaFormula::Atom(_, a, b) = atom {
                a.visit(f);
                b.visit(f);
            }
        });
    }

    /// Free floating-point variables, sorted by name.
    pub fn free_vars(&self) -> Vec<(String, FpFormat)> {
        let mut set = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let FpaTerm::Var(name, fmt) = t {
                set.insert((name.clone(), *fmt));
            }
        });
        set.into_iter().collect()
    }

    /// Rounding-mode variable names, sorted.
    pub fn mode_vars(&self) -> Vec<String> {
        let mut set = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let FpaTerm::Binary(_, RmSlot::Var(name), ..) = t {
                set.insert(name.clone());
            }
        });
        set.into_iter().collect()
    }

    /// All formats occurring in terms, sorted.
    pub fn formats(&self) -> Vec<FpFormat> {
        let mut set = BTreeSet::new();
        self.visit_terms(&mut |t| {
            set.insert(t.format());
        });
        set.into_iter().collect()
    }

    pub fn atom_count(&self) -> usize {
        let mut n = 0;
        self.visit_atoms(&mut |_| n += 1);
        n
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            FpaFormula::Atom(..) => true,
            FpaFormula::Not(g) => matches!(**g, FpaFormula::Atom(..)),
            FpaFormula::And(gs) | FpaFormula::Or(gs) => gs.iter().all(FpaFormula::is_nnf),
        }
    }
}

/// Negation normal form: negations only directly above atoms.
pub fn to_nnf(phi: &FpaFormula) -> FpaFormula {
    nnf(phi, false)
}

fn nnf(phi: &FpaFormula, negate: bool) -> FpaFormula {
    match phi {
        FpaFormula::Atom(..) if negate => FpaFormula::not(phi.clone()),
        FpaFormula::Atom(..) => phi.clone(),
        FpaFormula::Not(g) => nnf(g, !negate),
        FpaFormula::And(gs) => {
            let parts = gs.iter().map(|g| nnf(g, negate)).collect();
            if negate {
                FpaFormula::Or(parts)
            } else {
                FpaFormula::And(parts)
            }
        }
        FpaFormula::Or(gs) => {
            let parts = gs.iter().map(|g| nnf(g, negate)).collect();
            if negate {
                FpaFormula::And(parts)
            } else {
                FpaFormula::Or(parts)
            }
        }
    }
}

/// A parsed script: its declarations in order and its assertions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub logic: Option<String>,
    pub vars: Vec<(String, FpFormat)>,
    pub mode_vars: Vec<String>,
    pub assertions: Vec<FpaFormula>,
}

impl Script {
    /// The conjunction of all assertions.
    pub fn formula(&self) -> FpaFormula {
        match self.assertions.as_slice() {
            [single] => single.clone(),
            all => FpaFormula::And(all.to_vec()),
        }
    }

    pub fn from_formula(phi: &FpaFormula) -> Self {
        Script {
            logic: Some("QF_FP".into()),
            vars: phi.free_vars(),
            mode_vars: phi.mode_vars(),
            assertions: vec![phi.clone()],
        }
    }
}
