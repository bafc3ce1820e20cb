//! Translation of floating-point formulas into real-arithmetic SMT-LIB
//! scripts that embed the weak or strong interval extension.
//!
//! Intervals are triples `(lo, hi, nan)`. In the datatype representation
//! they are values of `RInt` and operators are `define-fun`s over `RInt`;
//! in the flattened representation every interval is three symbols and
//! the operator bodies are expanded in place. Bounds at `ri.large_value`
//! stand for the infinities.

mod body;
mod simplify;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::format::{FpFormat, Precision};
use crate::ia::{iv_op, round_down, round_up, FpaOp, Mode, Polarity, RInterval, Rel, XRat};
use crate::oracle::FpValue;
use crate::smt::{check_sorts, quote, to_nnf, Formats, FpaFormula, FpaTerm};
use crate::Error;
use body::{Comp, Rounding, K, NK};

/// How intervals are represented in the emitted script.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Representation {
    #[default]
    Datatype,
    Flattened,
}

/// Error parameters of the rounding operators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum PrecisionMode {
    /// The parameters of the formula's own format.
    #[default]
    Concrete,
    /// Parameters chosen per check through guard literals, one guard per
    /// ladder step. The range bound stays that of the formula's format.
    Abstract { ladder: Vec<FpFormat> },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LogicHint {
    Linear,
    Nonlinear,
    #[default]
    Auto,
}

#[derive(Clone, Debug)]
pub struct EncodeOptions {
    pub mode: Mode,
    pub representation: Representation,
    pub precision: PrecisionMode,
    /// Formats to encode for; derived from the formula when absent.
    pub formats: Option<Formats>,
    pub logic: LogicHint,
    /// Emit `(set-option :produce-models true)` before the logic.
    pub produce_models: bool,
    /// Close the script with `(check-sat)`.
    pub check_sat: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            mode: Mode::Weak,
            representation: Representation::default(),
            precision: PrecisionMode::default(),
            formats: None,
            logic: LogicHint::default(),
            produce_models: false,
            check_sat: true,
        }
    }
}

impl EncodeOptions {
    pub fn new(mode: Mode) -> Self {
        EncodeOptions {
            mode,
            ..Self::default()
        }
    }

    pub fn flattened(self) -> Self {
        EncodeOptions {
            representation: Representation::Flattened,
            ..self
        }
    }
}

/// An SMT-LIB real literal: `2.0`, `(/ 1 3)`, `(- 0.5)`.
pub fn real_literal(q: &BigRational) -> String {
    let a = q.abs();
    let body = if a.is_integer() {
        format!("{}.0", a.numer())
    } else {
        format!("(/ {} {})", a.numer(), a.denom())
    };
    if q.is_negative() {
        format!("(- {body})")
    } else {
        body
    }
}

/// Guard literal that selects the error parameters of `step`, clamped to
/// the format bound `bound`.
pub fn define_precision_assumptions(bound: FpFormat, step: FpFormat) -> String {
    guard_name(step.clamp_to(bound))
}

fn guard_name(f: FpFormat) -> String {
    format!("ria.prec_{}_{}", f.eb(), f.sb())
}

/// Clamps ladder steps to `bound` and drops repeats, keeping order.
pub fn clamp_ladder(ladder: &[FpFormat], bound: FpFormat) -> Vec<FpFormat> {
    let mut seen = HashSet::new();
    ladder
        .iter()
        .map(|s| s.clamp_to(bound))
        .filter(|s| seen.insert(*s))
        .collect()
}

enum Precisions {
    Single(FpFormat),
    Multi(Vec<FpFormat>),
    Abstract {
        bound: FpFormat,
        steps: Vec<FpFormat>,
    },
}

struct Encoder<'a> {
    opts: &'a EncodeOptions,
    prec: Precisions,
    names: BTreeMap<String, String>,
    ops: BTreeSet<FpaOp>,
    preds: BTreeSet<(Rel, Polarity, bool)>,
    nonlinear: Option<String>,
    defs: Vec<String>,
    nodes: usize,
    leaves: ProbeLeaves,
    leaf_count: usize,
}

/// An encoded term: an `RInt` expression, or three component expressions
/// with the interval they denote when it is known.
enum Enc {
    Dt(String),
    Flat(Comp, Option<RInterval<BigRational>>),
}

fn numeral(c: &Option<RInterval<BigRational>>) -> bool {
    c.as_ref()
        .is_some_and(|i| i.lo().is_finite() && i.hi().is_finite())
}

/// Sign of a known finite constant interval that excludes zero and NaN.
fn sign_definite(c: &Option<RInterval<BigRational>>) -> Option<bool> {
    let i = c.as_ref().filter(|i| numeral(c) && !i.has_nan())?;
    let zero = XRat::Finite(BigRational::zero());
    if i.lo() > &zero {
        Some(true)
    } else if i.hi() < &zero {
        Some(false)
    } else {
        None
    }
}

fn bound_literal(b: &XRat<BigRational>) -> String {
    match b {
        XRat::NegInf => NK.to_string(),
        XRat::PosInf => K.to_string(),
        XRat::Finite(q) => real_literal(q),
    }
}

fn known(i: RInterval<BigRational>) -> Enc {
    let c = Comp::new(
        bound_literal(i.lo()),
        bound_literal(i.hi()),
        i.has_nan().to_string(),
    );
    Enc::Flat(c, Some(i))
}

impl<'a> Encoder<'a> {
    fn new(phi: &FpaFormula, opts: &'a EncodeOptions, prec: Precisions) -> Self {
        let vars = phi.free_vars();
        let taken: HashSet<String> = vars.iter().map(|(n, _)| n.clone()).collect();
        let mut names = BTreeMap::new();
        for (name, _) in &vars {
            let mut mapped = name.clone();
            while mapped.starts_with("ri.")
                || mapped.starts_with("ria.")
                || (mapped != *name && taken.contains(&mapped))
            {
                mapped = format!("u!{mapped}");
            }
            names.insert(name.clone(), mapped);
        }
        Encoder {
            opts,
            prec,
            names,
            ops: BTreeSet::new(),
            preds: BTreeSet::new(),
            nonlinear: None,
            defs: Vec::new(),
            nodes: 0,
            leaves: ProbeLeaves::Folded,
            leaf_count: 0,
        }
    }

    fn flat(&self) -> bool {
        self.opts.representation == Representation::Flattened
    }

    fn multi(&self) -> bool {
        matches!(self.prec, Precisions::Multi(_))
    }

    /// Precision argument, with a trailing space, for terms of `fmt`.
    fn prec_arg(&self, fmt: FpFormat) -> String {
        match &self.prec {
            Precisions::Multi(table) => {
                format!(
                    "{}.0 ",
                    table
                        .iter()
                        .position(|f| *f == fmt)
                        .expect("format in table")
                        + 1
                )
            }
            _ => String::new(),
        }
    }

    fn max_name(&self, fmt: FpFormat) -> String {
        match &self.prec {
            Precisions::Multi(_) => format!(
                "ri.max_value_{}",
                self.prec_arg(fmt).trim().trim_end_matches(".0")
            ),
            _ => "ri.max_value".into(),
        }
    }

    fn var_name(&self, name: &str) -> String {
        quote(&self.names[name])
    }

    fn comp_name(&self, name: &str, part: char) -> String {
        quote(&format!("{}.{part}", self.names[name]))
    }

    fn mark_nonlinear(&mut self, t: &FpaTerm) {
        if self.nonlinear.is_none() {
            self.nonlinear = Some(crate::smt::print_term(t));
        }
    }

    fn term(&mut self, t: &FpaTerm) -> Enc {
        match t {
            FpaTerm::Literal(v, f) => {
                if self.flat() {
                    let e = known(match v {
                        FpValue::NaN => RInterval::nan_surrogate(),
                        _ => RInterval::of_value(&v.value(*f)),
                    });
                    return self.leaf(e);
                }
                Enc::Dt(match v {
                    FpValue::NaN => "ri.nan_full".into(),
                    FpValue::PosInf => "ri.pinf".into(),
                    FpValue::NegInf => "ri.ninf".into(),
                    _ => format!(
                        "(ri.exact {})",
                        real_literal(&v.to_rational(*f).expect("finite"))
                    ),
                })
            }
            FpaTerm::Const { value, format, .. } => {
                let p = self.prec_arg(*format);
                let c = real_literal(value);
                if !self.flat() {
                    return Enc::Dt(format!("(ri.of_real {p}{c})"));
                }
                match self.fixed_precision(*format) {
                    Some(prec) => {
                        let x = XRat::Finite(value.clone());
                        let e = known(RInterval::new_unchecked(
                            round_down(&x, &prec),
                            round_up(&x, &prec),
                            false,
                        ));
                        self.leaf(e)
                    }
                    None => Enc::Flat(
                        Comp::new(format!("(ri.r_dn {c})"), format!("(ri.r_up {c})"), "false"),
                        None,
                    ),
                }
            }
            FpaTerm::Var(name, _) => {
                if self.flat() {
                    Enc::Flat(
                        Comp::new(
                            self.comp_name(name, 'l'),
                            self.comp_name(name, 'u'),
                            self.comp_name(name, 'n'),
                        ),
                        None,
                    )
                } else {
                    Enc::Dt(self.var_name(name))
                }
            }
            FpaTerm::Unary(op, a) => {
                self.ops.insert(*op);
                match self.term(a) {
                    Enc::Dt(a) => Enc::Dt(format!("(ri.{op} {a})")),
                    Enc::Flat(_, Some(a)) => known(iv_op(*op, &a, &a, &t.format().precision())),
                    Enc::Flat(a, None) => self.define_node(body::apply(
                        *op,
                        &a,
                        &a,
                        &Rounding {
                            prec: String::new(),
                        },
                    )),
                }
            }
            FpaTerm::Binary(op, _, a, b) => {
                self.ops.insert(*op);
                let p = self.prec_arg(t.format());
                match (self.term(a), self.term(b)) {
                    (Enc::Dt(a), Enc::Dt(b)) => {
                        if matches!(op, FpaOp::Mul | FpaOp::Div) {
                            self.mark_nonlinear(t);
                        }
                        Enc::Dt(format!("(ri.{op} {p}{a} {b})"))
                    }
                    (Enc::Flat(_, Some(a)), Enc::Flat(_, Some(b)))
                        if self.fixed_precision(t.format()).is_some() =>
                    {
                        let prec = self.fixed_precision(t.format()).expect("checked");
                        known(iv_op(*op, &a, &b, &prec))
                    }
                    (Enc::Flat(a, ca), Enc::Flat(b, cb)) => {
                        let linear = match op {
                            FpaOp::Mul => numeral(&ca) || numeral(&cb),
                            FpaOp::Div => numeral(&cb),
                            _ => true,
                        };
                        if !linear {
                            self.mark_nonlinear(t);
                        }
                        let r = Rounding { prec: p };
                        if *op == FpaOp::Mul {
                            let scaled = match (sign_definite(&ca), sign_definite(&cb)) {
                                (Some(s), _) => Some((s, &a, &b)),
                                (None, Some(s)) => Some((s, &b, &a)),
                                _ => None,
                            };
                            if let Some((positive, c, other)) = scaled {
                                return self
                                    .define_node(body::mul_const(&c.l, &c.u, positive, other, &r));
                            }
                        }
                        self.define_node(body::apply(*op, &a, &b, &r))
                    }
                    _ => unreachable!("one representation per script"),
                }
            }
        }
    }

    fn facts(&self) -> simplify::Facts {
        match &self.prec {
            Precisions::Single(f) => {
                let prec = f.precision();
                simplify::Facts {
                    max: f.max_fp(),
                    precision: Box::new(move |p| p.is_none().then(|| prec.clone())),
                }
            }
            Precisions::Multi(table) => {
                let table = table.clone();
                simplify::Facts {
                    max: table
                        .iter()
                        .map(|f| f.max_fp())
                        .max()
                        .expect("nonempty table"),
                    precision: Box::new(move |p| {
                        let i: usize = p?.to_integer().try_into().ok()?;
                        table.get(i.checked_sub(1)?).map(|f| f.precision())
                    }),
                }
            }
            Precisions::Abstract { bound, .. } => simplify::Facts {
                max: bound.max_fp(),
                precision: Box::new(|_| None),
            },
        }
    }

    /// A constant leaf, hidden behind a node when probing symbolic bodies.
    fn leaf(&mut self, e: Enc) -> Enc {
        let k = self.leaf_count;
        self.leaf_count += 1;
        let opaque = match self.leaves {
            ProbeLeaves::Folded => false,
            ProbeLeaves::Opaque => true,
            ProbeLeaves::Alternate => k.is_multiple_of(2),
        };
        match e {
            Enc::Flat(c, Some(_)) if opaque => self.define_node(c),
            e => e,
        }
    }

    fn define_node(&mut self, c: Comp) -> Enc {
        let facts = self.facts();
        let c = Comp::new(
            simplify::simplify(&c.l, &facts),
            simplify::simplify(&c.u, &facts),
            simplify::simplify(&c.n, &facts),
        );
        let k = self.nodes;
        self.nodes += 1;
        let names = Comp::symbols(&format!("ri.t{k}."));
        for (name, sort, expr) in [
            (&names.l, "Real", &c.l),
            (&names.u, "Real", &c.u),
            (&names.n, "Bool", &c.n),
        ] {
            self.defs
                .push(format!("(define-fun {name} () {sort} {expr})"));
        }
        Enc::Flat(names, None)
    }

    /// Error parameters of `fmt` when they do not depend on guards.
    fn fixed_precision(&self, fmt: FpFormat) -> Option<Precision<BigRational>> {
        match &self.prec {
            Precisions::Single(f) => Some(f.precision()),
            Precisions::Multi(_) => Some(fmt.precision()),
            Precisions::Abstract { .. } => None,
        }
    }

    fn literal(&mut self, rel: Rel, polarity: Polarity, f: &FpaTerm, g: &FpaTerm) -> String {
        let guard = f != g;
        let mode = self.opts.mode;
        match (self.term(f), self.term(g)) {
            (Enc::Dt(a), Enc::Dt(b)) => {
                self.preds.insert((rel, polarity, guard));
                format!("({} {a} {b})", body::predicate_name(rel, polarity, guard))
            }
            (Enc::Flat(a, _), Enc::Flat(b, _)) => {
                let (d, e) = (body::sub_exact(&a, &b), body::sub_exact(&b, &a));
                simplify::simplify(
                    &body::predicate(rel, polarity, mode, guard, &a, &b, &d, &e),
                    &self.facts(),
                )
            }
            _ => unreachable!("one representation per script"),
        }
    }

    fn formula(&mut self, phi: &FpaFormula) -> String {
        match phi {
            FpaFormula::Atom(rel, f, g) => self.literal(*rel, Polarity::Positive, f, g),
            FpaFormula::Not(inner) => match inner.as_ref() {
                FpaFormula::Atom(rel, f, g) => self.literal(*rel, Polarity::Negative, f, g),
                _ => unreachable!("negation normal form"),
            },
            FpaFormula::And(gs) if gs.is_empty() => "true".into(),
            FpaFormula::Or(gs) if gs.is_empty() => "false".into(),
            FpaFormula::And(gs) | FpaFormula::Or(gs) => {
                let head = if matches!(phi, FpaFormula::And(_)) {
                    "and"
                } else {
                    "or"
                };
                let parts: Vec<String> = gs.iter().map(|g| self.formula(g)).collect();
                format!("({head} {})", parts.join(" "))
            }
        }
    }

    fn rounding_defs(&self, out: &mut String) {
        let round = |out: &mut String, suffix: &str, ed: &str, em: &str, max: &str| {
            let _ = writeln!(
                out,
                "(define-fun ri.r_dn{suffix} ((v Real)) Real\n  (let ((w (- v (/ (ite (>= v 0.0) v (- v)) {ed}) {em})))\n    (ite (< w (- {max})) {NK} (ite (> w {max}) {max} w))))"
            );
            let _ = writeln!(
                out,
                "(define-fun ri.r_up{suffix} ((v Real)) Real\n  (let ((w (+ v (/ (ite (>= v 0.0) v (- v)) {ed}) {em})))\n    (ite (> w {max}) {K} (ite (< w (- {max})) (- {max}) w))))"
            );
        };
        let constants = |out: &mut String, suffix: &str, f: FpFormat| {
            let _ = writeln!(
                out,
                "(define-fun ri.ed{suffix} () Real {})",
                real_literal(&f.ed())
            );
            let _ = writeln!(
                out,
                "(define-fun ri.em{suffix} () Real {})",
                real_literal(&f.em())
            );
        };
        match &self.prec {
            Precisions::Single(f) => {
                let _ = writeln!(
                    out,
                    "(define-fun ri.max_value () Real {})",
                    real_literal(&f.max_fp())
                );
                constants(out, "", *f);
                large_value(out);
                round(out, "", "ri.ed", "ri.em", "ri.max_value");
            }
            Precisions::Multi(table) => {
                for (i, f) in table.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "(define-fun ri.max_value_{} () Real {})",
                        i + 1,
                        real_literal(&f.max_fp())
                    );
                }
                let top = table
                    .iter()
                    .map(|f| f.max_fp())
                    .max()
                    .expect("nonempty table");
                let _ = writeln!(
                    out,
                    "(define-fun ri.max_value () Real {})",
                    real_literal(&top)
                );
                large_value(out);
                for (i, f) in table.iter().enumerate() {
                    let s = format!("_{}", i + 1);
                    constants(out, &s, *f);
                    round(
                        out,
                        &s,
                        &format!("ri.ed{s}"),
                        &format!("ri.em{s}"),
                        &format!("ri.max_value{s}"),
                    );
                }
                for dir in ["dn", "up"] {
                    let mut chain = format!("(ri.r_{dir}_{} v)", table.len());
                    for i in (1..table.len()).rev() {
                        chain = format!("(ite (= p {i}.0) (ri.r_{dir}_{i} v) {chain})");
                    }
                    let _ = writeln!(
                        out,
                        "(define-fun ri.r_{dir} ((p Real) (v Real)) Real {chain})"
                    );
                }
            }
            Precisions::Abstract { bound, steps } => {
                let _ = writeln!(
                    out,
                    "(define-fun ri.max_value () Real {})",
                    real_literal(&bound.max_fp())
                );
                large_value(out);
                for s in steps {
                    let _ = writeln!(out, "(declare-const {} Bool)", guard_name(*s));
                }
                for (i, a) in steps.iter().enumerate() {
                    for b in &steps[i + 1..] {
                        let _ = writeln!(
                            out,
                            "(assert (not (and {} {})))",
                            guard_name(*a),
                            guard_name(*b)
                        );
                    }
                }
                let chain = |value: &dyn Fn(FpFormat) -> String| {
                    let mut e = value(*bound);
                    for s in steps.iter().rev() {
                        e = format!("(ite {} {} {e})", guard_name(*s), value(*s));
                    }
                    e
                };
                let _ = writeln!(
                    out,
                    "(define-fun ri.ed () Real {})",
                    chain(&|f| real_literal(&f.ed()))
                );
                let _ = writeln!(
                    out,
                    "(define-fun ri.em () Real {})",
                    chain(&|f| real_literal(&f.em()))
                );
                let mut all = steps.clone();
                if !all.contains(bound) {
                    all.push(*bound);
                }
                for f in &all {
                    let s = format!("_{}_{}", f.eb(), f.sb());
                    round(
                        out,
                        &s,
                        &real_literal(&f.ed()),
                        &real_literal(&f.em()),
                        "ri.max_value",
                    );
                }
                for dir in ["dn", "up"] {
                    let call = |f: FpFormat| format!("(ri.r_{dir}_{}_{} v)", f.eb(), f.sb());
                    let _ = writeln!(
                        out,
                        "(define-fun ri.r_{dir} ((v Real)) Real {})",
                        chain(&call)
                    );
                }
            }
        }
    }

    fn datatype_defs(&self, out: &mut String) {
        let pp = if self.multi() { "(p Real) " } else { "" };
        let pa = if self.multi() { "p " } else { "" };
        out.push_str("(define-fun is_pinf ((x RInt)) Bool (>= (ri.u x) ri.large_value))\n");
        out.push_str("(define-fun is_ninf ((x RInt)) Bool (<= (ri.l x) (- ri.large_value)))\n");
        out.push_str("(define-fun ri.exact ((v Real)) RInt (tpl v v false))\n");
        let _ = writeln!(out, "(define-fun ri.of_real ({pp}(v Real)) RInt (tpl (ri.r_dn {pa}v) (ri.r_up {pa}v) false))");
        out.push_str("(define-fun ri.zero () RInt (tpl 0.0 0.0 false))\n");
        out.push_str("(define-fun ri.zero_nan () RInt (tpl 0.0 0.0 true))\n");
        let _ = writeln!(out, "(define-fun ri.pinf () RInt (tpl {K} {K} false))");
        let _ = writeln!(out, "(define-fun ri.ninf () RInt (tpl {NK} {NK} false))");
        let _ = writeln!(out, "(define-fun ri.nan () RInt (tpl {NK} {NK} true))");
        let _ = writeln!(out, "(define-fun ri.nan_full () RInt (tpl {NK} {K} true))");
        let (x, y) = (Comp::symbols("x"), Comp::symbols("y"));
        let binds = "((xl (ri.l x)) (xu (ri.u x)) (xn (p_nan x)) (yl (ri.l y)) (yu (ri.u y)) (yn (p_nan y)))";
        let r = Rounding {
            prec: pa.to_string(),
        };
        for op in &self.ops {
            let c = body::apply(*op, &x, &y, &r);
            if op.is_unary() {
                let _ = writeln!(
                    out,
                    "(define-fun ri.{op} ((x RInt)) RInt\n  (let ((xl (ri.l x)) (xu (ri.u x)) (xn (p_nan x)))\n    (tpl {} {} {})))",
                    c.l, c.u, c.n
                );
            } else {
                let _ = writeln!(
                    out,
                    "(define-fun ri.{op} ({pp}(x RInt) (y RInt)) RInt\n  (let {binds}\n    (tpl {} {} {})))",
                    c.l, c.u, c.n
                );
            }
        }
        if !self.preds.is_empty() {
            let d = body::sub_exact(&x, &y);
            let _ = writeln!(
                out,
                "(define-fun ri.sub_exact ((x RInt) (y RInt)) RInt\n  (let {binds}\n    (tpl {} {} {})))",
                d.l, d.u, d.n
            );
        }
        for (rel, pol, guard) in &self.preds {
            let (f, g, d, e) = (
                Comp::symbols("f"),
                Comp::symbols("g"),
                Comp::symbols("d"),
                Comp::symbols("e"),
            );
            let b = body::predicate(*rel, *pol, self.opts.mode, *guard, &f, &g, &d, &e);
            let _ = writeln!(
                out,
                "(define-fun {} ((f RInt) (g RInt)) Bool\n  (let ((d (ri.sub_exact f g)) (e (ri.sub_exact g f)))\n  (let ((fl (ri.l f)) (fu (ri.u f)) (fn (p_nan f)) (gl (ri.l g)) (gu (ri.u g)) (gn (p_nan g))\n        (dl (ri.l d)) (du (ri.u d)) (dn (p_nan d)) (el (ri.l e)) (eu (ri.u e)) (en (p_nan e)))\n    {b})))",
                body::predicate_name(*rel, *pol, *guard)
            );
        }
    }

    fn declare_vars(&self, vars: &[(String, FpFormat)], out: &mut String) {
        if !vars.is_empty() {
            let _ = writeln!(
                out,
                "(define-fun ri.bound_ok ((b Real) (m Real)) Bool (or (= b {K}) (= b {NK}) (and (<= (- m) b) (<= b m))))"
            );
        }
        for (name, fmt) in vars {
            let p = self.prec_arg(*fmt);
            let max = self.max_name(*fmt);
            let c = if self.flat() {
                let c = Comp::new(
                    self.comp_name(name, 'l'),
                    self.comp_name(name, 'u'),
                    self.comp_name(name, 'n'),
                );
                let _ = writeln!(
                    out,
                    "(declare-const {} Real)\n(declare-const {} Real)\n(declare-const {} Bool)",
                    c.l, c.u, c.n
                );
                c
            } else {
                let v = self.var_name(name);
                let _ = writeln!(out, "(declare-const {v} RInt)");
                Comp::new(
                    format!("(ri.l {v})"),
                    format!("(ri.u {v})"),
                    format!("(p_nan {v})"),
                )
            };
            let _ = writeln!(
                out,
                "(assert (and (ri.bound_ok {} {max}) (ri.bound_ok {} {max}) (<= {} {})))",
                c.l, c.u, c.l, c.u
            );
            let nan_value = match self.opts.mode {
                Mode::Weak => (NK, NK),
                Mode::Strong => (NK, K),
            };
            match self.opts.mode {
                Mode::Weak => {
                    let _ = writeln!(out, "(assert (= {} {}))", c.l, c.u);
                }
                Mode::Strong => {
                    let _ = writeln!(
                        out,
                        "(assert (or (>= {} {K}) (<= {} (ri.r_dn {p}{}))))",
                        c.u, c.l, c.u
                    );
                }
            }
            if self.flat() {
                let _ = writeln!(
                    out,
                    "(assert (=> {} (and (= {} {}) (= {} {}))))",
                    c.n, c.l, nan_value.0, c.u, nan_value.1
                );
            } else {
                let target = if self.opts.mode == Mode::Weak {
                    "ri.nan"
                } else {
                    "ri.nan_full"
                };
                let _ = writeln!(
                    out,
                    "(assert (=> {} (= {} {target})))",
                    c.n,
                    self.var_name(name)
                );
            }
        }
    }

    fn logic(&self) -> Result<String, Error> {
        let nonlinear = match (self.opts.logic, &self.nonlinear) {
            (LogicHint::Linear, Some(t)) => return Err(Error::Nonlinear(t.clone())),
            (LogicHint::Linear, None) => false,
            (LogicHint::Nonlinear, _) => true,
            (LogicHint::Auto, n) => n.is_some(),
        };
        let arith = if nonlinear { "NRA" } else { "LRA" };
        Ok(match self.opts.representation {
            Representation::Datatype => format!("QF_UFDT{arith}"),
            Representation::Flattened => format!("QF_{arith}"),
        })
    }

    /// Everything except the assertions: header, vocabulary and variables.
    fn preamble(&self, vars: &[(String, FpFormat)]) -> Result<String, Error> {
        let mut out = String::new();
        if self.opts.produce_models {
            out.push_str("(set-option :produce-models true)\n");
        }
        let _ = writeln!(out, "(set-logic {})", self.logic()?);
        if !self.flat() {
            out.push_str("(declare-datatype RInt ((tpl (ri.l Real) (ri.u Real) (p_nan Bool))))\n");
        }
        self.rounding_defs(&mut out);
        if !self.flat() {
            self.datatype_defs(&mut out);
        }
        self.declare_vars(vars, &mut out);
        for d in &self.defs {
            out.push_str(d);
            out.push('\n');
        }
        Ok(out)
    }
}

fn large_value(out: &mut String) {
    out.push_str(
        "(declare-const ri.large_value Real)\n(assert (> ri.large_value (* 2.0 ri.max_value)))\n",
    );
}

fn precisions(phi: &FpaFormula, opts: &EncodeOptions, multi: bool) -> Result<Precisions, Error> {
    let formats = match &opts.formats {
        Some(f) => f.clone(),
        None => check_sorts(phi, multi)?,
    };
    if multi {
        return Ok(Precisions::Multi(formats.all()));
    }
    let Formats::Single(fmt) = formats else {
        return Err(Error::Encode(
            "several formats need the multi-precision encoding".into(),
        ));
    };
    Ok(match &opts.precision {
        PrecisionMode::Concrete => Precisions::Single(fmt),
        PrecisionMode::Abstract { ladder } => Precisions::Abstract {
            bound: fmt,
            steps: clamp_ladder(ladder, fmt),
        },
    })
}

fn assemble(phi: &FpaFormula, opts: &EncodeOptions, prec: Precisions) -> Result<String, Error> {
    let nnf = to_nnf(phi);
    let mut enc = Encoder::new(&nnf, opts, prec);
    let conjuncts: Vec<&FpaFormula> = match &nnf {
        FpaFormula::And(gs) => gs.iter().collect(),
        other => vec![other],
    };
    let asserts: Vec<String> = conjuncts.iter().map(|g| enc.formula(g)).collect();
    let mut out = enc.preamble(&nnf.free_vars())?;
    for a in asserts {
        let _ = writeln!(out, "(assert {a})");
    }
    if opts.check_sat {
        out.push_str("(check-sat)\n");
    }
    Ok(out)
}

/// Encodes a single-format formula.
pub fn encode(phi: &FpaFormula, opts: &EncodeOptions) -> Result<String, Error> {
    let prec = precisions(phi, opts, false)?;
    assemble(phi, opts, prec)
}

/// Encodes a formula over several formats. Operators take the index of
/// their format as a real numeral, counted from 1 in the order of the
/// format table.
pub fn encode_multi_precision(phi: &FpaFormula, opts: &EncodeOptions) -> Result<String, Error> {
    if matches!(opts.precision, PrecisionMode::Abstract { .. }) {
        return Err(Error::Encode(
            "abstract precision needs a single format".into(),
        ));
    }
    let prec = precisions(phi, opts, true)?;
    assemble(phi, opts, prec)
}

/// Script that evaluates the enclosures of ground terms of one format. The
/// answer to its single `get-value` lists `ri.large_value` followed by the
/// lower bound, upper bound and NaN flag of each term in order.
/// How a flattened probe treats constant leaves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProbeLeaves {
    /// Fold constants in place, as for ordinary scripts.
    #[default]
    Folded,
    /// Bind every leaf to a node so all operations use their symbolic bodies.
    Opaque,
    /// Bind every other leaf, which mixes constant and symbolic operands.
    Alternate,
}

pub fn encode_term_probe(terms: &[FpaTerm], opts: &EncodeOptions) -> Result<String, Error> {
    encode_term_probe_with(terms, opts, ProbeLeaves::Folded)
}

pub fn encode_term_probe_with(
    terms: &[FpaTerm],
    opts: &EncodeOptions,
    leaves: ProbeLeaves,
) -> Result<String, Error> {
    let Some(first) = terms.first() else {
        return Err(Error::Encode("no terms to probe".into()));
    };
    let phi = FpaFormula::truth();
    let opts = EncodeOptions {
        formats: Some(Formats::Single(first.format())),
        produce_models: true,
        check_sat: false,
        ..opts.clone()
    };
    let prec = precisions(&phi, &opts, false)?;
    let mut enc = Encoder::new(&phi, &opts, prec);
    enc.leaves = leaves;
    let mut values = vec![K.to_string()];
    for t in terms {
        if t.format() != first.format() {
            return Err(Error::Encode("probe terms must share a format".into()));
        }
        let mut vars = false;
        t.visit(&mut |s| vars |= matches!(s, FpaTerm::Var(..)));
        if vars {
            return Err(Error::Encode(format!(
                "probe term `{}` is not ground",
                crate::smt::print_term(t)
            )));
        }
        let c = match enc.term(t) {
            Enc::Dt(e) => Comp::new(
                format!("(ri.l {e})"),
                format!("(ri.u {e})"),
                format!("(p_nan {e})"),
            ),
            Enc::Flat(c, _) => c,
        };
        values.extend([c.l, c.u, c.n]);
    }
    let mut out = enc.preamble(&[])?;
    let _ = writeln!(out, "(check-sat)\n(get-value ({}))", values.join(" "));
    Ok(out)
}

/// The numeric bound `v` reads as, given the backend's `ri.large_value`.
pub fn decode_bound(v: &BigRational, large: &BigRational) -> XRat<BigRational> {
    if v >= large {
        XRat::PosInf
    } else if *v <= -large.clone() {
        XRat::NegInf
    } else {
        XRat::Finite(v.clone())
    }
}
