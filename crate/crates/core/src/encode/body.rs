//! SMT-LIB bodies of the interval operators and predicates, written over
//! the three components of each operand. Bounds at `ri.large_value` and its
//! negation stand for the infinities; every other bound lies within
//! `[-ri.max_value, ri.max_value]`.

use crate::ia::{FpaOp, Mode, Polarity, Rel};

pub(crate) const K: &str = "ri.large_value";
pub(crate) const NK: &str = "(- ri.large_value)";

/// Expressions for the lower bound, upper bound and NaN flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Comp {
    pub l: String,
    pub u: String,
    pub n: String,
}

impl Comp {
    pub fn new(l: impl Into<String>, u: impl Into<String>, n: impl Into<String>) -> Self {
        Comp {
            l: l.into(),
            u: u.into(),
            n: n.into(),
        }
    }

    pub fn symbols(prefix: &str) -> Self {
        Comp::new(
            format!("{prefix}l"),
            format!("{prefix}u"),
            format!("{prefix}n"),
        )
    }

    fn neg(&self) -> Comp {
        Comp::new(
            format!("(- {})", self.u),
            format!("(- {})", self.l),
            self.n.clone(),
        )
    }
}

fn or(items: &[String]) -> String {
    format!("(or {})", items.join(" "))
}

fn and(items: &[String]) -> String {
    format!("(and {})", items.join(" "))
}

fn ite(c: &str, t: &str, e: &str) -> String {
    format!("(ite {c} {t} {e})")
}

/// Minimum (or maximum) of the items through let-bound names `{tag}0..`
/// and running extrema `{tag}m1..`.
fn extremum(items: &[String], min: bool, tag: &str) -> String {
    let op = if min { "<=" } else { ">=" };
    let binds: Vec<String> = items
        .iter()
        .enumerate()
        .map(|(i, e)| format!("({tag}{i} {e})"))
        .collect();
    let mut acc = format!("{tag}0");
    let mut chain = Vec::new();
    for i in 1..items.len() {
        let next = format!("{tag}{i}");
        chain.push(format!(
            "(let (({tag}m{i} (ite ({op} {acc} {next}) {acc} {next}))) "
        ));
        acc = format!("{tag}m{i}");
    }
    format!(
        "(let ({}) {}{acc}{})",
        binds.join(" "),
        chain.concat(),
        ")".repeat(chain.len())
    )
}

/// Rounding calls; `prec` is the precision argument with a trailing space,
/// empty for single-precision scripts.
pub(crate) struct Rounding {
    pub prec: String,
}

impl Rounding {
    pub fn dn(&self, v: &str) -> String {
        format!("(ri.r_dn {}{v})", self.prec)
    }

    pub fn up(&self, v: &str) -> String {
        format!("(ri.r_up {}{v})", self.prec)
    }
}

struct Pieces {
    ninf: String,
    pinf: String,
    reals: String,
    neg: String,
    pos: String,
    has0: String,
    zero: String,
}

fn pieces(c: &Comp) -> Pieces {
    Pieces {
        ninf: format!("(<= {} {NK})", c.l),
        pinf: format!("(>= {} {K})", c.u),
        reals: format!("(and (< {} {K}) (> {} {NK}))", c.l, c.u),
        neg: format!("(< {} 0.0)", c.l),
        pos: format!("(> {} 0.0)", c.u),
        has0: format!("(and (<= {} 0.0) (>= {} 0.0))", c.l, c.u),
        zero: format!("(and (= {} 0.0) (= {} 0.0))", c.l, c.u),
    }
}

fn is_inf(b: &str) -> String {
    format!("(or (<= {b} {NK}) (>= {b} {K}))")
}

/// Joins the contributions of the piece pairs: `-oo`, `+oo`, the rounded
/// bounds of the finite part, and NaN. With no value at all the result is
/// the NaN surrogate.
fn hull(neg_c: &str, pos_c: &str, mid: Option<(&str, &str, &str)>, nan: &str) -> Comp {
    let (l, u, any) = match mid {
        Some((c, lo, hi)) => (
            ite(neg_c, NK, &ite(c, lo, &ite(pos_c, K, NK))),
            ite(pos_c, K, &ite(c, hi, &ite(neg_c, NK, K))),
            or(&[neg_c.into(), pos_c.into(), c.into()]),
        ),
        None => (
            ite(neg_c, NK, &ite(pos_c, K, NK)),
            ite(pos_c, K, &ite(neg_c, NK, K)),
            or(&[neg_c.into(), pos_c.into()]),
        ),
    };
    Comp::new(l, u, or(&[nan.into(), format!("(not {any})")]))
}

pub(crate) fn add(x: &Comp, y: &Comp, r: &Rounding) -> Comp {
    let (px, py) = (pieces(x), pieces(y));
    let nan = or(&[
        x.n.clone(),
        y.n.clone(),
        and(&[px.ninf.clone(), py.pinf.clone()]),
        and(&[px.pinf.clone(), py.ninf.clone()]),
    ]);
    let neg_c = or(&[
        and(&[px.ninf.clone(), or(&[py.ninf.clone(), py.reals.clone()])]),
        and(&[py.ninf.clone(), px.reals.clone()]),
    ]);
    let pos_c = or(&[
        and(&[px.pinf.clone(), or(&[py.pinf.clone(), py.reals.clone()])]),
        and(&[py.pinf.clone(), px.reals.clone()]),
    ]);
    let rr = and(&[px.reals, py.reals]);
    let lo = ite(
        &format!("(or (<= {} {NK}) (<= {} {NK}))", x.l, y.l),
        NK,
        &r.dn(&format!("(+ {} {})", x.l, y.l)),
    );
    let hi = ite(
        &format!("(or (>= {} {K}) (>= {} {K}))", x.u, y.u),
        K,
        &r.up(&format!("(+ {} {})", x.u, y.u)),
    );
    hull(&neg_c, &pos_c, Some((&rr, &lo, &hi)), &nan)
}

pub(crate) fn sub(x: &Comp, y: &Comp, r: &Rounding) -> Comp {
    add(x, &y.neg(), r)
}

pub(crate) fn neg(x: &Comp) -> Comp {
    x.neg()
}

pub(crate) fn abs(x: &Comp) -> Comp {
    let nonneg = format!("(>= {} 0.0)", x.l);
    let nonpos = format!("(<= {} 0.0)", x.u);
    let top = format!("(ite (>= (- {l}) {u}) (- {l}) {u})", l = x.l, u = x.u);
    Comp::new(
        ite(&nonneg, &x.l, &ite(&nonpos, &format!("(- {})", x.u), "0.0")),
        ite(&nonneg, &x.u, &ite(&nonpos, &format!("(- {})", x.l), &top)),
        x.n.clone(),
    )
}

/// Signed infinity for a product or quotient of nonzero operands.
fn sign_inf(p: &str, q: &str) -> String {
    ite(&format!("(= (> {p} 0.0) (> {q} 0.0))"), K, NK)
}

fn mul_corner(p: &str, q: &str, round: &dyn Fn(&str) -> String) -> String {
    let either_inf = or(&[is_inf(p), is_inf(q)]);
    let zero = format!("(or (= {p} 0.0) (= {q} 0.0))");
    let inf_case = ite(&zero, &round("0.0"), &sign_inf(p, q));
    ite(&either_inf, &inf_case, &round(&format!("(* {p} {q})")))
}

pub(crate) fn mul(x: &Comp, y: &Comp, r: &Rounding) -> Comp {
    let (px, py) = (pieces(x), pieces(y));
    let x_inf = or(&[px.ninf.clone(), px.pinf.clone()]);
    let y_inf = or(&[py.ninf.clone(), py.pinf.clone()]);
    let zero_branch = or(&[px.zero.clone(), py.zero.clone()]);
    let zero_nan = or(&[
        x.n.clone(),
        y.n.clone(),
        and(&[px.zero.clone(), y_inf.clone()]),
        and(&[py.zero.clone(), x_inf.clone()]),
    ]);
    let nan = or(&[
        x.n.clone(),
        y.n.clone(),
        and(&[px.reals.clone(), px.has0.clone(), y_inf.clone()]),
        and(&[py.reals.clone(), py.has0.clone(), x_inf.clone()]),
    ]);
    let neg_c = or(&[
        and(&[px.reals.clone(), py.ninf.clone(), px.pos.clone()]),
        and(&[px.reals.clone(), py.pinf.clone(), px.neg.clone()]),
        and(&[py.reals.clone(), px.ninf.clone(), py.pos.clone()]),
        and(&[py.reals.clone(), px.pinf.clone(), py.neg.clone()]),
        and(&[px.ninf.clone(), py.pinf.clone()]),
        and(&[px.pinf.clone(), py.ninf.clone()]),
    ]);
    let pos_c = or(&[
        and(&[px.reals.clone(), py.ninf.clone(), px.neg.clone()]),
        and(&[px.reals.clone(), py.pinf.clone(), px.pos.clone()]),
        and(&[py.reals.clone(), px.ninf.clone(), py.neg.clone()]),
        and(&[py.reals.clone(), px.pinf.clone(), py.pos.clone()]),
        and(&[px.ninf.clone(), py.ninf.clone()]),
        and(&[px.pinf.clone(), py.pinf.clone()]),
    ]);
    let rr = and(&[px.reals, py.reals]);
    let pairs = [(&x.l, &y.l), (&x.l, &y.u), (&x.u, &y.l), (&x.u, &y.u)];
    let dn = |v: &str| r.dn(v);
    let up = |v: &str| r.up(v);
    let lo = extremum(&pairs.map(|(p, q)| mul_corner(p, q, &dn)), true, "c");
    let hi = extremum(&pairs.map(|(p, q)| mul_corner(p, q, &up)), false, "c");
    let generic = hull(&neg_c, &pos_c, Some((&rr, &lo, &hi)), &nan);
    Comp::new(
        ite(&zero_branch, "0.0", &generic.l),
        ite(&zero_branch, "0.0", &generic.u),
        ite(&zero_branch, &zero_nan, &generic.n),
    )
}

/// Product with a constant `[a, b]` that excludes zero. Only the corners
/// on the extreme bound of `y` can be optimal, and the sign of that bound
/// picks the factor.
pub(crate) fn mul_const(a: &str, b: &str, positive: bool, y: &Comp, r: &Rounding) -> Comp {
    let py = pieces(y);
    let dn = |v: &str| r.dn(v);
    let up = |v: &str| r.up(v);
    let pick = |yb: &str, test: &str, hit: &str, miss: &str, round: &dyn Fn(&str) -> String| {
        let c = |f: &str| mul_corner(f, yb, round);
        if a == b {
            c(a)
        } else {
            ite(&format!("({test} {yb} 0.0)"), &c(hit), &c(miss))
        }
    };
    let (lo, hi, neg_c, pos_c) = if positive {
        (
            pick(&y.l, ">=", a, b, &dn),
            pick(&y.u, ">=", b, a, &up),
            py.ninf,
            py.pinf,
        )
    } else {
        (
            pick(&y.u, ">=", a, b, &dn),
            pick(&y.l, "<=", a, b, &up),
            py.pinf,
            py.ninf,
        )
    };
    let generic = hull(&neg_c, &pos_c, Some((&py.reals, &lo, &hi)), &y.n);
    Comp::new(
        ite(&py.zero, "0.0", &generic.l),
        ite(&py.zero, "0.0", &generic.u),
        ite(&py.zero, &y.n, &generic.n),
    )
}

fn div_corner(a: &str, d: &str, round: &dyn Fn(&str) -> String) -> String {
    let (a_inf, d_inf) = (is_inf(a), is_inf(d));
    ite(
        &and(&[a_inf.clone(), d_inf.clone()]),
        &round("0.0"),
        &ite(
            &a_inf,
            &sign_inf(a, d),
            &ite(&d_inf, &round("0.0"), &round(&format!("(/ {a} {d})"))),
        ),
    )
}

pub(crate) fn div(x: &Comp, y: &Comp, r: &Rounding) -> Comp {
    let (px, py) = (pieces(x), pieces(y));
    let x_inf = or(&[px.ninf.clone(), px.pinf.clone()]);
    let y_inf = or(&[py.ninf.clone(), py.pinf.clone()]);
    let rr_base = and(&[px.reals.clone(), py.reals.clone()]);
    let x_nonzero = format!("(not {})", px.zero);
    let y_nonzero = format!("(not {})", py.zero);
    let nan = or(&[
        x.n.clone(),
        y.n.clone(),
        and(&[rr_base.clone(), py.has0.clone(), px.has0.clone()]),
        and(&[x_inf.clone(), y_inf.clone()]),
    ]);
    let both = and(&[rr_base.clone(), py.has0.clone(), x_nonzero.clone()]);
    let neg_c = or(&[
        both.clone(),
        and(&[
            px.ninf.clone(),
            py.reals.clone(),
            or(&[py.pos.clone(), py.has0.clone()]),
        ]),
        and(&[
            px.pinf.clone(),
            py.reals.clone(),
            or(&[py.neg.clone(), py.has0.clone()]),
        ]),
    ]);
    let pos_c = or(&[
        both,
        and(&[
            px.ninf.clone(),
            py.reals.clone(),
            or(&[py.neg.clone(), py.has0.clone()]),
        ]),
        and(&[
            px.pinf.clone(),
            py.reals.clone(),
            or(&[py.pos.clone(), py.has0.clone()]),
        ]),
    ]);
    let zero_c = or(&[
        and(&[
            rr_base.clone(),
            py.has0.clone(),
            format!("(not {x_nonzero})"),
            y_nonzero,
        ]),
        and(&[px.reals.clone(), y_inf]),
    ]);
    let rr = and(&[rr_base, format!("(not {})", py.has0)]);
    let pairs = [(&x.l, &y.u), (&x.l, &y.l), (&x.u, &y.u), (&x.u, &y.l)];
    let dn = |v: &str| r.dn(v);
    let up = |v: &str| r.up(v);
    let rr_lo = extremum(&pairs.map(|(a, d)| div_corner(a, d, &dn)), true, "c");
    let rr_hi = extremum(&pairs.map(|(a, d)| div_corner(a, d, &up)), false, "c");
    let mid_c = or(&[zero_c.clone(), rr.clone()]);
    let mid_lo = extremum(
        &[ite(&zero_c, &r.dn("0.0"), K), ite(&rr, &rr_lo, K)],
        true,
        "z",
    );
    let mid_hi = extremum(
        &[ite(&zero_c, &r.up("0.0"), NK), ite(&rr, &rr_hi, NK)],
        false,
        "z",
    );
    hull(&neg_c, &pos_c, Some((&mid_c, &mid_lo, &mid_hi)), &nan)
}

pub(crate) fn apply(op: FpaOp, x: &Comp, y: &Comp, r: &Rounding) -> Comp {
    match op {
        FpaOp::Neg => neg(x),
        FpaOp::Abs => abs(x),
        FpaOp::Add => add(x, y, r),
        FpaOp::Sub => sub(x, y, r),
        FpaOp::Mul => mul(x, y, r),
        FpaOp::Div => div(x, y, r),
    }
}

fn sub_bound(a: &str, b: &str) -> String {
    ite(
        &format!("(or (and (>= {a} {K}) (>= {b} {K})) (and (<= {a} {NK}) (<= {b} {NK})))"),
        "0.0",
        &ite(
            &format!("(or (<= {a} {NK}) (>= {b} {K}))"),
            NK,
            &ite(
                &format!("(or (>= {a} {K}) (<= {b} {NK}))"),
                K,
                &format!("(- {a} {b})"),
            ),
        ),
    )
}

/// Difference without widening.
pub(crate) fn sub_exact(f: &Comp, g: &Comp) -> Comp {
    Comp::new(
        sub_bound(&f.l, &g.u),
        sub_bound(&f.u, &g.l),
        format!("(or {} {})", f.n, g.n),
    )
}

fn holds(strict: bool, bound: &str) -> String {
    format!("({} {bound} 0.0)", if strict { ">" } else { ">=" })
}

/// Order predicate on the difference `d = f - g`.
fn ordered(strict: bool, polarity: Polarity, mode: Mode, d: &Comp) -> String {
    match (polarity, mode) {
        (Polarity::Positive, Mode::Weak) => holds(strict, &d.u),
        (Polarity::Positive, Mode::Strong) => {
            format!("(and (not {}) {})", d.n, holds(strict, &d.l))
        }
        (Polarity::Negative, Mode::Weak) => format!("(or {} (not {}))", d.n, holds(strict, &d.l)),
        (Polarity::Negative, Mode::Strong) => format!("(not {})", holds(strict, &d.u)),
    }
}

fn fp_eq(polarity: Polarity, mode: Mode, f: &Comp, g: &Comp, d: &Comp, e: &Comp) -> String {
    match (polarity, mode) {
        (Polarity::Positive, Mode::Weak) => and(&[
            ordered(false, polarity, mode, d),
            ordered(false, polarity, mode, e),
        ]),
        (Polarity::Positive, Mode::Strong) => format!(
            "(and (not {}) (not {}) (= {} {}) (= {} {}) (= {} {}))",
            f.n, g.n, f.l, f.u, g.l, g.u, f.l, g.l
        ),
        (Polarity::Negative, _) => or(&[
            ordered(false, polarity, mode, d),
            ordered(false, polarity, mode, e),
        ]),
    }
}

/// Body of a comparison predicate. `d` is `f - g` and `e` is `g - f`, both
/// without widening.
pub(crate) fn predicate(
    rel: Rel,
    polarity: Polarity,
    mode: Mode,
    guard: bool,
    f: &Comp,
    g: &Comp,
    d: &Comp,
    e: &Comp,
) -> String {
    match rel {
        Rel::Ge => ordered(false, polarity, mode, d),
        Rel::Gt => ordered(true, polarity, mode, d),
        Rel::FpEq => fp_eq(polarity, mode, f, g, d, e),
        Rel::SeqEq => {
            let eq = fp_eq(polarity, mode, f, g, d, e);
            match (polarity, mode) {
                (Polarity::Positive, Mode::Weak) => or(&[format!("(and {} {})", f.n, g.n), eq]),
                (Polarity::Positive, Mode::Strong) if guard => {
                    format!("(and {eq} (not (= {} 0.0)))", f.l)
                }
                (Polarity::Positive, Mode::Strong) => eq,
                (Polarity::Negative, Mode::Weak) if guard => or(&[
                    eq,
                    format!(
                        "(and (<= {} 0.0) (>= {} 0.0) (<= {} 0.0) (>= {} 0.0))",
                        f.l, f.u, g.l, g.u
                    ),
                ]),
                (Polarity::Negative, Mode::Weak) => eq,
                (Polarity::Negative, Mode::Strong) => {
                    format!("(and (or (not {}) (not {})) {eq})", f.n, g.n)
                }
            }
        }
    }
}

/// Name of the predicate function for a literal.
pub(crate) fn predicate_name(rel: Rel, polarity: Polarity, guard: bool) -> String {
    let base = match (rel, polarity) {
        (Rel::Ge, Polarity::Positive) => "ri.geq",
        (Rel::Ge, Polarity::Negative) => "ri.lt",
        (Rel::Gt, Polarity::Positive) => "ri.gt",
        (Rel::Gt, Polarity::Negative) => "ri.leq",
        (Rel::FpEq, Polarity::Positive) => "ri.fp_eq",
        (Rel::FpEq, Polarity::Negative) => "ri.fp_neq",
        (Rel::SeqEq, Polarity::Positive) => "ri.eq",
        (Rel::SeqEq, Polarity::Negative) => "ri.neq",
    };
    if rel == Rel::SeqEq && !guard {
        format!("{base}_same")
    } else {
        base.to_string()
    }
}
