use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Zero};

use super::ast::{FpaFormula, FpaTerm, RmSlot, Script};
use super::sexpr::{read_all, SExpr, SExprKind};
use crate::format::FpFormat;
use crate::ia::{FpaOp, Rel};
use crate::oracle::{FpValue, RoundingMode};
use crate::scalar::parse_rational;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sort {
    Fp(FpFormat),
    RoundingMode,
    Bool,
}

#[derive(Clone, Debug)]
enum Value {
    Term(FpaTerm),
    Formula(FpaFormula),
    Mode(RmSlot),
}

impl Value {
    fn sort(&self) -> Sort {
        match self {
            Value::Term(t) => Sort::Fp(t.format()),
            Value::Formula(_) => Sort::Bool,
            Value::Mode(_) => Sort::RoundingMode,
        }
    }
}

#[derive(Clone, Debug)]
struct Macro {
    params: Vec<(String, Sort)>,
    sort: Sort,
    body: SExpr,
}

const UNSUPPORTED: &[&str] = &[
    "fp.fma",
    "fp.sqrt",
    "fp.rem",
    "fp.roundToIntegral",
    "fp.min",
    "fp.max",
    "fp.isNormal",
    "fp.isSubnormal",
    "fp.isZero",
    "fp.isInfinite",
    "fp.isNaN",
    "fp.isNegative",
    "fp.isPositive",
    "fp.to_ubv",
    "fp.to_sbv",
    "fp.to_real",
    "to_fp",
    "to_fp_unsigned",
    "ite",
    "forall",
    "exists",
    "push",
    "pop",
];

fn unsupported(e: &SExpr, construct: &str) -> Error {
    Error::Unsupported {
        line: e.line,
        col: e.col,
        construct: construct.to_string(),
    }
}

fn sort_error(e: &SExpr, message: impl Into<String>) -> Error {
    Error::Sort {
        line: e.line,
        col: e.col,
        message: message.into(),
    }
}

fn numeral(e: &SExpr) -> Result<u32, Error> {
    e.atom()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| e.syntax_error(format!("expected a numeral, found `{e}`")))
}

fn format_of(e: &SExpr, eb: &SExpr, sb: &SExpr) -> Result<FpFormat, Error> {
    FpFormat::new(numeral(eb)?, numeral(sb)?).map_err(|err| sort_error(e, err.to_string()))
}

/// Parses a bit-vector literal `#b...` or `#x...` into (width, value).
fn bitvec(e: &SExpr) -> Result<(u32, BigInt), Error> {
    let text = e.atom().unwrap_or("");
    let (radix, digits, width) = if let Some(d) = text.strip_prefix("#b") {
        (2, d, d.len() as u32)
    } else if let Some(d) = text.strip_prefix("#x") {
        (16, d, 4 * d.len() as u32)
    } else {
        return Err(e.syntax_error(format!("expected a bit-vector literal, found `{e}`")));
    };
    let value = BigInt::from_str_radix(digits, radix)
        .map_err(|_| e.syntax_error(format!("malformed bit-vector literal `{text}`")))?;
    Ok((width, value))
}

/// A rational constant: numeral, decimal, `(/ a b)` or `(- a)`.
pub(crate) fn rational_literal(e: &SExpr) -> Option<BigRational> {
    match &e.kind {
        SExprKind::Atom(s) if s.starts_with(|c: char| c.is_ascii_digit()) => parse_rational(s),
        SExprKind::List(items) => match items.as_slice() {
            [op, a] if op.atom() == Some("-") => rational_literal(a).map(|v| -v),
            [op, a, b] if op.atom() == Some("/") => {
                let (a, b) = (rational_literal(a)?, rational_literal(b)?);
                (!b.is_zero()).then(|| a / b)
            }
            _ => None,
        },
        _ => None,
    }
}

struct Parser {
    script: Script,
    globals: HashMap<String, Value>,
    macros: HashMap<String, Macro>,
}

type Env = HashMap<String, Value>;

impl Parser {
    fn sort(&self, e: &SExpr) -> Result<Sort, Error> {
        if let Some(name) = e.atom() {
            return Ok(match name {
                "Float16" => Sort::Fp(FpFormat::FLOAT16),
                "Float32" => Sort::Fp(FpFormat::FLOAT32),
                "Float64" => Sort::Fp(FpFormat::FLOAT64),
                "Float128" => Sort::Fp(FpFormat::FLOAT128),
                "RoundingMode" => Sort::RoundingMode,
                "Bool" => Sort::Bool,
                other => return Err(unsupported(e, &format!("sort {other}"))),
            });
        }
        match e.list() {
            Some([u, name, eb, sb])
                if u.atom() == Some("_") && name.atom() == Some("FloatingPoint") =>
            {
                Ok(Sort::Fp(format_of(e, eb, sb)?))
            }
            _ => Err(unsupported(e, &format!("sort {e}"))),
        }
    }

    fn declare(&mut self, name_expr: &SExpr, sort: Sort) -> Result<(), Error> {
        let name = name_expr
            .atom()
            .ok_or_else(|| name_expr.syntax_error("expected a symbol"))?;
        if self.globals.contains_key(name) || self.macros.contains_key(name) {
            return Err(sort_error(
                name_expr,
                format!("`{name}` is already declared"),
            ));
        }
        let value = match sort {
            Sort::Fp(fmt) => {
                self.script.vars.push((name.to_string(), fmt));
                Value::Term(FpaTerm::Var(name.to_string(), fmt))
            }
            Sort::RoundingMode => {
                self.script.mode_vars.push(name.to_string());
                Value::Mode(RmSlot::Var(name.to_string()))
            }
            Sort::Bool => return Err(unsupported(name_expr, "Boolean variables")),
        };
        self.globals.insert(name.to_string(), value);
        Ok(())
    }

    fn command(&mut self, e: &SExpr) -> Result<bool, Error> {
        let items = e
            .list()
            .ok_or_else(|| e.syntax_error("expected a command"))?;
        let head = items
            .first()
            .and_then(SExpr::atom)
            .ok_or_else(|| e.syntax_error("expected a command"))?;
        match (head, &items[1..]) {
            ("set-logic", [logic]) => {
                let name = logic
                    .atom()
                    .ok_or_else(|| logic.syntax_error("expected a logic name"))?;
                if name != "ALL" && !name.contains("FP") {
                    return Err(unsupported(logic, &format!("logic {name}")));
                }
                self.script.logic = Some(name.to_string());
            }
            ("set-info" | "set-option" | "get-info" | "get-model" | "get-value" | "echo", _) => {}
            ("declare-const", [name, sort]) => {
                let sort = self.sort(sort)?;
                self.declare(name, sort)?;
            }
            ("declare-fun", [name, params, sort]) => {
                if params.list().is_none_or(|p| !p.is_empty()) {
                    return Err(unsupported(e, "declare-fun with arguments"));
                }
                let sort = self.sort(sort)?;
                self.declare(name, sort)?;
            }
            ("define-fun", [name, params, sort, body]) => {
                let name_str = name
                    .atom()
                    .ok_or_else(|| name.syntax_error("expected a symbol"))?;
                let mut ps = Vec::new();
                for p in params
                    .list()
                    .ok_or_else(|| params.syntax_error("expected a parameter list"))?
                {
                    match p.list() {
                        Some([pn, ps_]) if pn.atom().is_some() => {
                            ps.push((pn.atom().unwrap().to_string(), self.sort(ps_)?));
                        }
                        _ => return Err(p.syntax_error("expected (name sort)")),
                    }
                }
                let sort = self.sort(sort)?;
                if self.globals.contains_key(name_str) || self.macros.contains_key(name_str) {
                    return Err(sort_error(
                        name,
                        format!("`{name_str}` is already declared"),
                    ));
                }
                let m = Macro {
                    params: ps,
                    sort,
                    body: body.clone(),
                };
                // Elaborate once to report errors at the definition.
                if m.params.is_empty() {
                    let v = self.elab(body, &Env::new())?;
                    if v.sort() != sort {
                        return Err(sort_error(body, "body does not match the declared sort"));
                    }
                    self.globals.insert(name_str.to_string(), v);
                } else {
                    self.macros.insert(name_str.to_string(), m);
                }
            }
            ("assert", [body]) => {
                let f = self.formula(body, &Env::new())?;
                self.script.assertions.push(f);
            }
            ("check-sat", []) => {}
            ("exit", []) => return Ok(false),
            (other, _) if UNSUPPORTED.contains(&other) => return Err(unsupported(e, other)),
            (other, _) => return Err(unsupported(e, &format!("command {other}"))),
        }
        Ok(true)
    }

    fn formula(&self, e: &SExpr, env: &Env) -> Result<FpaFormula, Error> {
        match self.elab(e, env)? {
            Value::Formula(f) => Ok(f),
            _ => Err(sort_error(e, "expected a Boolean term")),
        }
    }

    fn term(&self, e: &SExpr, env: &Env) -> Result<FpaTerm, Error> {
        match self.elab(e, env)? {
            Value::Term(t) => Ok(t),
            _ => Err(sort_error(e, "expected a floating-point term")),
        }
    }

    fn mode(&self, e: &SExpr, env: &Env) -> Result<RmSlot, Error> {
        match self.elab(e, env)? {
            Value::Mode(m) => Ok(m),
            _ => Err(sort_error(e, "expected a rounding mode")),
        }
    }

    fn symbol(&self, e: &SExpr, name: &str, env: &Env) -> Result<Value, Error> {
        if let Some(v) = env.get(name).or_else(|| self.globals.get(name)) {
            return Ok(v.clone());
        }
        if let Ok(m) = name.parse::<RoundingMode>() {
            return Ok(Value::Mode(RmSlot::Concrete(m)));
        }
        match name {
            "true" => Ok(Value::Formula(FpaFormula::truth())),
            "false" => Ok(Value::Formula(FpaFormula::falsity())),
            _ if UNSUPPORTED.contains(&name) => Err(unsupported(e, name)),
            _ => Err(sort_error(e, format!("undeclared symbol `{name}`"))),
        }
    }

    fn indexed_constant(&self, e: &SExpr, items: &[SExpr]) -> Result<Value, Error> {
        let [_, name, eb, sb] = items else {
            let name = items.get(1).map(|n| n.to_string()).unwrap_or_default();
            return Err(unsupported(e, &name));
        };
        let fmt = format_of(e, eb, sb)?;
        let v = match name.atom() {
            Some("+oo") => FpValue::PosInf,
            Some("-oo") => FpValue::NegInf,
            Some("NaN") => FpValue::NaN,
            Some("+zero") => FpValue::PosZero,
            Some("-zero") => FpValue::NegZero,
            _ => return Err(unsupported(e, &name.to_string())),
        };
        Ok(Value::Term(FpaTerm::Literal(v, fmt)))
    }

    fn same_format(&self, e: &SExpr, terms: &[FpaTerm]) -> Result<(), Error> {
        if let Some(first) = terms.first() {
            for t in &terms[1..] {
                if t.format() != first.format() {
                    return Err(sort_error(
                        e,
                        format!(
                            "operands of sorts {} and {} are mixed",
                            first.format(),
                            t.format()
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    fn elab(&self, e: &SExpr, env: &Env) -> Result<Value, Error> {
        let items = match &e.kind {
            SExprKind::Atom(name) => return self.symbol(e, name, env),
            SExprKind::Str(_) => return Err(unsupported(e, "string literal")),
            SExprKind::List(items) => items,
        };
        let Some(head) = items.first() else {
            return Err(e.syntax_error("empty application"));
        };
        let args = &items[1..];
        if let Some(hl) = head.list() {
            if hl.first().and_then(SExpr::atom) != Some("_") {
                return Err(e.syntax_error("malformed application"));
            }
            return match (hl.get(1).and_then(SExpr::atom), &hl[2..], args) {
                (Some("fp.const"), [eb, sb], [value, mode]) => {
                    let format = format_of(head, eb, sb)?;
                    let value = rational_literal(value).ok_or_else(|| {
                        value.syntax_error(format!("expected a decimal constant, found `{value}`"))
                    })?;
                    match self.mode(mode, env)? {
                        RmSlot::Concrete(mode) => Ok(Value::Term(FpaTerm::Const {
                            value,
                            mode,
                            format,
                        })),
                        _ => Err(unsupported(mode, "fp.const with a symbolic rounding mode")),
                    }
                }
                (Some(name), ..) => Err(unsupported(head, name)),
                _ => Err(e.syntax_error("malformed indexed identifier")),
            };
        }
        let head_name = head.atom().unwrap_or_default();
        match head_name {
            "_" => self.indexed_constant(e, items),
            "!" => match args.first() {
                Some(body) => self.elab(body, env),
                None => Err(e.syntax_error("empty annotation")),
            },
            "let" => {
                let [bindings, body] = args else {
                    return Err(e.syntax_error("malformed let"));
                };
                let mut inner = env.clone();
                for b in bindings
                    .list()
                    .ok_or_else(|| bindings.syntax_error("expected bindings"))?
                {
                    match b.list() {
                        Some([name, value]) if name.atom().is_some() => {
                            inner.insert(name.atom().unwrap().to_string(), self.elab(value, env)?);
                        }
                        _ => return Err(b.syntax_error("expected (name term)")),
                    }
                }
                self.elab(body, &inner)
            }
            "fp" => {
                let [s, x, t] = args else {
                    return Err(e.syntax_error("fp takes three bit-vectors"));
                };
                let (sw, sv) = bitvec(s)?;
                let (ew, ev) = bitvec(x)?;
                let (tw, tv) = bitvec(t)?;
                if sw != 1 {
                    return Err(sort_error(s, "sign field must be one bit"));
                }
                let fmt =
                    FpFormat::new(ew, tw + 1).map_err(|err| sort_error(e, err.to_string()))?;
                let ev: u64 = ev
                    .try_into()
                    .map_err(|_| sort_error(x, "exponent field too wide"))?;
                let tv: u128 = tv
                    .try_into()
                    .map_err(|_| unsupported(t, "significands wider than 127 bits"))?;
                let v = FpValue::from_fields(fmt, !sv.is_zero(), ev, tv)
                    .map_err(|err| sort_error(e, err.to_string()))?;
                Ok(Value::Term(FpaTerm::Literal(v, fmt)))
            }
            "fp.neg" | "fp.abs" => {
                let [a] = args else {
                    return Err(e.syntax_error(format!("{head_name} takes one argument")));
                };
                let op = if head_name == "fp.neg" {
                    FpaOp::Neg
                } else {
                    FpaOp::Abs
                };
                Ok(Value::Term(FpaTerm::unary(op, self.term(a, env)?)))
            }
            "fp.add" | "fp.sub" | "fp.mul" | "fp.div" => {
                let [rm, a, b] = args else {
                    return Err(e.syntax_error(format!(
                        "{head_name} takes a rounding mode and two arguments"
                    )));
                };
                let op = match head_name {
                    "fp.add" => FpaOp::Add,
                    "fp.sub" => FpaOp::Sub,
                    "fp.mul" => FpaOp::Mul,
                    _ => FpaOp::Div,
                };
                let rm = self.mode(rm, env)?;
                let (a, b) = (self.term(a, env)?, self.term(b, env)?);
                self.same_format(e, &[a.clone(), b.clone()])?;
                Ok(Value::Term(FpaTerm::binary(op, rm, a, b)))
            }
            "fp.leq" | "fp.lt" | "fp.geq" | "fp.gt" | "fp.eq" => {
                if args.len() < 2 {
                    return Err(e.syntax_error(format!("{head_name} takes at least two arguments")));
                }
                let terms = args
                    .iter()
                    .map(|a| self.term(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                self.same_format(e, &terms)?;
                let atoms = terms
                    .windows(2)
                    .map(|w| {
                        let (a, b) = (w[0].clone(), w[1].clone());
                        match head_name {
                            "fp.leq" => FpaFormula::atom(Rel::Ge, b, a),
                            "fp.lt" => FpaFormula::atom(Rel::Gt, b, a),
                            "fp.geq" => FpaFormula::atom(Rel::Ge, a, b),
                            "fp.gt" => FpaFormula::atom(Rel::Gt, a, b),
                            _ => FpaFormula::atom(Rel::FpEq, a, b),
                        }
                    })
                    .collect();
                Ok(Value::Formula(conj(atoms)))
            }
            "=" | "distinct" => {
                if args.len() < 2 {
                    return Err(e.syntax_error(format!("{head_name} takes at least two arguments")));
                }
                let vals = args
                    .iter()
                    .map(|a| self.elab(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                let sort = vals[0].sort();
                if vals.iter().any(|v| v.sort() != sort) {
                    return Err(sort_error(
                        e,
                        format!("arguments of {head_name} have different sorts"),
                    ));
                }
                let mut pairs = Vec::new();
                if head_name == "=" {
                    for w in vals.windows(2) {
                        pairs.push((w[0].clone(), w[1].clone()));
                    }
                } else {
                    for i in 0..vals.len() {
                        for j in i + 1..vals.len() {
                            pairs.push((vals[i].clone(), vals[j].clone()));
                        }
                    }
                }
                let mut parts = Vec::new();
                for (a, b) in pairs {
                    let eq = match (a, b) {
                        (Value::Term(a), Value::Term(b)) => FpaFormula::atom(Rel::SeqEq, a, b),
                        (Value::Formula(a), Value::Formula(b)) => iff(a, b),
                        _ => return Err(unsupported(e, "equality over RoundingMode")),
                    };
                    parts.push(if head_name == "=" {
                        eq
                    } else {
                        FpaFormula::not(eq)
                    });
                }
                Ok(Value::Formula(conj(parts)))
            }
            "not" => {
                let [a] = args else {
                    return Err(e.syntax_error("not takes one argument"));
                };
                Ok(Value::Formula(FpaFormula::not(self.formula(a, env)?)))
            }
            "and" | "or" => {
                let parts = args
                    .iter()
                    .map(|a| self.formula(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Value::Formula(if head_name == "and" {
                    FpaFormula::And(parts)
                } else {
                    FpaFormula::Or(parts)
                }))
            }
            "=>" => {
                let Some((last, init)) = args.split_last().filter(|(_, i)| !i.is_empty()) else {
                    return Err(e.syntax_error("=> takes at least two arguments"));
                };
                let mut parts = init
                    .iter()
                    .map(|a| self.formula(a, env).map(FpaFormula::not))
                    .collect::<Result<Vec<_>, _>>()?;
                parts.push(self.formula(last, env)?);
                Ok(Value::Formula(FpaFormula::Or(parts)))
            }
            "xor" => {
                let parts = args
                    .iter()
                    .map(|a| self.formula(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut iter = parts.into_iter();
                let first = iter
                    .next()
                    .ok_or_else(|| e.syntax_error("xor takes arguments"))?;
                Ok(Value::Formula(
                    iter.fold(first, |acc, f| FpaFormula::not(iff(acc, f))),
                ))
            }
            name => {
                if let Some(m) = self.macros.get(name) {
                    if m.params.len() != args.len() {
                        return Err(sort_error(
                            e,
                            format!("`{name}` expects {} arguments", m.params.len()),
                        ));
                    }
                    let mut inner = Env::new();
                    for ((pname, psort), a) in m.params.iter().zip(args) {
                        let v = self.elab(a, env)?;
                        if v.sort() != *psort {
                            return Err(sort_error(
                                a,
                                format!("argument for `{pname}` has the wrong sort"),
                            ));
                        }
                        inner.insert(pname.clone(), v);
                    }
                    let v = self.elab(&m.body, &inner)?;
                    if v.sort() != m.sort {
                        return Err(sort_error(
                            &m.body,
                            format!("body of `{name}` does not match its sort"),
                        ));
                    }
                    return Ok(v);
                }
                Err(unsupported(head, name))
            }
        }
    }
}

fn conj(mut parts: Vec<FpaFormula>) -> FpaFormula {
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        FpaFormula::And(parts)
    }
}

fn iff(a: FpaFormula, b: FpaFormula) -> FpaFormula {
    FpaFormula::Or(vec![
        FpaFormula::And(vec![a.clone(), b.clone()]),
        FpaFormula::And(vec![FpaFormula::not(a), FpaFormula::not(b)]),
    ])
}

/// Parses an SMT-LIB script in the supported floating-point fragment.
pub fn parse_script(text: &str) -> Result<Script, Error> {
    let mut p = Parser {
        script: Script::default(),
        globals: HashMap::new(),
        macros: HashMap::new(),
    };
    for e in read_all(text)? {
        if !p.command(&e)? {
            break;
        }
    }
    Ok(p.script)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::big;

    fn parse_err(text: &str) -> Error {
        parse_script(text).unwrap_err()
    }

    #[test]
    fn to_fp_is_rejected() {
        let e = parse_err("(declare-const x Float64)(assert (fp.gt x ((_ to_fp 11 53) RNE 0.0)))");
        match e {
            Error::Unsupported { construct, .. } => assert_eq!(construct, "to_fp"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lt_swaps() {
        let s =
            parse_script("(declare-const a Float32)(declare-const b Float32)(assert (fp.lt a b))")
                .unwrap();
        let f = FpFormat::FLOAT32;
        assert_eq!(
            s.assertions,
            vec![FpaFormula::atom(
                Rel::Gt,
                FpaTerm::var("b", f),
                FpaTerm::var("a", f)
            )]
        );
    }

    #[test]
    fn rounded_constant_product() {
        let text = "(declare-const x Float64)
            (assert (fp.gt (fp.mul RNE ((_ fp.const 11 53) 0.1 RNE) x) (fp #b0 #b01111111111 #x0000000000000)))";
        let s = parse_script(text).unwrap();
        let f = FpFormat::FLOAT64;
        let FpaFormula::Atom(Rel::Gt, lhs, rhs) = &s.assertions[0] else {
            panic!()
        };
        let FpaTerm::Binary(FpaOp::Mul, RmSlot::Concrete(RoundingMode::RNE), c, x) = lhs else {
            panic!()
        };
        assert_eq!(**x, FpaTerm::var("x", f));
        assert_eq!(
            c.constant_value(),
            Some(crate::oracle::fp_round(
                &parse_rational("0.1").unwrap(),
                RoundingMode::RNE,
                f
            ))
        );
        assert_eq!(rhs.constant_value().unwrap().to_rational(f), Some(big(1)));
    }

    #[test]
    fn mixed_sorts_rejected() {
        let e = parse_err(
            "(declare-const a Float32)(declare-const b Float64)(assert (fp.gt (fp.add RNE a b) a))",
        );
        assert!(matches!(e, Error::Sort { line: 1, .. }), "{e:?}");
    }

    #[test]
    fn syntax_error_position() {
        let e = parse_err("(declare-const x Float32)\n(assert (fp.gt x x)");
        assert!(
            matches!(
                e,
                Error::Syntax {
                    line: 2,
                    col: 1,
                    ..
                }
            ),
            "{e:?}"
        );
    }

    #[test]
    fn macros_and_lets() {
        let text = "(declare-const x (_ FloatingPoint 4 4))(declare-const r RoundingMode)
            (define-fun twice ((a (_ FloatingPoint 4 4))) (_ FloatingPoint 4 4) (fp.add r a a))
            (define-fun y () (_ FloatingPoint 4 4) (twice x))
            (assert (let ((z (fp.neg y))) (=> (fp.isNaN z) false)))";
        assert!(matches!(parse_err(text), Error::Unsupported { .. }));
        let text = text.replace("(fp.isNaN z)", "(= z z)");
        let s = parse_script(&text).unwrap();
        assert_eq!(s.mode_vars, vec!["r".to_string()]);
        let f = FpFormat::new(4, 4).unwrap();
        let x = FpaTerm::var("x", f);
        let y = FpaTerm::binary(FpaOp::Add, RmSlot::Var("r".into()), x.clone(), x);
        let z = FpaTerm::unary(FpaOp::Neg, y);
        let expected = FpaFormula::Or(vec![
            FpaFormula::not(FpaFormula::atom(Rel::SeqEq, z.clone(), z)),
            FpaFormula::falsity(),
        ]);
        assert_eq!(s.assertions, vec![expected]);
    }

    #[test]
    fn special_literals() {
        let s = parse_script(
            "(declare-const x Float32)(assert (or (= x (_ NaN 8 24)) (= x (_ -zero 8 24)) (fp.eq x (_ +oo 8 24))))",
        )
        .unwrap();
        let mut lits = Vec::new();
        s.assertions[0].visit_terms(&mut |t| lits.extend(t.constant_value()));
        assert_eq!(lits, vec![FpValue::NaN, FpValue::NegZero, FpValue::PosInf]);
    }
}
