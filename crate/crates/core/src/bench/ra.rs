use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use super::constant;
use crate::format::FpFormat;
use crate::smt::sexpr::{read_all, SExpr, SExprKind};
use crate::smt::{print_sort, print_term, quote, rational_literal};
use crate::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RaToFpaOptions {
    /// Assert `(fp.eq v v)` for every declared variable, which excludes NaN.
    pub assert_not_nan: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Term,
    Bool,
}

struct Translator {
    fmt: FpFormat,
    vars: Vec<String>,
    bools: Vec<String>,
    modes: Vec<String>,
    taken: BTreeSet<String>,
    macros: HashMap<String, (Kind, String)>,
}

fn unsupported(e: &SExpr, construct: impl Into<String>) -> Error {
    Error::Unsupported {
        line: e.line,
        col: e.col,
        construct: construct.into(),
    }
}

impl Translator {
    fn fresh_mode(&mut self) -> String {
        let mut n = self.modes.len();
        loop {
            let name = format!("rm.{n}");
            if !self.taken.contains(&name) {
                self.taken.insert(name.clone());
                self.modes.push(name.clone());
                return quote(&name);
            }
            n += 1;
        }
    }

    fn sort(&self, e: &SExpr) -> Result<Kind, Error> {
        match e.atom() {
            Some("Real") => Ok(Kind::Term),
            Some("Bool") => Ok(Kind::Bool),
            _ => Err(unsupported(e, format!("sort `{e}`"))),
        }
    }

    fn declare(&mut self, name: &SExpr, sort: &SExpr) -> Result<(), Error> {
        let name = name
            .atom()
            .ok_or_else(|| name.syntax_error("expected a symbol"))?
            .to_string();
        match self.sort(sort)? {
            Kind::Term => self.vars.push(name),
            Kind::Bool => self.bools.push(name),
        }
        Ok(())
    }

    fn expect(
        &mut self,
        e: &SExpr,
        kind: Kind,
        env: &HashMap<String, (Kind, String)>,
    ) -> Result<String, Error> {
        let (k, text) = self.expr(e, env)?;
        if k != kind {
            let want = if kind == Kind::Term {
                "a real term"
            } else {
                "a formula"
            };
            return Err(Error::Sort {
                line: e.line,
                col: e.col,
                message: format!("expected {want}, found `{e}`"),
            });
        }
        Ok(text)
    }

    fn fold(&mut self, op: &str, args: &[String]) -> String {
        let mut acc = args[0].clone();
        for a in &args[1..] {
            let rm = self.fresh_mode();
            acc = format!("({op} {rm} {acc} {a})");
        }
        acc
    }

    fn expr(
        &mut self,
        e: &SExpr,
        env: &HashMap<String, (Kind, String)>,
    ) -> Result<(Kind, String), Error> {
        if let Some(c) = rational_literal(e) {
            return Ok((Kind::Term, print_term(&constant(&c, self.fmt))));
        }
        match &e.kind {
            SExprKind::Atom(name) => {
                if name == "true" || name == "false" {
                    return Ok((Kind::Bool, name.clone()));
                }
                if let Some(v) = env.get(name).or_else(|| self.macros.get(name)) {
                    return Ok(v.clone());
                }
                if self.vars.contains(name) {
                    return Ok((Kind::Term, quote(name)));
                }
                if self.bools.contains(name) {
                    return Ok((Kind::Bool, quote(name)));
                }
                Err(e.syntax_error(format!("unknown symbol `{name}`")))
            }
            SExprKind::Str(_) => Err(unsupported(e, "string literal")),
            SExprKind::List(items) => {
                let Some((head, args)) = items.split_first() else {
                    return Err(e.syntax_error("empty application"));
                };
                let Some(op) = head.atom() else {
                    return Err(unsupported(e, format!("application of `{head}`")));
                };
                if op == "let" {
                    return self.let_expr(e, args, env);
                }
                let arity = |n: usize| -> Result<(), Error> {
                    if args.len() < n {
                        Err(e.syntax_error(format!("`{op}` needs at least {n} arguments")))
                    } else {
                        Ok(())
                    }
                };
                match op {
                    "+" | "*" | "-" | "/" => {
                        arity(1)?;
                        let ts = args
                            .iter()
                            .map(|a| self.expect(a, Kind::Term, env))
                            .collect::<Result<Vec<_>, _>>()?;
                        let text = match (op, ts.len()) {
                            ("-", 1) => format!("(fp.neg {})", ts[0]),
                            (_, 1) => {
                                return Err(
                                    e.syntax_error(format!("`{op}` needs at least 2 arguments"))
                                )
                            }
                            ("+", _) => self.fold("fp.add", &ts),
                            ("*", _) => self.fold("fp.mul", &ts),
                            ("-", _) => self.fold("fp.sub", &ts),
                            _ => self.fold("fp.div", &ts),
                        };
                        Ok((Kind::Term, text))
                    }
                    "<" | "<=" | ">" | ">=" | "=" | "distinct" => {
                        arity(2)?;
                        let first = self.expr(&args[0], env)?;
                        let kind = first.0;
                        let mut ts = vec![first.1];
                        for a in &args[1..] {
                            ts.push(self.expect(a, kind, env)?);
                        }
                        if kind == Kind::Bool && !matches!(op, "=" | "distinct") {
                            return Err(e.syntax_error(format!("`{op}` on formulas")));
                        }
                        let fp = match op {
                            "<" => "fp.lt",
                            "<=" => "fp.leq",
                            ">" => "fp.gt",
                            ">=" => "fp.geq",
                            _ if kind == Kind::Bool => "=",
                            _ => "fp.eq",
                        };
                        let mut parts = Vec::new();
                        if op == "distinct" {
                            for i in 0..ts.len() {
                                for j in i + 1..ts.len() {
                                    parts.push(format!("(not ({fp} {} {}))", ts[i], ts[j]));
                                }
                            }
                        } else {
                            for w in ts.windows(2) {
                                parts.push(format!("({fp} {} {})", w[0], w[1]));
                            }
                        }
                        let text = if parts.len() == 1 {
                            parts.remove(0)
                        } else {
                            format!("(and {})", parts.join(" "))
                        };
                        Ok((Kind::Bool, text))
                    }
                    "and" | "or" | "not" | "=>" | "xor" => {
                        arity(1)?;
                        let fs = args
                            .iter()
                            .map(|a| self.expect(a, Kind::Bool, env))
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok((Kind::Bool, format!("({op} {})", fs.join(" "))))
                    }
                    "ite" => Err(unsupported(e, "ite")),
                    "forall" | "exists" => Err(unsupported(e, "quantifier")),
                    other => Err(unsupported(e, format!("operator `{other}`"))),
                }
            }
        }
    }

    fn let_expr(
        &mut self,
        e: &SExpr,
        args: &[SExpr],
        env: &HashMap<String, (Kind, String)>,
    ) -> Result<(Kind, String), Error> {
        let [binds, body] = args else {
            return Err(e.syntax_error("malformed let"));
        };
        let mut inner = env.clone();
        for b in binds
            .list()
            .ok_or_else(|| binds.syntax_error("malformed let bindings"))?
        {
            match b.list() {
                Some([name, value]) => {
                    let name = name
                        .atom()
                        .ok_or_else(|| name.syntax_error("expected a symbol"))?;
                    inner.insert(name.to_string(), self.expr(value, env)?);
                }
                _ => return Err(b.syntax_error("malformed let binding")),
            }
        }
        self.expr(body, &inner)
    }
}

/// Translates a real-arithmetic script into floating-point arithmetic over
/// `fmt`. Every arithmetic operation gets a fresh free rounding mode and
/// every constant becomes an exact literal when representable, a rounded
/// constant otherwise.
pub fn ra_to_fpa(script: &str, fmt: FpFormat, opts: &RaToFpaOptions) -> Result<String, Error> {
    let commands = read_all(script)?;
    let mut t = Translator {
        fmt,
        vars: Vec::new(),
        bools: Vec::new(),
        modes: Vec::new(),
        taken: BTreeSet::new(),
        macros: HashMap::new(),
    };
    for c in &commands {
        if let Some([head, name, ..]) = c.list() {
            if matches!(
                head.atom(),
                Some("declare-const" | "declare-fun" | "define-fun")
            ) {
                if let Some(n) = name.atom() {
                    t.taken.insert(n.to_string());
                }
            }
        }
    }
    let mut asserts = Vec::new();
    let none = HashMap::new();
    for c in &commands {
        let items = c
            .list()
            .ok_or_else(|| c.syntax_error("expected a command"))?;
        let Some(head) = items.first().and_then(SExpr::atom) else {
            return Err(c.syntax_error("expected a command"));
        };
        match (head, &items[1..]) {
            ("declare-const", [name, sort]) => t.declare(name, sort)?,
            ("declare-fun", [name, params, sort])
                if params.list().is_some_and(<[SExpr]>::is_empty) =>
            {
                t.declare(name, sort)?
            }
            ("declare-fun", _) => return Err(unsupported(c, "uninterpreted function")),
            ("define-fun", [name, params, sort, body])
                if params.list().is_some_and(<[SExpr]>::is_empty) =>
            {
                let kind = t.sort(sort)?;
                let value = t.expect(body, kind, &none)?;
                let name = name
                    .atom()
                    .ok_or_else(|| name.syntax_error("expected a symbol"))?;
                t.macros.insert(name.to_string(), (kind, value));
            }
            ("define-fun", _) => return Err(unsupported(c, "define-fun with parameters")),
            ("assert", [f]) => asserts.push(t.expect(f, Kind::Bool, &none)?),
            (
                "set-logic" | "set-info" | "set-option" | "check-sat" | "exit" | "get-model"
                | "get-value",
                _,
            ) => {}
            (other, _) => return Err(unsupported(c, format!("command `{other}`"))),
        }
    }
    let sort = print_sort(fmt);
    let mut out = String::from("(set-logic QF_FP)\n");
    for v in &t.vars {
        let _ = writeln!(out, "(declare-const {} {sort})", quote(v));
    }
    for b in &t.bools {
        let _ = writeln!(out, "(declare-const {} Bool)", quote(b));
    }
    for m in &t.modes {
        let _ = writeln!(out, "(declare-const {} RoundingMode)", quote(m));
    }
    if opts.assert_not_nan {
        for v in &t.vars {
            let v = quote(v);
            let _ = writeln!(out, "(assert (fp.eq {v} {v}))");
        }
    }
    for a in asserts {
        let _ = writeln!(out, "(assert {a})");
    }
    out.push_str("(check-sat)\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ia::{FpaOp, Rel};
    use crate::oracle::FpValue;
    use crate::smt::{parse_script, FpaFormula, FpaTerm, RmSlot};
    use num_rational::BigRational;

    #[test]
    fn sum_against_exact_literal() {
        let ra = "(set-logic QF_LRA)(declare-fun x () Real)(declare-const y Real)(assert (> (+ x y) (/ 3 2)))(check-sat)";
        let out = ra_to_fpa(ra, FpFormat::FLOAT32, &RaToFpaOptions::default()).unwrap();
        let script = parse_script(&out).unwrap();
        assert_eq!(script.mode_vars, vec!["rm.0".to_string()]);
        let x = FpaTerm::var("x", FpFormat::FLOAT32);
        let y = FpaTerm::var("y", FpFormat::FLOAT32);
        let sum = FpaTerm::binary(FpaOp::Add, RmSlot::Var("rm.0".into()), x, y);
        let lit = script.formula();
        let FpaFormula::Atom(Rel::Gt, lhs, rhs) = lit else {
            panic!("{out}")
        };
        assert_eq!(lhs, sum);
        assert!(matches!(rhs, FpaTerm::Literal(FpValue::Finite { .. }, _)));
        assert_eq!(
            rhs.constant_value()
                .unwrap()
                .to_rational(FpFormat::FLOAT32)
                .unwrap(),
            BigRational::new(3.into(), 2.into())
        );
    }

    #[test]
    fn inexact_constant_is_rounded_form() {
        let out = ra_to_fpa(
            "(declare-const x Real)(assert (<= x 0.1))",
            FpFormat::FLOAT64,
            &RaToFpaOptions::default(),
        )
        .unwrap();
        assert!(out.contains("((_ fp.const 11 53) 0.1 RNE)"), "{out}");
    }

    #[test]
    fn unsupported_constructs() {
        let f = FpFormat::FLOAT64;
        let o = RaToFpaOptions::default();
        let ite = "(declare-const x Real)(assert (> (ite (> x 0) x (- x)) 1))";
        assert!(
            matches!(ra_to_fpa(ite, f, &o), Err(Error::Unsupported { construct, .. }) if construct == "ite")
        );
        let q = "(assert (forall ((x Real)) (> x 0)))";
        assert!(matches!(
            ra_to_fpa(q, f, &o),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn lets_macros_and_not_nan() {
        let ra = "(declare-const x Real)(declare-const rm.0 Real)(define-fun two () Real 2)
                  (assert (let ((d (* x two))) (and (< d rm.0 3) (distinct x d))))";
        let out = ra_to_fpa(
            ra,
            FpFormat::FLOAT32,
            &RaToFpaOptions {
                assert_not_nan: true,
            },
        )
        .unwrap();
        assert!(out.contains("(assert (fp.eq x x))"));
        assert!(out.contains("(declare-const rm.1 RoundingMode)"), "{out}");
        let script = parse_script(&out).unwrap();
        assert_eq!(script.vars.len(), 2);
        assert_eq!(script.formula().atom_count(), 5);
    }
}
