//! Constant folding for generated flattened definitions. Comparisons
//! against `ri.large_value` are decided for numerals within twice the
//! largest finite value, which the script asserts to be below it.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::real_literal;
use crate::format::Precision;
use crate::ia::{round_down, round_up, XRat};
use crate::smt::sexpr::{read_all, SExpr, SExprKind};
use crate::smt::{quote, rational_literal};

pub(crate) struct Facts {
    /// Numerals up to twice this magnitude lie strictly between the
    /// infinity encodings.
    pub max: BigRational,
    /// Error parameters selected by the optional precision argument of a
    /// rounding call, when they are fixed.
    pub precision: Box<dyn Fn(Option<&BigRational>) -> Option<Precision<BigRational>>>,
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(BigRational),
    Bool(bool),
    /// `ri.large_value` times the sign.
    Large(i8),
    Sym(String),
    App(String, Vec<Node>),
    Let(Vec<(String, Node)>, Box<Node>),
}

impl Node {
    fn print(&self, out: &mut String) {
        match self {
            Node::Num(q) => out.push_str(&real_literal(q)),
            Node::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Node::Large(1) => out.push_str(super::K),
            Node::Large(_) => out.push_str(super::NK),
            Node::Sym(s) => out.push_str(&quote(s)),
            Node::App(head, args) => {
                out.push('(');
                out.push_str(head);
                for a in args {
                    out.push(' ');
                    a.print(out);
                }
                out.push(')');
            }
            Node::Let(binds, body) => {
                out.push_str("(let (");
                for (i, (name, value)) in binds.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    out.push('(');
                    out.push_str(&quote(name));
                    out.push(' ');
                    value.print(out);
                    out.push(')');
                }
                out.push_str(") ");
                body.print(out);
                out.push(')');
            }
        }
    }
}

/// Order of two values when it is decided.
fn compare(a: &Node, b: &Node, facts: &Facts) -> Option<std::cmp::Ordering> {
    let bounded = |q: &BigRational| q.abs() <= &facts.max + &facts.max;
    match (a, b) {
        (Node::Num(x), Node::Num(y)) => Some(x.cmp(y)),
        (Node::Large(s), Node::Large(t)) => Some(s.cmp(t)),
        (Node::Large(s), Node::Num(y)) if bounded(y) => Some(0.cmp(s).reverse()),
        (Node::Num(x), Node::Large(t)) if bounded(x) => Some(0.cmp(t)),
        _ => None,
    }
}

struct Simplifier<'a> {
    facts: &'a Facts,
}

impl Simplifier<'_> {
    fn node(&self, e: &SExpr, env: &HashMap<String, Node>) -> Node {
        if let Some(q) = rational_literal(e) {
            return Node::Num(q);
        }
        match &e.kind {
            SExprKind::Atom(a) => match a.as_str() {
                "true" => Node::Bool(true),
                "false" => Node::Bool(false),
                _ if a == super::K => Node::Large(1),
                _ => env.get(a).cloned().unwrap_or_else(|| Node::Sym(a.clone())),
            },
            SExprKind::Str(s) => Node::Sym(s.clone()),
            SExprKind::List(items) => {
                let head = items
                    .first()
                    .and_then(SExpr::atom)
                    .unwrap_or_default()
                    .to_string();
                if head == "let" {
                    return self.let_node(&items[1..], env);
                }
                let args: Vec<Node> = items[1..].iter().map(|a| self.node(a, env)).collect();
                self.app(head, args)
            }
        }
    }

    fn let_node(&self, rest: &[SExpr], env: &HashMap<String, Node>) -> Node {
        let (Some(binds), Some(body)) = (rest.first().and_then(SExpr::list), rest.get(1)) else {
            return Node::Sym("let".into());
        };
        let mut inner = env.clone();
        let mut kept = Vec::new();
        for b in binds {
            let Some([name, value]) = b.list() else {
                continue;
            };
            let name = name.atom().unwrap_or_default().to_string();
            let v = self.node(value, env);
            match v {
                Node::Num(_) | Node::Bool(_) | Node::Large(_) => {
                    inner.insert(name, v);
                }
                Node::Sym(ref s) if !env.contains_key(s) => {
                    inner.insert(name, v);
                }
                _ => {
                    inner.insert(name.clone(), Node::Sym(name.clone()));
                    kept.push((name, v));
                }
            }
        }
        let body = self.node(body, &inner);
        if kept.is_empty() {
            body
        } else {
            Node::Let(kept, Box::new(body))
        }
    }

    fn app(&self, head: String, args: Vec<Node>) -> Node {
        let nums: Option<Vec<&BigRational>> = args
            .iter()
            .map(|a| if let Node::Num(q) = a { Some(q) } else { None })
            .collect();
        let bools: Option<Vec<bool>> = args
            .iter()
            .map(|a| {
                if let Node::Bool(b) = a {
                    Some(*b)
                } else {
                    None
                }
            })
            .collect();
        match head.as_str() {
            "-" if args.len() == 1 => match &args[0] {
                Node::Num(q) => return Node::Num(-q),
                Node::Large(s) => return Node::Large(-s),
                _ => {}
            },
            "+" | "-" | "*" if nums.is_some() && !args.is_empty() => {
                let nums = nums.expect("checked");
                let mut acc = nums[0].clone();
                for q in &nums[1..] {
                    match head.as_str() {
                        "+" => acc += *q,
                        "-" => acc -= *q,
                        _ => acc *= *q,
                    }
                }
                return Node::Num(acc);
            }
            "/" => {
                if let Some([a, b]) = nums.as_deref() {
                    if !b.is_zero() {
                        return Node::Num(*a / *b);
                    }
                }
            }
            "<" | "<=" | ">" | ">=" if args.len() == 2 => {
                if let Some(o) = compare(&args[0], &args[1], self.facts) {
                    return Node::Bool(match head.as_str() {
                        "<" => o.is_lt(),
                        "<=" => o.is_le(),
                        ">" => o.is_gt(),
                        _ => o.is_ge(),
                    });
                }
            }
            "=" if args.len() == 2 => {
                if let Some(o) = compare(&args[0], &args[1], self.facts) {
                    return Node::Bool(o.is_eq());
                }
                if let Some([a, b]) = bools.as_deref() {
                    return Node::Bool(a == b);
                }
                if args[0] == args[1] {
                    return Node::Bool(true);
                }
                let mut args = args;
                if let Node::Bool(b) = args[0] {
                    let other = args.swap_remove(1);
                    return if b {
                        other
                    } else {
                        Node::App("not".into(), vec![other])
                    };
                }
                if let Node::Bool(b) = args[1] {
                    let other = args.swap_remove(0);
                    return if b {
                        other
                    } else {
                        Node::App("not".into(), vec![other])
                    };
                }
                return Node::App(head, args);
            }
            "not" if args.len() == 1 => {
                if let Node::Bool(b) = args[0] {
                    return Node::Bool(!b);
                }
            }
            "and" | "or" => {
                let unit = head == "and";
                let mut kept = Vec::new();
                for a in args {
                    match a {
                        Node::Bool(b) if b == unit => {}
                        Node::Bool(b) => return Node::Bool(b),
                        Node::App(h, inner) if h == head => kept.extend(inner),
                        other => kept.push(other),
                    }
                }
                return match kept.len() {
                    0 => Node::Bool(unit),
                    1 => kept.pop().expect("one item"),
                    _ => Node::App(head, kept),
                };
            }
            "=>" if args.len() == 2 => match (&args[0], &args[1]) {
                (Node::Bool(false), _) | (_, Node::Bool(true)) => return Node::Bool(true),
                (Node::Bool(true), b) => return b.clone(),
                _ => {}
            },
            "ite" if args.len() == 3 => {
                let mut args = args;
                if let Node::Bool(c) = args[0] {
                    return args.swap_remove(if c { 1 } else { 2 });
                }
                if args[1] == args[2] {
                    return args.swap_remove(1);
                }
                if let (Node::Bool(t), Node::Bool(e)) = (&args[1], &args[2]) {
                    return if *t && !*e {
                        args.swap_remove(0)
                    } else {
                        Node::App("not".into(), vec![args.swap_remove(0)])
                    };
                }
                return Node::App(head, args);
            }
            "ri.r_dn" | "ri.r_up" => {
                let (p, v) = match args.as_slice() {
                    [Node::Num(v)] => (None, v),
                    [Node::Num(p), Node::Num(v)] => (Some(p), v),
                    _ => return Node::App(head, args),
                };
                if let Some(prec) = (self.facts.precision)(p) {
                    let x = XRat::Finite(v.clone());
                    let r = if head == "ri.r_dn" {
                        round_down(&x, &prec)
                    } else {
                        round_up(&x, &prec)
                    };
                    return match r {
                        XRat::Finite(q) => Node::Num(q),
                        XRat::PosInf => Node::Large(1),
                        XRat::NegInf => Node::Large(-1),
                    };
                }
            }
            _ => {}
        }
        Node::App(head, args)
    }
}

/// Folds the constant parts of `expr`. Unparsable input is returned as is.
pub(crate) fn simplify(expr: &str, facts: &Facts) -> String {
    let Ok(items) = read_all(expr) else {
        return expr.to_string();
    };
    let [e] = items.as_slice() else {
        return expr.to_string();
    };
    let mut out = String::new();
    Simplifier { facts }
        .node(e, &HashMap::new())
        .print(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::FpFormat;

    fn facts() -> Facts {
        let f = FpFormat::new(4, 4).unwrap();
        Facts {
            max: f.max_fp(),
            precision: Box::new(move |_| Some(f.precision())),
        }
    }

    #[test]
    fn folds_classification_and_rounding() {
        let f = facts();
        assert_eq!(
            simplify(
                "(ite (<= 3.0 (- ri.large_value)) x (ri.r_dn (* 2.0 (/ 1 20))))",
                &f
            ),
            "(/ 219 2560)"
        );
        assert_eq!(simplify("(ri.r_up 1000.0)", &f), "ri.large_value");
        assert_eq!(
            simplify("(and (>= |a b| ri.large_value) (< 1.0 ri.large_value))", &f),
            "(>= |a b| ri.large_value)"
        );
        assert_eq!(
            simplify("(<= 1000.0 ri.large_value)", &f),
            "(<= 1000.0 ri.large_value)"
        );
        assert_eq!(
            simplify("(let ((c0 1.0) (c1 (+ x 1.0))) (ite (<= c0 c1) c0 c1))", &f),
            "(let ((c1 (+ x 1.0))) (ite (<= 1.0 c1) 1.0 c1))"
        );
        assert_eq!(simplify("(or (= false false) y)", &f), "true");
        assert_eq!(simplify("(ite c true false)", &f), "c");
    }
}
