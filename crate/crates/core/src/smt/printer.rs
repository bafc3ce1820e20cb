use std::collections::HashSet;
use std::fmt::Write;

use num_rational::BigRational;
use num_traits::Signed;

use super::ast::{FpaFormula, FpaTerm, RmSlot, Script};
use crate::format::FpFormat;
use crate::oracle::FpValue;
use crate::scalar::format_rational;

pub fn print_sort(fmt: FpFormat) -> String {
    format!("(_ FloatingPoint {} {})", fmt.eb(), fmt.sb())
}

fn bits(value: u128, width: u32) -> String {
    format!("{value:0width$b}", width = width as usize)
}

pub fn print_literal(v: FpValue, fmt: FpFormat) -> String {
    let (eb, sb) = (fmt.eb(), fmt.sb());
    match v {
        FpValue::PosInf => format!("(_ +oo {eb} {sb})"),
        FpValue::NegInf => format!("(_ -oo {eb} {sb})"),
        FpValue::NaN => format!("(_ NaN {eb} {sb})"),
        FpValue::PosZero => format!("(_ +zero {eb} {sb})"),
        FpValue::NegZero => format!("(_ -zero {eb} {sb})"),
        FpValue::Finite { .. } => {
            let (s, e, t) = v.to_fields(fmt);
            format!(
                "(fp #b{} #b{} #b{})",
                u8::from(s),
                bits(u128::from(e), eb),
                bits(t, sb - 1)
            )
        }
    }
}

/// A rational as an SMT-LIB real term: decimal when exact, else a quotient.
pub fn print_rational(v: &BigRational) -> String {
    let body = if v.is_integer() || format_rational(v).contains('.') {
        format_rational(&v.abs())
    } else {
        format!("(/ {} {})", v.numer().abs(), v.denom())
    };
    if v.is_negative() {
        format!("(- {body})")
    } else {
        body
    }
}

struct Printer<'a> {
    fresh: Box<dyn FnMut() -> String + 'a>,
}

impl Printer<'_> {
    fn term(&mut self, t: &FpaTerm, out: &mut String) {
        match t {
            FpaTerm::Literal(v, fmt) => out.push_str(&print_literal(*v, *fmt)),
            FpaTerm::Const {
                value,
                mode,
                format,
            } => {
                let _ = write!(
                    out,
                    "((_ fp.const {} {}) {} {})",
                    format.eb(),
                    format.sb(),
                    print_rational(value),
                    mode
                );
            }
            FpaTerm::Var(name, _) => out.push_str(&quote(name)),
            FpaTerm::Unary(op, a) => {
                let _ = write!(out, "({} ", op.smt_name());
                self.term(a, out);
                out.push(')');
            }
            FpaTerm::Binary(op, rm, a, b) => {
                let rm = match rm {
                    RmSlot::Concrete(m) => m.to_string(),
                    RmSlot::Var(name) => quote(name),
                    RmSlot::Unspecified => (self.fresh)(),
                };
                let _ = write!(out, "({} {} ", op.smt_name(), rm);
                self.term(a, out);
                out.push(' ');
                self.term(b, out);
                out.push(')');
            }
        }
    }

    fn formula(&mut self, f: &FpaFormula, out: &mut String) {
        match f {
            FpaFormula::Atom(rel, a, b) => {
                let _ = write!(out, "({} ", rel);
                self.term(a, out);
                out.push(' ');
                self.term(b, out);
                out.push(')');
            }
            FpaFormula::Not(g) => {
                out.push_str("(not ");
                self.formula(g, out);
                out.push(')');
            }
            FpaFormula::And(gs) if gs.is_empty() => out.push_str("true"),
            FpaFormula::Or(gs) if gs.is_empty() => out.push_str("false"),
            FpaFormula::And(gs) | FpaFormula::Or(gs) => {
                out.push_str(if matches!(f, FpaFormula::And(_)) {
                    "(and"
                } else {
                    "(or"
                });
                for g in gs {
                    out.push(' ');
                    self.formula(g, out);
                }
                out.push(')');
            }
        }
    }
}

/// Quotes a symbol when it is not a simple symbol.
pub fn quote(name: &str) -> String {
    let simple = !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c));
    if simple {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

pub fn print_term(t: &FpaTerm) -> String {
    let mut out = String::new();
    Printer {
        fresh: Box::new(|| "RNE".to_string()),
    }
    .term(t, &mut out);
    out
}

/// Prints a formula; unspecified rounding sites print as `RNE`. Use
/// [`print_script`] to keep them free.
pub fn print_formula(f: &FpaFormula) -> String {
    let mut out = String::new();
    Printer {
        fresh: Box::new(|| "RNE".to_string()),
    }
    .formula(f, &mut out);
    out
}

/// Prints a complete script. Each unspecified rounding site gets its own
/// fresh `RoundingMode` constant.
pub fn print_script(script: &Script) -> String {
    let taken: HashSet<&str> = script
        .vars
        .iter()
        .map(|(n, _)| n.as_str())
        .chain(script.mode_vars.iter().map(String::as_str))
        .collect();
    let mut fresh_names = Vec::new();
    let mut body = String::new();
    {
        let mut counter = 0usize;
        let fresh_names = &mut fresh_names;
        let mut printer = Printer {
            fresh: Box::new(move || loop {
                let name = format!("rm.{counter}");
                counter += 1;
                if !taken.contains(name.as_str()) {
                    fresh_names.push(name.clone());
                    return name;
                }
            }),
        };
        for a in &script.assertions {
            body.push_str("(assert ");
            printer.formula(a, &mut body);
            body.push_str(")\n");
        }
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "(set-logic {})",
        script.logic.as_deref().unwrap_or("QF_FP")
    );
    for (name, fmt) in &script.vars {
        let _ = writeln!(out, "(declare-const {} {})", quote(name), print_sort(*fmt));
    }
    for name in script.mode_vars.iter().chain(fresh_names.iter()) {
        let _ = writeln!(out, "(declare-const {} RoundingMode)", quote(name));
    }
    out.push_str(&body);
    out.push_str("(check-sat)\n");
    out
}
