//! SMT-LIB front end for the floating-point fragment: reader, parser,
//! printer, sort checking and negation normal form.

mod ast;
mod parser;
mod printer;
pub mod sexpr;

pub use ast::{to_nnf, FpaFormula, FpaTerm, RmSlot, Script};
pub use parser::parse_script;
pub(crate) use parser::rational_literal;
pub use printer::{
    print_formula, print_literal, print_rational, print_script, print_sort, print_term, quote,
};

use crate::format::FpFormat;
use crate::Error;

/// The formats a formula uses: one ambient format, or an indexed table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formats {
    Single(FpFormat),
    Table(Vec<FpFormat>),
}

impl Formats {
    pub fn all(&self) -> Vec<FpFormat> {
        match self {
            Formats::Single(f) => vec![*f],
            Formats::Table(t) => t.clone(),
        }
    }

    /// Componentwise maximum, the precision bound of the formula.
    pub fn bound(&self) -> FpFormat {
        let all = self.all();
        let eb = all.iter().map(|f| f.eb()).max().expect("nonempty");
        let sb = all.iter().map(|f| f.sb()).max().expect("nonempty");
        FpFormat::new(eb, sb).expect("valid components")
    }
}

/// Collects the formats used by a formula. Several formats are an error
/// unless `allow_multi` is set; a formula without terms defaults to binary64.
pub fn check_sorts(phi: &FpaFormula, allow_multi: bool) -> Result<Formats, Error> {
    for_each_op(phi, &mut |t| {
        if let FpaTerm::Binary(_, _, a, b) = t {
            if a.format() != b.format() {
                return Err(Error::Sort {
                    line: 0,
                    col: 0,
                    message: format!("operation mixes {} and {}", a.format(), b.format()),
                });
            }
        }
        Ok(())
    })?;
    let mut atoms_ok = Ok(());
    phi.visit_atoms(&mut |a| {
        if let FpaFormula::Atom(rel, l, r) = a {
            if l.format() != r.format() && atoms_ok.is_ok() {
                atoms_ok = Err(Error::Sort {
                    line: 0,
                    col: 0,
                    message: format!("{rel} compares {} with {}", l.format(), r.format()),
                });
            }
        }
    });
    atoms_ok?;
    let formats = phi.formats();
    match formats.as_slice() {
        [] => Ok(Formats::Single(FpFormat::FLOAT64)),
        [single] => Ok(Formats::Single(*single)),
        _ if allow_multi => Ok(Formats::Table(formats)),
        _ => Err(Error::Sort {
            line: 0,
            col: 0,
            message: format!(
                "formula mixes formats {}; enable the multi-precision encoding",
                formats
                    .iter()
                    .map(|f| f.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }),
    }
}

fn for_each_op(
    phi: &FpaFormula,
    f: &mut impl FnMut(&FpaTerm) -> Result<(), Error>,
) -> Result<(), Error> {
    let mut result = Ok(());
    phi.visit_terms(&mut |t| {
        if result.is_ok() {
            result = f(t);
        }
    });
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_format() {
        let s = parse_script("(declare-const x Float64)(assert (fp.gt x x))").unwrap();
        assert_eq!(
            check_sorts(&s.formula(), false).unwrap(),
            Formats::Single(FpFormat::FLOAT64)
        );
    }

    #[test]
    fn mixed_formats_table() {
        let s = parse_script(
            "(declare-const x Float64)(declare-const y Float32)(assert (fp.gt x x))(assert (fp.lt y y))",
        )
        .unwrap();
        assert!(check_sorts(&s.formula(), false).is_err());
        let t = check_sorts(&s.formula(), true).unwrap();
        assert_eq!(
            t,
            Formats::Table(vec![FpFormat::FLOAT32, FpFormat::FLOAT64])
        );
        assert_eq!(t.bound(), FpFormat::FLOAT64);
    }
}
