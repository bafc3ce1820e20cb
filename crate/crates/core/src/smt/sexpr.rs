use std::fmt;

use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SExprKind {
    /// Symbols, numerals, decimals, bit-vector and keyword tokens. Quoted
    /// symbols are stored without their bars.
    Atom(String),
    Str(String),
    List(Vec<SExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SExpr {
    pub kind: SExprKind,
    pub line: usize,
    pub col: usize,
}

impl SExpr {
    pub fn atom(&self) -> Option<&str> {
        match &self.kind {
            SExprKind::Atom(s) => Some(s),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[SExpr]> {
        match &self.kind {
            SExprKind::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn syntax_error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SExprKind::Atom(s) => f.write_str(s),
            SExprKind::Str(s) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
            SExprKind::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    item.fmt(f)?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn error(&self, line: usize, col: usize, message: &str) -> Error {
        Error::Syntax {
            line,
            col,
            message: message.to_string(),
        }
    }
}

/// Reads every top-level s-expression of `text`.
pub fn read_all(text: &str) -> Result<Vec<SExpr>, Error> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut stack: Vec<(usize, usize, Vec<SExpr>)> = Vec::new();
    let mut top = Vec::new();
    loop {
        r.skip_trivia();
        let (line, col) = (r.line, r.col);
        let Some(&c) = r.chars.peek() else { break };
        let item = match c {
            '(' => {
                r.bump();
                stack.push((line, col, Vec::new()));
                continue;
            }
            ')' => {
                r.bump();
                let (l, c, items) = stack
                    .pop()
                    .ok_or_else(|| r.error(line, col, "unexpected ')'"))?;
                SExpr {
                    kind: SExprKind::List(items),
                    line: l,
                    col: c,
                }
            }
            '"' => {
                r.bump();
                let mut s = String::new();
                loop {
                    match r.bump() {
                        None => return Err(r.error(line, col, "unterminated string literal")),
                        Some('"') if r.chars.peek() == Some(&'"') => {
                            r.bump();
                            s.push('"');
                        }
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                    }
                }
                SExpr {
                    kind: SExprKind::Str(s),
                    line,
                    col,
                }
            }
            '|' => {
                r.bump();
                let mut s = String::new();
                loop {
                    match r.bump() {
                        None => return Err(r.error(line, col, "unterminated quoted symbol")),
                        Some('|') => break,
                        Some(ch) => s.push(ch),
                    }
                }
                SExpr {
                    kind: SExprKind::Atom(s),
                    line,
                    col,
                }
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = r.chars.peek() {
                    if ch.is_whitespace() || matches!(ch, '(' | ')' | ';' | '"' | '|') {
                        break;
                    }
                    s.push(ch);
                    r.bump();
                }
                SExpr {
                    kind: SExprKind::Atom(s),
                    line,
                    col,
                }
            }
        };
        match stack.last_mut() {
            Some((_, _, items)) => items.push(item),
            None => top.push(item),
        }
    }
    if let Some((line, col, _)) = stack.pop() {
        return Err(r.error(line, col, "unclosed '('"));
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_nesting() {
        let es = read_all("; header\n(assert\n  (fp.gt x |odd name|))").unwrap();
        assert_eq!(es.len(), 1);
        assert_eq!((es[0].line, es[0].col), (2, 1));
        let inner = &es[0].list().unwrap()[1];
        assert_eq!((inner.line, inner.col), (3, 3));
        assert_eq!(inner.list().unwrap()[2].atom(), Some("odd name"));
        assert_eq!(es[0].to_string(), "(assert (fp.gt x odd name))");
    }

    #[test]
    fn unbalanced() {
        match read_all("(a (b)") {
            Err(Error::Syntax {
                line: 1, col: 1, ..
            }) => {}
            other => panic!("{other:?}"),
        }
        match read_all("a)\n") {
            Err(Error::Syntax {
                line: 1, col: 2, ..
            }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn strings() {
        let es = read_all(r#"(set-info :source "a ""b"" c")"#).unwrap();
        assert_eq!(
            es[0].list().unwrap()[2].kind,
            SExprKind::Str("a \"b\" c".into())
        );
    }
}
