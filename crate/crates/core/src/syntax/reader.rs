//! S-expression reader with source spans.
//!
//! Brackets `[ ]` are accepted interchangeably with parentheses but must
//! match their opener. Reader sugar `'x`, `` `x `` and `,x` expands to
//! `(quote x)`, `(quasiquote x)` and `(unquote x)`.

use std::fmt;

use super::diag::{DiagCode, Diagnostic, Pos, Span};

#[derive(Clone, Debug)]
pub struct SExpr {
    pub kind: SExprKind,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum SExprKind {
    Sym(String),
    Int(i64),
    Bool(bool),
    /// Items plus an optional dotted tail.
    List(Vec<SExpr>, Option<Box<SExpr>>),
}

impl SExpr {
    pub fn as_sym(&self) -> Option<&str> {
        match &self.kind {
            SExprKind::Sym(s) => Some(s),
            _ => None,
        }
    }

    /// Proper list items, if this is a list without a dotted tail.
    pub fn as_list(&self) -> Option<&[SExpr]> {
        match &self.kind {
            SExprKind::List(items, None) => Some(items),
            _ => None,
        }
    }

    /// Head symbol of a proper list.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_sym()
    }

    /// Structural equality ignoring spans.
    pub fn same_shape(&self, other: &SExpr) -> bool {
        match (&self.kind, &other.kind) {
            (SExprKind::Sym(a), SExprKind::Sym(b)) => a == b,
            (SExprKind::Int(a), SExprKind::Int(b)) => a == b,
            (SExprKind::Bool(a), SExprKind::Bool(b)) => a == b,
            (SExprKind::List(a, at), SExprKind::List(b, bt)) => {
                a.len() == b.len()
                    && a.iter().zip(b).all(|(x, y)| x.same_shape(y))
                    && match (at, bt) {
                        (None, None) => true,
                        (Some(x), Some(y)) => x.same_shape(y),
                        _ => false,
                    }
            }
            _ => false,
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SExprKind::Sym(s) => f.write_str(s),
            SExprKind::Int(n) => write!(f, "{n}"),
            SExprKind::Bool(b) => f.write_str(if *b { "#t" } else { "#f" }),
            SExprKind::List(items, tail) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    item.fmt(f)?;
                }
                if let Some(t) = tail {
                    write!(f, " . {t}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn read(text: &str) -> Result<Vec<SExpr>, Diagnostic> {
    let mut r = Reader {
        text,
        pos: Pos {
            offset: 0,
            line: 1,
            col: 1,
        },
    };
    let mut out = Vec::new();
    loop {
        r.skip_trivia();
        match r.peek() {
            None => return Ok(out),
            Some(c @ (')' | ']')) => {
                let start = r.pos;
                r.bump();
                return Err(Diagnostic::error(
                    DiagCode::BadForm,
                    Span::new(start, r.pos),
                    format!("unbalanced `{c}`"),
                ));
            }
            Some(_) => out.push(r.datum()?),
        }
    }
}

struct Reader<'a> {
    text: &'a str,
    pos: Pos,
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | '\'' | '`' | ',' | ';' | '"')
}

impl<'a> Reader<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos.offset..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos.offset += c.len_utf8();
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn err<T>(&self, start: Pos, msg: impl Into<String>) -> Result<T, Diagnostic> {
        Err(Diagnostic::error(
            DiagCode::BadForm,
            Span::new(start, self.pos),
            msg,
        ))
    }

    fn datum(&mut self) -> Result<SExpr, Diagnostic> {
        self.skip_trivia();
        let start = self.pos;
        let Some(c) = self.peek() else {
            return self.err(start, "unexpected end of input");
        };
        match c {
            '(' | '[' => {
                self.bump();
                self.list(start, if c == '(' { ')' } else { ']' })
            }
            ')' | ']' => {
                self.bump();
                self.err(start, format!("unexpected `{c}`"))
            }
            '\'' | '`' | ',' => {
                self.bump();
                let name = match c {
                    '\'' => "quote",
                    '`' => "quasiquote",
                    _ => {
                        if self.peek() == Some('@') {
                            self.bump();
                            return self.err(start, "unquote-splicing is not supported");
                        }
                        "unquote"
                    }
                };
                let marker = SExpr {
                    kind: SExprKind::Sym(name.into()),
                    span: Span::new(start, self.pos),
                };
                self.skip_trivia();
                if matches!(self.peek(), None | Some(')' | ']')) {
                    return self.err(start, format!("`{c}` must be followed by a datum"));
                }
                let inner = self.datum()?;
                let span = Span::new(start, inner.span.end);
                Ok(SExpr {
                    kind: SExprKind::List(vec![marker, inner], None),
                    span,
                })
            }
            '"' => {
                self.bump();
                self.err(start, "string literals are not supported")
            }
            _ => self.atom(start),
        }
    }

    fn list(&mut self, start: Pos, close: char) -> Result<SExpr, Diagnostic> {
        let mut items = Vec::new();
        let mut tail = None;
        loop {
            self.skip_trivia();
            match self.peek() {
                None => {
                    return self.err(start, format!("unclosed list: expected `{close}`"));
                }
                Some(c @ (')' | ']')) => {
                    let at = self.pos;
                    self.bump();
                    if c != close {
                        return Err(Diagnostic::error(
                            DiagCode::BadForm,
                            Span::new(at, self.pos),
                            format!("mismatched `{c}`: expected `{close}`"),
                        ));
                    }
                    return Ok(SExpr {
                        kind: SExprKind::List(items, tail),
                        span: Span::new(start, self.pos),
                    });
                }
                Some(_) if tail.is_some() => {
                    let at = self.pos;
                    let _ = self.datum();
                    return Err(Diagnostic::error(
                        DiagCode::BadForm,
                        Span::new(at, self.pos),
                        "bad dotted list: more than one datum after `.`",
                    ));
                }
                Some(_) => {
                    let item = self.datum()?;
                    if item.as_sym() == Some(".") {
                        if items.is_empty() {
                            return Err(Diagnostic::error(
                                DiagCode::BadForm,
                                item.span,
                                "bad dotted list: nothing before `.`",
                            ));
                        }
                        self.skip_trivia();
                        if matches!(self.peek(), None | Some(')' | ']')) {
                            return Err(Diagnostic::error(
                                DiagCode::BadForm,
                                item.span,
                                "bad dotted list: nothing after `.`",
                            ));
                        }
                        let t = self.datum()?;
                        if t.as_sym() == Some(".") {
                            return Err(Diagnostic::error(
                                DiagCode::BadForm,
                                t.span,
                                "bad dotted list",
                            ));
                        }
                        tail = Some(Box::new(t));
                    } else {
                        items.push(item);
                    }
                }
            }
        }
    }

    fn atom(&mut self, start: Pos) -> Result<SExpr, Diagnostic> {
        while let Some(c) = self.peek() {
            if is_delimiter(c) {
                break;
            }
            self.bump();
        }
        let text = &self.text[start.offset..self.pos.offset];
        let span = Span::new(start, self.pos);
        let kind = match text {
            "#t" | "#true" => SExprKind::Bool(true),
            "#f" | "#false" => SExprKind::Bool(false),
            _ if text.starts_with('#') => {
                return self.err(start, format!("unsupported syntax `{text}`"))
            }
            _ if looks_numeric(text) => match text.parse::<i64>() {
                Ok(n) => SExprKind::Int(n),
                Err(_) => return self.err(start, format!("bad number `{text}`")),
            },
            _ => SExprKind::Sym(text.to_string()),
        };
        Ok(SExpr { kind, span })
    }
}

fn looks_numeric(text: &str) -> bool {
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one(text: &str) -> SExpr {
        let mut v = read(text).unwrap();
        assert_eq!(v.len(), 1);
        v.pop().unwrap()
    }

    #[test]
    fn quote_sugar() {
        let e = one("(== q 'dog)");
        assert_eq!(e.to_string(), "(== q (quote dog))");
        let items = e.as_list().unwrap();
        assert_eq!(items[2].span.start.col, 7);
        assert_eq!(items[2].span.end.col, 11);
    }

    #[test]
    fn quasiquote_dotted() {
        let e = one("`(,a . ,d)");
        assert_eq!(e.to_string(), "(quasiquote ((unquote a) . (unquote d)))");
    }

    #[test]
    fn brackets_and_comments() {
        let e = one("[a ; comment\n (b c)] ");
        assert_eq!(e.to_string(), "(a (b c))");
        assert_eq!(e.span.end.line, 2);
    }

    #[test]
    fn literals() {
        assert_eq!(one("(1 -2 #t #f ())").to_string(), "(1 -2 #t #f ())");
        assert!(matches!(one("-").kind, SExprKind::Sym(_)));
        assert!(matches!(one("...").kind, SExprKind::Sym(_)));
    }

    #[test]
    fn errors() {
        for bad in ["(run* (q)", ")", "(a]", "( . a)", "(a . )", "(a . b c)", "'", "\"s\"", "#x", ",@a"] {
            let e = read(bad).unwrap_err();
            assert_eq!(e.code, DiagCode::BadForm, "{bad}");
        }
        let e = read("(run* (q)\n  (== q 'a)").unwrap_err();
        assert_eq!(e.span.start.line, 1);
        assert_eq!(e.span.start.col, 1);
    }

    fn check_nesting(e: &SExpr) {
        if let SExprKind::List(items, tail) = &e.kind {
            for c in items.iter().chain(tail.as_deref()) {
                assert!(e.span.contains(&c.span));
                check_nesting(c);
            }
        }
    }

    fn arb_sexpr() -> impl Strategy<Value = String> {
        let leaf = prop_oneof![
            "[a-z][a-z0-9]{0,3}",
            (-50i64..50).prop_map(|n| n.to_string()),
            Just("#t".to_string()),
            Just("()".to_string()),
        ];
        leaf.prop_recursive(4, 24, 4, |inner| {
            prop_oneof![
                proptest::collection::vec(inner.clone(), 0..4)
                    .prop_map(|v| format!("({})", v.join(" "))),
                (proptest::collection::vec(inner.clone(), 1..3), inner.clone())
                    .prop_map(|(v, t)| format!("[{} . {}]", v.join("  "), t)),
                inner.clone().prop_map(|x| format!("'{x}")),
                inner.prop_map(|x| format!("`(,{x})")),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_read_roundtrip(src in arb_sexpr()) {
            let first = read(&src).unwrap();
            prop_assert_eq!(first.len(), 1);
            check_nesting(&first[0]);
            let printed = first[0].to_string();
            let again = read(&printed).unwrap();
            prop_assert!(first[0].same_shape(&again[0]), "{} vs {}", src, printed);
        }
    }
}
