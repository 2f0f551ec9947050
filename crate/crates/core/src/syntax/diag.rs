use std::fmt;

use serde::Serialize;

/// Position in source text. `line` and `col` are 1-based; `col` counts chars.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pos {
    pub offset: usize,
    pub line: u32,
    pub col: u32,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

impl Span {
    pub fn new(start: Pos, end: Pos) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start.offset <= other.start.offset && other.end.offset <= self.end.offset
    }

    pub fn text<'a>(&self, source: &'a str) -> &'a str {
        &source[self.start.offset..self.end.offset]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagCode {
    BadForm,
    ArityMismatch,
    UnboundRelation,
    UnboundVariable,
    DuplicateRelation,
    DuplicateParameter,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::BadForm => "BAD_FORM",
            DiagCode::ArityMismatch => "ARITY_MISMATCH",
            DiagCode::UnboundRelation => "UNBOUND_RELATION",
            DiagCode::UnboundVariable => "UNBOUND_VARIABLE",
            DiagCode::DuplicateRelation => "DUPLICATE_RELATION",
            DiagCode::DuplicateParameter => "DUPLICATE_PARAMETER",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagCode,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    pub fn error(code: DiagCode, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            span,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: {}",
            self.span.start.line,
            self.span.start.col,
            self.code.as_str(),
            self.message
        )
    }
}

#[derive(Serialize)]
struct LineCol {
    line: u32,
    col: u32,
}

/// `{code, message, start:{line,col}, end:{line,col}}`
impl Serialize for Diagnostic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Diagnostic", 4)?;
        st.serialize_field("code", &self.code)?;
        st.serialize_field("message", &self.message)?;
        st.serialize_field(
            "start",
            &LineCol {
                line: self.span.start.line,
                col: self.span.start.col,
            },
        )?;
        st.serialize_field(
            "end",
            &LineCol {
                line: self.span.end.line,
                col: self.span.end.col,
            },
        )?;
        st.end()
    }
}

/// Orders diagnostics by span, then code, and drops exact duplicates.
pub fn sort_diagnostics(diags: &mut Vec<Diagnostic>) {
    diags.sort_by(|a, b| {
        (a.span, a.code, &a.message).cmp(&(b.span, b.code, &b.message))
    });
    diags.dedup();
}
