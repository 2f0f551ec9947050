//! Surface AST produced by [`parse`](super::parse()).

use std::fmt;

use super::diag::Span;
use crate::term::{Atom, Sym};

#[derive(Clone, Debug)]
pub struct Ident {
    pub name: Sym,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct STerm {
    pub kind: STermKind,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum STermKind {
    Var(Sym),
    Const(Atom),
    Pair(Box<STerm>, Box<STerm>),
}

#[derive(Clone, Debug)]
pub struct SGoal {
    pub kind: SGoalKind,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum SGoalKind {
    Succeed,
    Unify(STerm, STerm),
    Conde(Vec<Clause>),
    Fresh(Vec<Ident>, Vec<SGoal>),
    Call(Ident, Vec<STerm>),
}

#[derive(Clone, Debug)]
pub struct Clause {
    pub goals: Vec<SGoal>,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct RelDef {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub body: Vec<SGoal>,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunCount {
    All,
    Bounded(u64),
}

#[derive(Clone, Debug)]
pub struct Query {
    pub count: RunCount,
    pub vars: Vec<Ident>,
    pub body: Vec<SGoal>,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct SurfaceProgram {
    pub defs: Vec<RelDef>,
    pub query: Query,
}

impl STerm {
    fn is_ground(&self) -> bool {
        match &self.kind {
            STermKind::Var(_) => false,
            STermKind::Const(_) => true,
            STermKind::Pair(h, t) => h.is_ground() && t.is_ground(),
        }
    }

    fn fmt_datum(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            STermKind::Var(v) => write!(f, ",{v}"),
            STermKind::Const(a) => write!(f, "{a}"),
            STermKind::Pair(h, t) => {
                f.write_str("(")?;
                h.fmt_datum(f)?;
                let mut rest: &STerm = t;
                loop {
                    match &rest.kind {
                        STermKind::Pair(h, t) => {
                            f.write_str(" ")?;
                            h.fmt_datum(f)?;
                            rest = t;
                        }
                        STermKind::Const(Atom::Nil) => break,
                        _ => {
                            f.write_str(" . ")?;
                            rest.fmt_datum(f)?;
                            break;
                        }
                    }
                }
                f.write_str(")")
            }
        }
    }
}

/// Prints concrete syntax that parses back to the same term.
impl fmt::Display for STerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            STermKind::Var(v) => f.write_str(v),
            STermKind::Const(a @ (Atom::Int(_) | Atom::Bool(_))) => write!(f, "{a}"),
            STermKind::Const(a) => write!(f, "'{a}"),
            STermKind::Pair(..) if self.is_ground() => {
                f.write_str("'")?;
                self.fmt_datum(f)
            }
            STermKind::Pair(..) => {
                f.write_str("`")?;
                self.fmt_datum(f)
            }
        }
    }
}

fn join<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Display for SGoal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SGoalKind::Succeed => f.write_str("succeed"),
            SGoalKind::Unify(a, b) => write!(f, "(== {a} {b})"),
            SGoalKind::Conde(clauses) => {
                f.write_str("(conde")?;
                for c in clauses {
                    f.write_str(" [")?;
                    join(f, &c.goals)?;
                    f.write_str("]")?;
                }
                f.write_str(")")
            }
            SGoalKind::Fresh(vars, body) => {
                f.write_str("(fresh (")?;
                join(f, vars)?;
                f.write_str(") ")?;
                join(f, body)?;
                f.write_str(")")
            }
            SGoalKind::Call(name, args) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for SurfaceProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.defs {
            write!(f, "(defrel ({}", d.name)?;
            for p in &d.params {
                write!(f, " {p}")?;
            }
            f.write_str(")\n  ")?;
            join(f, &d.body)?;
            f.write_str(")\n\n")?;
        }
        let q = &self.query;
        match q.count {
            RunCount::All => f.write_str("(run* (")?,
            RunCount::Bounded(n) => write!(f, "(run {n} (")?,
        }
        join(f, &q.vars)?;
        f.write_str(")\n  ")?;
        join(f, &q.body)?;
        f.write_str(")\n")
    }
}
