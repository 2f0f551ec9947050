use super::ast::*;
use super::diag::{DiagCode, Diagnostic, Pos, Span};
use super::reader::{SExpr, SExprKind};
use crate::term::{Atom, Sym};

/// Names that cannot be used for relations.
pub const RESERVED: &[&str] = &[
    "defrel",
    "run*",
    "run",
    "conde",
    "fresh",
    "==",
    "succeed",
    "quote",
    "quasiquote",
    "unquote",
];

type PResult<T> = Result<T, Diagnostic>;

fn bad<T>(span: Span, msg: impl Into<String>) -> PResult<T> {
    Err(Diagnostic::error(DiagCode::BadForm, span, msg))
}

/// Parses top-level forms: zero or more `defrel`s followed by exactly one
/// `run*`/`run n` query. Collects one diagnostic per malformed form.
pub fn parse(forms: &[SExpr]) -> Result<SurfaceProgram, Vec<Diagnostic>> {
    let mut defs = Vec::new();
    let mut query: Option<Query> = None;
    let mut diags = Vec::new();
    for form in forms {
        match form.head() {
            Some("defrel") => {
                if query.is_some() {
                    diags.push(Diagnostic::error(
                        DiagCode::BadForm,
                        form.span,
                        "misplaced defrel: definitions must precede the query",
                    ));
                    continue;
                }
                match parse_defrel(form) {
                    Ok(d) => defs.push(d),
                    Err(d) => diags.push(d),
                }
            }
            Some("run*" | "run") => {
                if query.is_some() {
                    diags.push(Diagnostic::error(
                        DiagCode::BadForm,
                        form.span,
                        "a program has exactly one query",
                    ));
                    continue;
                }
                match parse_run(form) {
                    Ok(q) => query = Some(q),
                    Err(d) => {
                        diags.push(d);
                        // Keep later defrels from being reported as misplaced.
                        query = Some(Query {
                            count: RunCount::All,
                            vars: vec![],
                            body: vec![],
                            span: form.span,
                        });
                    }
                }
            }
            _ => diags.push(Diagnostic::error(
                DiagCode::BadForm,
                form.span,
                format!("expected `defrel` or `run*` form, found `{form}`"),
            )),
        }
    }
    match query {
        Some(q) if diags.is_empty() => Ok(SurfaceProgram { defs, query: q }),
        None if diags.is_empty() => {
            let end = forms.last().map(|f| f.span.end).unwrap_or(Pos {
                offset: 0,
                line: 1,
                col: 1,
            });
            Err(vec![Diagnostic::error(
                DiagCode::BadForm,
                Span::new(end, end),
                "missing `run*` query",
            )])
        }
        _ => Err(diags),
    }
}

fn ident(e: &SExpr, what: &str) -> PResult<Ident> {
    match e.as_sym() {
        Some(s) if s != "." => Ok(Ident {
            name: s.into(),
            span: e.span,
        }),
        _ => bad(e.span, format!("expected {what} name, found `{e}`")),
    }
}

fn idents(e: &SExpr, what: &str) -> PResult<Vec<Ident>> {
    match e.as_list() {
        Some(items) => items.iter().map(|x| ident(x, what)).collect(),
        None => bad(e.span, format!("expected a list of {what} names")),
    }
}

fn parse_defrel(form: &SExpr) -> PResult<RelDef> {
    let items = form.as_list().unwrap_or_default();
    let Some(header) = items.get(1) else {
        return bad(form.span, "defrel needs a `(name param ...)` header");
    };
    let Some((name, params)) = header.as_list().and_then(|h| h.split_first()) else {
        return bad(header.span, "defrel needs a `(name param ...)` header");
    };
    let name = ident(name, "relation")?;
    if RESERVED.contains(&&*name.name) {
        return bad(name.span, format!("`{}` is reserved", name.name));
    }
    let params = params
        .iter()
        .map(|p| ident(p, "parameter"))
        .collect::<PResult<Vec<_>>>()?;
    let body = goal_seq(&items[2..], form.span, "defrel")?;
    Ok(RelDef {
        name,
        params,
        body,
        span: form.span,
    })
}

fn parse_run(form: &SExpr) -> PResult<Query> {
    let items = form.as_list().unwrap_or_default();
    let (count, rest) = if form.head() == Some("run*") {
        (RunCount::All, &items[1..])
    } else {
        match items.get(1).map(|e| &e.kind) {
            Some(SExprKind::Int(n)) if *n >= 0 => (RunCount::Bounded(*n as u64), &items[2..]),
            Some(SExprKind::Sym(s)) if s == "*" => (RunCount::All, &items[2..]),
            _ => return bad(form.span, "`run` needs a non-negative answer count"),
        }
    };
    let Some(vars_form) = rest.first() else {
        return bad(form.span, "query needs a variable list");
    };
    let vars = if vars_form.as_sym().is_some() {
        vec![ident(vars_form, "query variable")?]
    } else {
        idents(vars_form, "query variable")?
    };
    if vars.is_empty() {
        return bad(vars_form.span, "query needs at least one variable");
    }
    let body = goal_seq(&rest[1..], form.span, "query")?;
    Ok(Query {
        count,
        vars,
        body,
        span: form.span,
    })
}

fn goal_seq(items: &[SExpr], owner: Span, what: &str) -> PResult<Vec<SGoal>> {
    if items.is_empty() {
        return bad(owner, format!("{what} body needs at least one goal"));
    }
    items.iter().map(goal).collect()
}

pub fn goal(e: &SExpr) -> PResult<SGoal> {
    let kind = match &e.kind {
        SExprKind::Sym(s) if s == "succeed" => SGoalKind::Succeed,
        SExprKind::List(items, None) if !items.is_empty() => {
            let Some(head) = items[0].as_sym() else {
                return bad(items[0].span, format!("expected a goal, found `{e}`"));
            };
            let args = &items[1..];
            match head {
                "==" => {
                    if args.len() != 2 {
                        return bad(e.span, "`==` takes exactly two terms");
                    }
                    SGoalKind::Unify(term(&args[0])?, term(&args[1])?)
                }
                "conde" => {
                    if args.is_empty() {
                        return bad(e.span, "`conde` needs at least one clause");
                    }
                    let clauses = args
                        .iter()
                        .map(|c| match c.as_list() {
                            Some([]) => bad(c.span, "empty conde clause"),
                            Some(goals) => Ok(Clause {
                                goals: goals.iter().map(goal).collect::<PResult<_>>()?,
                                span: c.span,
                            }),
                            None => bad(c.span, "conde clause must be a list of goals"),
                        })
                        .collect::<PResult<_>>()?;
                    SGoalKind::Conde(clauses)
                }
                "fresh" => {
                    let Some(vars) = args.first() else {
                        return bad(e.span, "`fresh` needs a variable list");
                    };
                    let vars = idents(vars, "fresh variable")?;
                    SGoalKind::Fresh(vars, goal_seq(&args[1..], e.span, "fresh")?)
                }
                "defrel" | "run*" | "run" => {
                    return bad(e.span, format!("misplaced `{head}` in goal position"))
                }
                "succeed" | "quote" | "quasiquote" | "unquote" | "." => {
                    return bad(e.span, format!("expected a goal, found `{e}`"))
                }
                _ => SGoalKind::Call(
                    Ident {
                        name: head.into(),
                        span: items[0].span,
                    },
                    args.iter().map(term).collect::<PResult<_>>()?,
                ),
            }
        }
        _ => return bad(e.span, format!("expected a goal, found `{e}`")),
    };
    Ok(SGoal { kind, span: e.span })
}

fn quoted_arg<'a>(e: &'a SExpr, items: &'a [SExpr], name: &str) -> PResult<&'a SExpr> {
    match items {
        [_, x] => Ok(x),
        _ => bad(e.span, format!("`{name}` takes exactly one datum")),
    }
}

pub fn term(e: &SExpr) -> PResult<STerm> {
    let kind = match &e.kind {
        SExprKind::Sym(s) if s == "." => return bad(e.span, "unexpected `.`"),
        SExprKind::Sym(s) => STermKind::Var(Sym::from(s.as_str())),
        SExprKind::Int(n) => STermKind::Const(Atom::Int(*n)),
        SExprKind::Bool(b) => STermKind::Const(Atom::Bool(*b)),
        SExprKind::List(items, None) if items.is_empty() => STermKind::Const(Atom::Nil),
        SExprKind::List(items, None) => match e.head() {
            Some("quote") => return datum(quoted_arg(e, items, "quote")?, None),
            Some("quasiquote") => {
                return datum(quoted_arg(e, items, "quasiquote")?, Some(Quasi))
            }
            Some("unquote") => return bad(e.span, "unquote outside of quasiquote"),
            _ => {
                return bad(
                    e.span,
                    format!("unsupported term `{e}`; use quote or quasiquote for data"),
                )
            }
        },
        SExprKind::List(_, Some(_)) => return bad(e.span, format!("unsupported term `{e}`")),
    };
    Ok(STerm { kind, span: e.span })
}

#[derive(Clone, Copy)]
struct Quasi;

/// Converts quoted data. Inside quasiquote, `(unquote t)` escapes to a term.
fn datum(e: &SExpr, quasi: Option<Quasi>) -> PResult<STerm> {
    let kind = match &e.kind {
        SExprKind::Sym(s) => STermKind::Const(Atom::Sym(Sym::from(s.as_str()))),
        SExprKind::Int(n) => STermKind::Const(Atom::Int(*n)),
        SExprKind::Bool(b) => STermKind::Const(Atom::Bool(*b)),
        SExprKind::List(items, tail) => {
            if let (Some(Quasi), None) = (quasi, tail) {
                match e.head() {
                    Some("unquote") => {
                        let inner = quoted_arg(e, items, "unquote")?;
                        return term(inner);
                    }
                    Some("quasiquote") => return bad(e.span, "nested quasiquote is not supported"),
                    _ => {}
                }
            }
            let mut acc = match tail {
                Some(t) => datum(t, quasi)?,
                None => STerm {
                    kind: STermKind::Const(Atom::Nil),
                    span: Span::new(e.span.end, e.span.end),
                },
            };
            for item in items.iter().rev() {
                let head = datum(item, quasi)?;
                let span = Span::new(head.span.start, e.span.end);
                acc = STerm {
                    kind: STermKind::Pair(Box::new(head), Box::new(acc)),
                    span,
                };
            }
            return Ok(STerm {
                kind: acc.kind,
                span: e.span,
            });
        }
    };
    Ok(STerm { kind, span: e.span })
}
