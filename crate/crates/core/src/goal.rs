//! Core goal language.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::state::Uid;
use crate::term::{Atom, LVar, Sym, Term};

/// Tagged core goal. Every goal except `Top` carries a UID assigned at
/// lowering; copies produced by relation expansion keep the UID of the
/// source goal they came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Top,
    Unify {
        left: Term,
        right: Term,
        uid: Uid,
    },
    Call {
        rel: Sym,
        args: Arc<[Term]>,
        uid: Uid,
    },
    Disj {
        left: Arc<Goal>,
        right: Arc<Goal>,
        uid: Uid,
    },
    Conj {
        left: Arc<Goal>,
        right: Arc<Goal>,
        uid: Uid,
    },
    Exists {
        vars: Arc<[Sym]>,
        body: Arc<Goal>,
        uid: Uid,
    },
}

impl Goal {
    pub fn uid(&self) -> Option<Uid> {
        match self {
            Goal::Top => None,
            Goal::Unify { uid, .. }
            | Goal::Call { uid, .. }
            | Goal::Disj { uid, .. }
            | Goal::Conj { uid, .. }
            | Goal::Exists { uid, .. } => Some(*uid),
        }
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Goal::Top)
    }

    pub fn is_call(&self) -> bool {
        matches!(self, Goal::Call { .. })
    }

    /// Visits every goal node, outermost first.
    pub fn visit(&self, f: &mut impl FnMut(&Goal)) {
        f(self);
        match self {
            Goal::Disj { left, right, .. } | Goal::Conj { left, right, .. } => {
                left.visit(f);
                right.visit(f);
            }
            Goal::Exists { body, .. } => body.visit(f),
            Goal::Top | Goal::Unify { .. } | Goal::Call { .. } => {}
        }
    }

    pub fn for_each_term(&self, f: &mut impl FnMut(&Term)) {
        self.visit(&mut |g| match g {
            Goal::Unify { left, right, .. } => {
                f(left);
                f(right);
            }
            Goal::Call { args, .. } => args.iter().for_each(&mut *f),
            _ => {}
        });
    }

    /// Syntactic variables not bound by an enclosing `Exists`.
    pub fn free_syn(&self) -> Vec<Sym> {
        fn go(g: &Goal, bound: &mut Vec<Sym>, out: &mut Vec<Sym>) {
            let term = |t: &Term, bound: &Vec<Sym>, out: &mut Vec<Sym>| {
                t.for_each_syn(&mut |s| {
                    if !bound.contains(s) && !out.contains(s) {
                        out.push(s.clone());
                    }
                })
            };
            match g {
                Goal::Top => {}
                Goal::Unify { left, right, .. } => {
                    term(left, bound, out);
                    term(right, bound, out);
                }
                Goal::Call { args, .. } => args.iter().for_each(|a| term(a, bound, out)),
                Goal::Disj { left, right, .. } | Goal::Conj { left, right, .. } => {
                    go(left, bound, out);
                    go(right, bound, out);
                }
                Goal::Exists { vars, body, .. } => {
                    let mark = bound.len();
                    bound.extend(vars.iter().cloned());
                    go(body, bound, out);
                    bound.truncate(mark);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn max_var(&self) -> Option<LVar> {
        let mut max = None;
        self.for_each_term(&mut |t| max = max.max(t.max_var()));
        max
    }

    /// Simultaneous substitution of `params` by `args`, respecting shadowing
    /// by inner `Exists` binders.
    pub fn substitute(self: &Arc<Goal>, params: &[Sym], args: &[Term]) -> Arc<Goal> {
        assert_eq!(params.len(), args.len(), "substitution arity mismatch");
        let map: HashMap<&str, &Term> = params
            .iter()
            .map(|p| &**p)
            .zip(args.iter())
            .collect();
        subst_goal(self, &map)
    }
}

fn subst_term(t: &Term, map: &HashMap<&str, &Term>) -> Term {
    match t {
        Term::Syn(s) => map.get(&**s).map_or_else(|| t.clone(), |r| (*r).clone()),
        Term::Pair(h, tl) => Term::pair(subst_term(h, map), subst_term(tl, map)),
        Term::Const(_) | Term::Var(_) => t.clone(),
    }
}

fn subst_goal(g: &Arc<Goal>, map: &HashMap<&str, &Term>) -> Arc<Goal> {
    if map.is_empty() {
        return g.clone();
    }
    Arc::new(match &**g {
        Goal::Top => Goal::Top,
        Goal::Unify { left, right, uid } => Goal::Unify {
            left: subst_term(left, map),
            right: subst_term(right, map),
            uid: *uid,
        },
        Goal::Call { rel, args, uid } => Goal::Call {
            rel: rel.clone(),
            args: args.iter().map(|a| subst_term(a, map)).collect(),
            uid: *uid,
        },
        Goal::Disj { left, right, uid } => Goal::Disj {
            left: subst_goal(left, map),
            right: subst_goal(right, map),
            uid: *uid,
        },
        Goal::Conj { left, right, uid } => Goal::Conj {
            left: subst_goal(left, map),
            right: subst_goal(right, map),
            uid: *uid,
        },
        Goal::Exists { vars, body, uid } => {
            let mut inner = map.clone();
            for v in vars.iter() {
                inner.remove(&**v);
            }
            Goal::Exists {
                vars: vars.clone(),
                body: subst_goal(body, &inner),
                uid: *uid,
            }
        }
    })
}

/// Code-style term rendering: ground data is quoted (`'cat`, `'(dog cat)`),
/// partially instantiated pairs use list notation (`('dog . #(2))`).
pub struct Code<'a>(pub &'a Term);

fn is_ground(t: &Term) -> bool {
    match t {
        Term::Const(_) => true,
        Term::Pair(h, tl) => is_ground(h) && is_ground(tl),
        Term::Var(_) | Term::Syn(_) => false,
    }
}

impl fmt::Display for Code<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.0;
        match t {
            Term::Const(a @ (Atom::Int(_) | Atom::Bool(_))) => write!(f, "{a}"),
            _ if is_ground(t) => write!(f, "'{t}"),
            Term::Pair(head, tail) => {
                write!(f, "({}", Code(head))?;
                let mut rest: &Term = tail;
                loop {
                    match rest {
                        Term::Pair(h, tl) => {
                            write!(f, " {}", Code(h))?;
                            rest = tl;
                        }
                        Term::Const(Atom::Nil) => break,
                        other => {
                            write!(f, " . {}", Code(other))?;
                            break;
                        }
                    }
                }
                f.write_str(")")
            }
            other => write!(f, "{other}"),
        }
    }
}

/// Core notation: `⊤`, `t ≡ t`, `r(t, …)`, `(G ∨ G)`, `(G ∧ G)`, `∃ (x …) G`.
impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Top => f.write_str("⊤"),
            Goal::Unify { left, right, .. } => write!(f, "{} ≡ {}", Code(left), Code(right)),
            Goal::Call { rel, args, .. } => {
                write!(f, "{rel}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", Code(a))?;
                }
                f.write_str(")")
            }
            Goal::Disj { left, right, .. } => write!(f, "({left} ∨ {right})"),
            Goal::Conj { left, right, .. } => write!(f, "({left} ∧ {right})"),
            Goal::Exists { vars, body, .. } => {
                f.write_str("∃ (")?;
                for (i, v) in vars.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    f.write_str(v)?;
                }
                write!(f, ") {body}")
            }
        }
    }
}
