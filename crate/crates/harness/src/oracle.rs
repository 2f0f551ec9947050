//! A conventional stream-based microKanren, written independently of the
//! tree semantics: its own terms, substitution, unification and
//! reification, evaluating the surface AST directly.

use std::cell::Cell;
use std::collections::HashMap;
use std::rc::Rc;

use mkstep_core::syntax::ast::{SGoal, SGoalKind, STerm, STermKind, SurfaceProgram};
use mkstep_core::Atom;

#[derive(Clone, Debug, PartialEq, Eq)]
enum T {
    Atom(Atom),
    Var(usize),
    Pair(Rc<T>, Rc<T>),
}

#[derive(Clone, Debug)]
struct St {
    subst: Rc<HashMap<usize, T>>,
    next: usize,
    depth: u32,
}

fn walk(t: &T, s: &HashMap<usize, T>) -> T {
    let mut t = t.clone();
    while let T::Var(v) = t {
        match s.get(&v) {
            Some(b) => t = b.clone(),
            None => break,
        }
    }
    t
}

fn occurs(v: usize, t: &T, s: &HashMap<usize, T>) -> bool {
    match walk(t, s) {
        T::Var(w) => v == w,
        T::Pair(a, b) => occurs(v, &a, s) || occurs(v, &b, s),
        T::Atom(_) => false,
    }
}

fn unify(a: &T, b: &T, s: &mut HashMap<usize, T>) -> bool {
    let (a, b) = (walk(a, s), walk(b, s));
    match (&a, &b) {
        (T::Var(x), T::Var(y)) if x == y => true,
        (T::Var(x), t) | (t, T::Var(x)) => {
            if occurs(*x, t, s) {
                return false;
            }
            s.insert(*x, t.clone());
            true
        }
        (T::Pair(a1, d1), T::Pair(a2, d2)) => unify(a1, a2, s) && unify(d1, d2, s),
        (T::Atom(x), T::Atom(y)) => x == y,
        _ => false,
    }
}

enum Stream {
    Nil,
    Cons(St, Box<Stream>),
    Later(Box<dyn FnOnce() -> Stream>),
}

fn mplus(a: Stream, b: Stream) -> Stream {
    match a {
        Stream::Nil => b,
        Stream::Cons(x, rest) => Stream::Cons(x, Box::new(mplus(*rest, b))),
        Stream::Later(f) => Stream::Later(Box::new(move || mplus(b, f()))),
    }
}

type G = Rc<dyn Fn(St) -> Stream>;

fn bind(s: Stream, g: G) -> Stream {
    match s {
        Stream::Nil => Stream::Nil,
        Stream::Cons(x, rest) => {
            let head = g(x);
            mplus(head, bind(*rest, g))
        }
        Stream::Later(f) => Stream::Later(Box::new(move || bind(f(), g))),
    }
}

type Scope = Rc<HashMap<String, T>>;

struct Ctx {
    prog: SurfaceProgram,
    bound: u32,
    exhausted: Cell<bool>,
}

fn term(t: &STerm, scope: &Scope) -> T {
    match &t.kind {
        STermKind::Var(v) => scope
            .get(&**v)
            .cloned()
            .unwrap_or_else(|| panic!("oracle: unbound `{v}`")),
        STermKind::Const(a) => T::Atom(a.clone()),
        STermKind::Pair(h, tl) => T::Pair(Rc::new(term(h, scope)), Rc::new(term(tl, scope))),
    }
}

fn conj(cx: &Rc<Ctx>, gs: &[SGoal], scope: &Scope) -> G {
    let mut goals: Vec<G> = gs.iter().map(|g| goal(cx, g, scope)).collect();
    let first = goals.remove(0);
    goals.into_iter().fold(first, |acc, g| {
        Rc::new(move |st| bind(acc(st), g.clone()))
    })
}

fn goal(cx: &Rc<Ctx>, g: &SGoal, scope: &Scope) -> G {
    match &g.kind {
        SGoalKind::Succeed => Rc::new(|st| Stream::Cons(st, Box::new(Stream::Nil))),
        SGoalKind::Unify(a, b) => {
            let (a, b) = (term(a, scope), term(b, scope));
            Rc::new(move |st: St| {
                let mut s = (*st.subst).clone();
                if unify(&a, &b, &mut s) {
                    let st = St {
                        subst: Rc::new(s),
                        ..st
                    };
                    Stream::Cons(st, Box::new(Stream::Nil))
                } else {
                    Stream::Nil
                }
            })
        }
        SGoalKind::Conde(clauses) => {
            let gs: Vec<G> = clauses.iter().map(|c| conj(cx, &c.goals, scope)).collect();
            Rc::new(move |st: St| {
                gs.iter()
                    .rev()
                    .fold(Stream::Nil, |acc, g| mplus(g(st.clone()), acc))
            })
        }
        SGoalKind::Fresh(vars, body) => {
            let (cx, vars, body, scope) = (cx.clone(), vars.clone(), body.clone(), scope.clone());
            Rc::new(move |st: St| {
                let mut inner = (*scope).clone();
                for (k, v) in vars.iter().enumerate() {
                    inner.insert(v.name.to_string(), T::Var(st.next + k));
                }
                let st = St {
                    next: st.next + vars.len(),
                    ..st
                };
                if body.is_empty() {
                    return Stream::Cons(st, Box::new(Stream::Nil));
                }
                conj(&cx, &body, &Rc::new(inner))(st)
            })
        }
        SGoalKind::Call(name, args) => {
            let def = cx
                .prog
                .defs
                .iter()
                .find(|d| d.name.name == name.name)
                .unwrap_or_else(|| panic!("oracle: unknown relation `{}`", name.name));
            let params: Vec<String> = def.params.iter().map(|p| p.name.to_string()).collect();
            let actual: Vec<T> = args.iter().map(|a| term(a, scope)).collect();
            let rel = name.name.to_string();
            let cx = cx.clone();
            Rc::new(move |st: St| {
                if st.depth >= cx.bound {
                    cx.exhausted.set(true);
                    return Stream::Nil;
                }
                let def = cx
                    .prog
                    .defs
                    .iter()
                    .find(|d| *d.name.name == *rel)
                    .expect("checked above");
                let inner: Scope = Rc::new(params.iter().cloned().zip(actual.clone()).collect());
                let body = conj(&cx, &def.body, &inner);
                let st = St {
                    depth: st.depth + 1,
                    ..st
                };
                Stream::Later(Box::new(move || body(st)))
            })
        }
    }
}

fn walk_star(t: &T, s: &HashMap<usize, T>) -> T {
    match walk(t, s) {
        T::Pair(a, b) => T::Pair(Rc::new(walk_star(&a, s)), Rc::new(walk_star(&b, s))),
        other => other,
    }
}

fn render(t: &T, names: &mut Vec<usize>, out: &mut String) {
    match t {
        T::Var(v) => {
            let k = names.iter().position(|n| n == v).unwrap_or_else(|| {
                names.push(*v);
                names.len() - 1
            });
            out.push_str(&format!("_{k}"));
        }
        T::Atom(Atom::Nil) => out.push_str("()"),
        T::Atom(Atom::Sym(s)) => out.push_str(s),
        T::Atom(Atom::Int(n)) => out.push_str(&n.to_string()),
        T::Atom(Atom::Bool(b)) => out.push_str(if *b { "#t" } else { "#f" }),
        T::Pair(h, tl) => {
            out.push('(');
            render(h, names, out);
            let mut rest: &T = tl;
            loop {
                match rest {
                    T::Pair(h, tl) => {
                        out.push(' ');
                        render(h, names, out);
                        rest = tl;
                    }
                    T::Atom(Atom::Nil) => break,
                    other => {
                        out.push_str(" . ");
                        render(other, names, out);
                        break;
                    }
                }
            }
            out.push(')');
        }
    }
}

/// Reified answers as text, sorted, so equal multisets compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleAnswer {
    pub answers: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("relation unfolding bound {bound} exhausted after {found} answers")]
pub struct BoundExhausted {
    pub bound: u32,
    pub found: usize,
}

/// Answers of `p`'s query. Each branch may unfold at most `depth_bound`
/// nested relation calls; hitting that bound anywhere is reported as
/// [`BoundExhausted`] rather than as a shorter answer list.
pub fn oracle_answers(p: &SurfaceProgram, depth_bound: u32) -> Result<OracleAnswer, BoundExhausted> {
    let cx = Rc::new(Ctx {
        prog: p.clone(),
        bound: depth_bound,
        exhausted: Cell::new(false),
    });
    let q = &p.query;
    let mut scope = HashMap::new();
    for (k, v) in q.vars.iter().enumerate() {
        scope.insert(v.name.to_string(), T::Var(k));
    }
    let init = St {
        subst: Rc::new(HashMap::new()),
        next: q.vars.len(),
        depth: 0,
    };
    let g = conj(&cx, &q.body, &Rc::new(scope));
    let mut stream = g(init);
    let mut answers = Vec::new();
    loop {
        stream = match stream {
            Stream::Nil => break,
            Stream::Cons(st, rest) => {
                let vals: Vec<T> = (0..q.vars.len()).map(|k| walk_star(&T::Var(k), &st.subst)).collect();
                let tuple = if vals.len() == 1 {
                    vals.into_iter().next().unwrap()
                } else {
                    vals.into_iter().rev().fold(T::Atom(Atom::Nil), |acc, v| {
                        T::Pair(Rc::new(v), Rc::new(acc))
                    })
                };
                let mut text = String::new();
                render(&tuple, &mut Vec::new(), &mut text);
                answers.push(text);
                *rest
            }
            Stream::Later(f) => f(),
        };
    }
    if cx.exhausted.get() {
        return Err(BoundExhausted {
            bound: depth_bound,
            found: answers.len(),
        });
    }
    answers.sort();
    Ok(OracleAnswer { answers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mkstep_core::syntax::frontend;

    fn run(src: &str) -> Result<OracleAnswer, BoundExhausted> {
        oracle_answers(&frontend(src).unwrap(), 50)
    }

    #[test]
    fn examples() {
        let animals = "(defrel (same x y) (== x y))
            (run* (q) (conde [(conde [(same q 'turtle)] [(same q 'cat)] [(== q 'dog)])]
                             [(same q 'fish)]))";
        assert_eq!(run(animals).unwrap().answers, ["cat", "dog", "fish", "turtle"]);
        assert!(run("(run* (q) (== 'a 'b))").unwrap().answers.is_empty());
        let appendoh = "(defrel (appendoh l s ls)
              (conde ((== '() l) (== s ls))
                     ((fresh (a d res) (== `(,a . ,d) l) (== `(,a . ,res) ls) (appendoh d s res)))))
            (run* (q) (appendoh '(dog) q '(dog cat)))";
        assert_eq!(run(appendoh).unwrap().answers, ["(cat)"]);
    }

    #[test]
    fn reify_names() {
        assert_eq!(
            run("(run* (q r) (fresh (x) (== q `(,x ,r ,x))))").unwrap().answers,
            ["((_0 _1 _0) _1)"]
        );
    }

    #[test]
    fn divergence_is_reported() {
        let src = "(defrel (loop x) (loop x)) (run* (q) (conde [(== q 1)] [(loop q)]))";
        let err = run(src).unwrap_err();
        assert_eq!(err.found, 1);
    }
}
