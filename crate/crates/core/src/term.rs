//! Terms, substitutions, walking and unification.

use std::fmt;
use std::sync::Arc;

use crate::plist::PList;

pub type Sym = Arc<str>;

/// Index of a logic variable; displayed as `#(n)`.
pub type LVar = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Nil,
    Sym(Sym),
    Int(i64),
    Bool(bool),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Const(Atom),
    /// Source-level variable; never present in a runtime state.
    Syn(Sym),
    Var(LVar),
    Pair(Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn nil() -> Term {
        Term::Const(Atom::Nil)
    }

    pub fn sym(s: &str) -> Term {
        Term::Const(Atom::Sym(s.into()))
    }

    pub fn int(n: i64) -> Term {
        Term::Const(Atom::Int(n))
    }

    pub fn syn(s: &str) -> Term {
        Term::Syn(s.into())
    }

    pub fn pair(head: Term, tail: Term) -> Term {
        Term::Pair(Arc::new(head), Arc::new(tail))
    }

    /// Proper list of the given items.
    pub fn list<I>(items: I) -> Term
    where
        I: IntoIterator<Item = Term>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(Term::nil(), |tail, head| Term::pair(head, tail))
    }

    /// Calls `f` on every logic variable index, left to right.
    pub fn for_each_var(&self, f: &mut impl FnMut(LVar)) {
        match self {
            Term::Var(v) => f(*v),
            Term::Pair(h, t) => {
                h.for_each_var(f);
                t.for_each_var(f);
            }
            Term::Const(_) | Term::Syn(_) => {}
        }
    }

    pub fn for_each_syn(&self, f: &mut impl FnMut(&Sym)) {
        match self {
            Term::Syn(s) => f(s),
            Term::Pair(h, t) => {
                h.for_each_syn(f);
                t.for_each_syn(f);
            }
            Term::Const(_) | Term::Var(_) => {}
        }
    }

    pub fn has_syn(&self) -> bool {
        let mut found = false;
        self.for_each_syn(&mut |_| found = true);
        found
    }

    pub fn max_var(&self) -> Option<LVar> {
        let mut max = None;
        self.for_each_var(&mut |v| max = max.max(Some(v)));
        max
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Pair(h, t) => 1 + h.size() + t.size(),
            _ => 1,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Nil => f.write_str("()"),
            Atom::Sym(s) => f.write_str(s),
            Atom::Int(n) => write!(f, "{n}"),
            Atom::Bool(true) => f.write_str("#t"),
            Atom::Bool(false) => f.write_str("#f"),
        }
    }
}

/// Data notation: `cat`, `(dog cat)`, `(#(1) . #(2))`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(a) => a.fmt(f),
            Term::Syn(s) => f.write_str(s),
            Term::Var(v) => write!(f, "#({v})"),
            Term::Pair(head, tail) => {
                write!(f, "({head}")?;
                let mut rest: &Term = tail;
                loop {
                    match rest {
                        Term::Pair(h, t) => {
                            write!(f, " {h}")?;
                            rest = t;
                        }
                        Term::Const(Atom::Nil) => break,
                        other => {
                            write!(f, " . {other}")?;
                            break;
                        }
                    }
                }
                f.write_str(")")
            }
        }
    }
}

/// Triangular substitution, extension-ordered. A variable is bound at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst(PList<(LVar, Term)>);

impl Subst {
    pub fn new() -> Self {
        Subst(PList::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lookup(&self, v: LVar) -> Option<&Term> {
        self.0
            .iter_rev()
            .find_map(|(k, t)| (*k == v).then_some(t))
    }

    /// Bindings in the order they were made.
    pub fn bindings(&self) -> Vec<&(LVar, Term)> {
        self.0.to_vec()
    }

    /// Whether `self` is `base` plus zero or more further bindings.
    pub fn extends(&self, base: &Subst) -> bool {
        self.0.extends(&base.0)
    }

    /// Adds a binding without checks. Callers ensure `v` is unbound.
    pub fn extend(&self, v: LVar, t: Term) -> Subst {
        debug_assert!(self.lookup(v).is_none(), "rebinding #({v})");
        Subst(self.0.push((v, t)))
    }

    pub fn walk(&self, t: &Term) -> Term {
        let mut cur = t;
        while let Term::Var(v) = cur {
            match self.lookup(*v) {
                Some(bound) => cur = bound,
                None => break,
            }
        }
        cur.clone()
    }

    /// Fully resolves `t`, including inside pairs.
    pub fn walk_star(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Pair(h, tl) => Term::pair(self.walk_star(&h), self.walk_star(&tl)),
            other => other,
        }
    }

    /// True iff `v` occurs in `walk*(t)`.
    pub fn occurs(&self, v: LVar, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => w == v,
            Term::Pair(h, tl) => self.occurs(v, &h) || self.occurs(v, &tl),
            Term::Const(_) | Term::Syn(_) => false,
        }
    }

    /// Most general unifier extension, with occurs check.
    pub fn unify(&self, a: &Term, b: &Term) -> Option<Subst> {
        let a = self.walk(a);
        let b = self.walk(b);
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => Some(self.clone()),
            (Term::Var(x), _) => (!self.occurs(*x, &b)).then(|| self.extend(*x, b.clone())),
            (_, Term::Var(y)) => (!self.occurs(*y, &a)).then(|| self.extend(*y, a.clone())),
            (Term::Pair(ah, at), Term::Pair(bh, bt)) => self.unify(ah, bh)?.unify(at, bt),
            (Term::Const(x), Term::Const(y)) => (x == y).then(|| self.clone()),
            (Term::Syn(s), _) | (_, Term::Syn(s)) => {
                panic!("unify on unlowered syntactic variable `{s}`")
            }
            _ => None,
        }
    }
}

/// Outcome of a unification attempt together with the walked pair compared.
#[derive(Clone, Debug)]
pub struct Unification {
    pub subst: Option<Subst>,
    pub left: Term,
    pub right: Term,
}

pub fn unify(t1: &Term, t2: &Term, subst: &Subst) -> Unification {
    Unification {
        subst: subst.unify(t1, t2),
        left: subst.walk(t1),
        right: subst.walk(t2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(bindings: &[(LVar, Term)]) -> Subst {
        bindings
            .iter()
            .fold(Subst::new(), |acc, (v, t)| acc.extend(*v, t.clone()))
    }

    #[test]
    fn walk_examples() {
        let th = s(&[(0, Term::sym("cat"))]);
        assert_eq!(th.walk(&Term::Var(0)), Term::sym("cat"));
        assert_eq!(th.walk(&Term::sym("dog")), Term::sym("dog"));
        let chain = s(&[(0, Term::Var(1)), (1, Term::sym("cat"))]);
        assert_eq!(chain.walk(&Term::Var(0)), Term::sym("cat"));
    }

    #[test]
    fn occurs_examples() {
        assert!(!Subst::new().occurs(0, &Term::sym("cat")));
        assert!(Subst::new().occurs(0, &Term::pair(Term::sym("a"), Term::Var(0))));
        let th = s(&[(1, Term::pair(Term::Var(0), Term::sym("b")))]);
        assert!(th.occurs(0, &Term::Var(1)));
    }

    #[test]
    fn unify_examples() {
        let r = unify(&Term::Var(0), &Term::sym("cat"), &Subst::new());
        assert_eq!(r.subst.unwrap(), s(&[(0, Term::sym("cat"))]));

        let th = s(&[(3, Term::sym("x"))]);
        assert_eq!(th.unify(&Term::sym("cat"), &Term::sym("cat")).unwrap(), th);

        let got = Subst::new()
            .unify(
                &Term::pair(Term::Var(1), Term::Var(2)),
                &Term::pair(Term::sym("dog"), Term::nil()),
            )
            .unwrap();
        assert_eq!(got, s(&[(1, Term::sym("dog")), (2, Term::nil())]));

        let cyc = Subst::new().unify(&Term::Var(0), &Term::pair(Term::sym("a"), Term::Var(0)));
        assert!(cyc.is_none());
    }

    #[test]
    fn unify_reports_walked_terms() {
        let th = s(&[(0, Term::list([Term::sym("dog")]))]);
        let r = unify(&Term::pair(Term::Var(1), Term::Var(2)), &Term::Var(0), &th);
        assert_eq!(r.left, Term::pair(Term::Var(1), Term::Var(2)));
        assert_eq!(r.right, Term::list([Term::sym("dog")]));
    }

    #[test]
    fn display() {
        assert_eq!(Term::list([Term::sym("dog"), Term::sym("cat")]).to_string(), "(dog cat)");
        assert_eq!(Term::pair(Term::Var(1), Term::Var(2)).to_string(), "(#(1) . #(2))");
        assert_eq!(Term::nil().to_string(), "()");
        assert_eq!(
            Term::pair(Term::int(1), Term::pair(Term::Const(Atom::Bool(true)), Term::Var(0)))
                .to_string(),
            "(1 #t . #(0))"
        );
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            (0u32..4).prop_map(Term::Var),
            prop_oneof![Just("a"), Just("b")].prop_map(Term::sym),
            Just(Term::nil()),
        ];
        leaf.prop_recursive(4, 16, 2, |inner| {
            (inner.clone(), inner).prop_map(|(h, t)| Term::pair(h, t))
        })
    }

    fn arb_subst() -> impl Strategy<Value = Subst> {
        proptest::collection::vec((arb_term(), arb_term()), 0..4).prop_map(|eqs| {
            eqs.iter().fold(Subst::new(), |th, (a, b)| th.unify(a, b).unwrap_or(th))
        })
    }

    proptest! {
        #[test]
        fn unify_is_symmetric(a in arb_term(), b in arb_term(), th in arb_subst()) {
            let ab = th.unify(&a, &b);
            let ba = th.unify(&b, &a);
            prop_assert_eq!(ab.is_some(), ba.is_some());
            // var-var bindings may point either way; compare solution sets
            if let (Some(x), Some(y)) = (ab, ba) {
                for (u, w) in [(&x, &y), (&y, &x)] {
                    for (v, t) in u.bindings().into_iter().cloned() {
                        prop_assert_eq!(w.walk_star(&Term::Var(v)), w.walk_star(&t));
                    }
                }
            }
        }

        #[test]
        fn unify_success_equates(a in arb_term(), b in arb_term(), th in arb_subst()) {
            if let Some(th2) = th.unify(&a, &b) {
                prop_assert_eq!(th2.walk_star(&a), th2.walk_star(&b));
                prop_assert!(th2.extends(&th));
                // no rebinding, and walk* terminates
                for (v, _) in th2.bindings() {
                    prop_assert!(th2.bindings().iter().filter(|(w, _)| w == v).count() == 1);
                    prop_assert!(!th2.occurs(*v, th2.lookup(*v).unwrap()));
                }
            }
        }
    }
}
