use std::collections::HashMap;

use crate::plist::PList;
use crate::term::{LVar, Subst, Term};

/// Program-wide unique identifier for goals and states.
pub type Uid = u64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrailEntry {
    pub left: Term,
    pub right: Term,
    pub goal_uid: Uid,
}

/// `(θ, i, τ, c)`: substitution, next fresh index, trail, state UID.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub subst: Subst,
    pub counter: LVar,
    pub trail: PList<TrailEntry>,
    pub uid: Uid,
}

impl State {
    pub fn initial(uid: Uid) -> Self {
        State {
            subst: Subst::new(),
            counter: 0,
            trail: PList::new(),
            uid,
        }
    }

    pub fn with_uid(&self, uid: Uid) -> Self {
        State {
            uid,
            ..self.clone()
        }
    }

    pub fn trail_entries(&self) -> Vec<&TrailEntry> {
        self.trail.to_vec()
    }

    /// Largest logic variable index mentioned by the substitution or trail.
    pub fn max_var(&self) -> Option<LVar> {
        let mut max = None;
        let mut see = |v| max = std::cmp::max(max, Some(v));
        for (v, t) in self.subst.bindings() {
            see(*v);
            t.for_each_var(&mut see);
        }
        for e in self.trail.iter_rev() {
            e.left.for_each_var(&mut see);
            e.right.for_each_var(&mut see);
        }
        max
    }

    /// Query variables' bindings with unbound variables renamed `_0`, `_1`, …
    /// in first-occurrence order. A single query variable yields its value
    /// directly; several yield a list.
    pub fn reify(&self, query_vars: &[LVar]) -> Term {
        let resolved = if query_vars.len() == 1 {
            self.subst.walk_star(&Term::Var(query_vars[0]))
        } else {
            self.subst
                .walk_star(&Term::list(query_vars.iter().map(|v| Term::Var(*v))))
        };
        let mut names = HashMap::new();
        rename(&resolved, &mut names)
    }
}

fn rename(t: &Term, names: &mut HashMap<LVar, usize>) -> Term {
    match t {
        Term::Var(v) => {
            let next = names.len();
            let n = *names.entry(*v).or_insert(next);
            Term::sym(&format!("_{n}"))
        }
        Term::Pair(h, tl) => {
            let h = rename(h, names);
            Term::pair(h, rename(tl, names))
        }
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reify_examples() {
        let mut st = State::initial(0);
        st.counter = 1;
        assert_eq!(st.reify(&[0]), Term::sym("_0"));

        st.subst = Subst::new().extend(0, Term::sym("cat"));
        assert_eq!(st.reify(&[0]), Term::sym("cat"));
        assert_eq!(st.reify(&[0]), st.reify(&[0]));

        let mut st = State::initial(0);
        st.counter = 2;
        st.subst = Subst::new().extend(0, Term::pair(Term::Var(1), Term::sym("b")));
        assert_eq!(st.reify(&[0]), Term::pair(Term::sym("_0"), Term::sym("b")));
    }

    #[test]
    fn reify_names_in_first_occurrence_order() {
        let mut st = State::initial(0);
        st.counter = 4;
        st.subst = Subst::new()
            .extend(0, Term::list([Term::Var(3), Term::Var(2), Term::Var(3)]))
            .extend(1, Term::Var(2));
        assert_eq!(st.reify(&[0, 1]).to_string(), "((_0 _1 _0) _1)");
    }
}
