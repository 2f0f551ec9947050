//! Lowering of checked surface programs into the tagged core language.

use std::collections::BTreeMap;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::engine::Program;
use crate::goal::Goal;
use crate::rules::RuleId;
use crate::state::{State, Uid};
use crate::syntax::ast::*;
use crate::syntax::Span;
use crate::term::{LVar, Sym, Term};
use crate::tree::SearchTree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub params: Arc<[Sym]>,
    pub body: Arc<Goal>,
}

/// Relation environment, in definition order. Fixed for a whole run.
pub type RelEnv = IndexMap<Sym, Relation>;

/// Shared counter for goal and state UIDs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UidSource(Uid);

impl UidSource {
    pub fn starting_at(next: Uid) -> Self {
        UidSource(next)
    }

    pub fn fresh(&mut self) -> Uid {
        let u = self.0;
        self.0 += 1;
        u
    }

    pub fn peek(&self) -> Uid {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoalForm {
    Unify,
    Call,
    Conde,
    Sequence,
    Fresh,
    Query,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoalOrigin {
    pub span: Span,
    pub form: GoalForm,
}

/// Where a state came from. `rule` is `None` for the initial state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateOrigin {
    pub uid: Uid,
    pub rule: Option<RuleId>,
    pub step: u64,
    pub parent: Option<Uid>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub goals: BTreeMap<Uid, GoalOrigin>,
    pub states: Vec<StateOrigin>,
}

impl SourceMap {
    pub fn goal(&self, uid: Uid) -> Option<&GoalOrigin> {
        self.goals.get(&uid)
    }

    pub fn has_goal(&self, uid: Uid) -> bool {
        self.goals.contains_key(&uid)
    }

    /// Appends a runtime-created state; UIDs must arrive in increasing order.
    pub fn record_state(&mut self, origin: StateOrigin) {
        debug_assert!(self.states.last().is_none_or(|s| s.uid < origin.uid));
        self.states.push(origin);
    }

    /// State provenance entries created at or before `step`.
    pub fn states_until(&self, step: u64) -> &[StateOrigin] {
        let n = self.states.partition_point(|s| s.step <= step);
        &self.states[..n]
    }
}

#[derive(Clone, Debug)]
pub struct Lowered {
    pub program: Program,
    pub source_map: SourceMap,
    pub count: RunCount,
}

/// Lowers a checked program. `conde` and goal sequences become right-nested
/// binary disjunctions and conjunctions; the query becomes `∃ (vars) body`
/// paired with the initial state.
///
/// Panics on input that did not pass [`check`](crate::syntax::check).
pub fn lower(p: &SurfaceProgram) -> Lowered {
    let mut cx = Lowerer {
        uids: UidSource::default(),
        map: SourceMap::default(),
    };
    let mut env = RelEnv::new();
    for d in &p.defs {
        let body = cx.seq(&d.body);
        let prev = env.insert(
            d.name.name.clone(),
            Relation {
                params: d.params.iter().map(|i| i.name.clone()).collect(),
                body,
            },
        );
        assert!(prev.is_none(), "duplicate relation reached lowering");
    }

    let q = &p.query;
    let uid = cx.tag(q.span, GoalForm::Query);
    let query = Arc::new(Goal::Exists {
        vars: q.vars.iter().map(|i| i.name.clone()).collect(),
        body: cx.seq(&q.body),
        uid,
    });
    assert!(query.free_syn().is_empty(), "unbound variable reached lowering");

    let state_uid = cx.uids.fresh();
    cx.map.record_state(StateOrigin {
        uid: state_uid,
        rule: None,
        step: 0,
        parent: None,
    });
    let query_vars: Arc<[LVar]> = (0..q.vars.len() as LVar).collect();
    Lowered {
        program: Program {
            env: Arc::new(env),
            tree: SearchTree::leaf(query, State::initial(state_uid)),
            next_uid: cx.uids.peek(),
            query_vars,
        },
        source_map: cx.map,
        count: q.count,
    }
}

struct Lowerer {
    uids: UidSource,
    map: SourceMap,
}

impl Lowerer {
    fn tag(&mut self, span: Span, form: GoalForm) -> Uid {
        let uid = self.uids.fresh();
        self.map.goals.insert(uid, GoalOrigin { span, form });
        uid
    }

    /// Right-nested conjunction of a non-empty goal sequence.
    fn seq(&mut self, goals: &[SGoal]) -> Arc<Goal> {
        match goals {
            [] => panic!("empty goal sequence reached lowering"),
            [g] => self.goal(g),
            [g, rest @ ..] => {
                let span = g.span.join(rest.last().unwrap().span);
                let uid = self.tag(span, GoalForm::Sequence);
                let left = self.goal(g);
                let right = self.seq(rest);
                Arc::new(Goal::Conj { left, right, uid })
            }
        }
    }

    fn conde(&mut self, span: Span, clauses: &[Clause]) -> Arc<Goal> {
        match clauses {
            [] => panic!("empty conde reached lowering"),
            [c] => self.seq(&c.goals),
            [c, rest @ ..] => {
                let uid = self.tag(span, GoalForm::Conde);
                let left = self.seq(&c.goals);
                let right = self.conde(span, rest);
                Arc::new(Goal::Disj { left, right, uid })
            }
        }
    }

    fn goal(&mut self, g: &SGoal) -> Arc<Goal> {
        match &g.kind {
            SGoalKind::Succeed => Arc::new(Goal::Top),
            SGoalKind::Unify(a, b) => {
                let uid = self.tag(g.span, GoalForm::Unify);
                Arc::new(Goal::Unify {
                    left: lower_term(a),
                    right: lower_term(b),
                    uid,
                })
            }
            SGoalKind::Call(name, args) => {
                let uid = self.tag(g.span, GoalForm::Call);
                Arc::new(Goal::Call {
                    rel: name.name.clone(),
                    args: args.iter().map(lower_term).collect(),
                    uid,
                })
            }
            SGoalKind::Conde(clauses) => self.conde(g.span, clauses),
            SGoalKind::Fresh(vars, body) if vars.is_empty() => self.seq(body),
            SGoalKind::Fresh(vars, body) => {
                let uid = self.tag(g.span, GoalForm::Fresh);
                Arc::new(Goal::Exists {
                    vars: vars.iter().map(|i| i.name.clone()).collect(),
                    body: self.seq(body),
                    uid,
                })
            }
        }
    }
}

pub fn lower_term(t: &STerm) -> Term {
    match &t.kind {
        STermKind::Var(v) => Term::Syn(v.clone()),
        STermKind::Const(a) => Term::Const(a.clone()),
        STermKind::Pair(h, tl) => Term::pair(lower_term(h), lower_term(tl)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::frontend;

    fn lowered(src: &str) -> Lowered {
        lower(&frontend(src).unwrap())
    }

    fn query_body(l: &Lowered) -> Arc<Goal> {
        match &*l.program.tree {
            SearchTree::Leaf(g, _) => match &**g {
                Goal::Exists { body, .. } => body.clone(),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn same_cat_query() {
        let l = lowered("(defrel (same x y) (== x y)) (run* (p) (same p 'cat))");
        assert_eq!(l.program.tree.to_string(), "∃ (p) same(p, 'cat) (∅, 0)");
        assert_eq!(&*l.program.query_vars, &[0]);
        // two goals (== and same) + query binder + initial state
        assert_eq!(l.program.next_uid, 4);
        assert_eq!(l.source_map.goals.len(), 3);
        assert_eq!(l.source_map.states[0].uid, 3);
    }

    #[test]
    fn conde_nests_right() {
        let l = lowered("(run* (q) (conde [(== q 'a)] [(== q 'b)] [(== q 'c)]))");
        let body = query_body(&l);
        assert_eq!(body.to_string(), "(q ≡ 'a ∨ (q ≡ 'b ∨ q ≡ 'c))");
        let mut disj = 0;
        body.visit(&mut |g| disj += matches!(g, Goal::Disj { .. }) as usize);
        assert_eq!(disj, 2);
    }

    #[test]
    fn sequences_nest_right_and_empty_fresh_vanishes() {
        let l = lowered("(run* (q) (fresh () succeed))");
        assert_eq!(*query_body(&l), Goal::Top);
        let l = lowered("(run* (q) (== q 1) (== q 2) succeed)");
        assert_eq!(query_body(&l).to_string(), "(q ≡ 1 ∧ (q ≡ 2 ∧ ⊤))");
        let l = lowered("(run* (q) (conde [(== q 1) (== q 2)]))");
        assert_eq!(query_body(&l).to_string(), "(q ≡ 1 ∧ q ≡ 2)");
    }

    #[test]
    fn uids_unique_and_mapped() {
        let l = lowered(
            "(defrel (appendo l s ls)
               (conde [(== '() l) (== s ls)]
                      [(fresh (a d res) (== `(,a . ,d) l) (== `(,a . ,res) ls) (appendo d s res))]))
             (run* (q) (appendo '(dog) q '(dog cat)))",
        );
        let mut seen = Vec::new();
        let mut visit = |g: &Goal| {
            if let Some(u) = g.uid() {
                seen.push(u);
            }
        };
        for rel in l.program.env.values() {
            rel.body.visit(&mut visit);
        }
        if let SearchTree::Leaf(g, _) = &*l.program.tree {
            g.visit(&mut visit);
        }
        let n = seen.len();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), n);
        assert!(seen.iter().all(|u| l.source_map.has_goal(*u)));
        assert_eq!(l.program.next_uid as usize, n + 1);
    }
}
