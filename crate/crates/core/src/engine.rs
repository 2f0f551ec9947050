//! Redex location and rule application.
//!
//! The next redex is found by skipping the answer-stream prefix (`+` cells
//! whose left child is an answer), testing the stream-level rules at the
//! stream tail, and then walking the active spine: `←` descends left, `→`
//! descends right and `×` descends into its tree. At every node the node
//! patterns are tested before descending.

use std::fmt;
use std::sync::Arc;

use crate::goal::Goal;
use crate::lower::RelEnv;
use crate::rules::{RuleId, RuleSet};
use crate::state::{State, TrailEntry, Uid};
use crate::term::{unify, LVar, Term};
use crate::tree::{SearchTree, Tree};

/// `prg Σ S` plus the UID counter and the logic variables of the query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub env: Arc<RelEnv>,
    pub tree: Tree,
    pub next_uid: Uid,
    pub query_vars: Arc<[LVar]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    /// Right child of a `+` answer cell.
    PlusTail,
    /// Active left child of `←`.
    Left,
    /// Active right child of `→`.
    Right,
    /// Tree child of `×`.
    ConjTree,
}

impl Selector {
    pub fn name(self) -> &'static str {
        match self {
            Selector::PlusTail => "plus_tail",
            Selector::Left => "left",
            Selector::Right => "right",
            Selector::ConjTree => "conj_tree",
        }
    }

    /// Index into [`SearchTree::children`].
    pub fn child_index(self) -> usize {
        match self {
            Selector::PlusTail | Selector::Right => 1,
            Selector::Left | Selector::ConjTree => 0,
        }
    }
}

/// Path from the root to a redex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FocusPath(pub Vec<Selector>);

impl FocusPath {
    pub fn resolve<'a>(&self, tree: &'a Tree) -> Option<&'a Tree> {
        self.0.iter().try_fold(tree, |t, sel| {
            let ok = matches!(
                (sel, &**t),
                (Selector::PlusTail, SearchTree::Plus(..))
                    | (Selector::Left, SearchTree::DisjL(..))
                    | (Selector::Right, SearchTree::DisjR(..))
                    | (Selector::ConjTree, SearchTree::Conj(..))
            );
            ok.then(|| t.children()[sel.child_index()])
        })
    }
}

impl fmt::Display for FocusPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.0.iter().map(|s| s.name()).collect();
        write!(f, "[{}]", names.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub path: FocusPath,
    pub rule: RuleId,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("stuck non-terminal program at {path}: {detail}")]
    Stuck { path: FocusPath, detail: String },
    #[error("relation `{0}` missing from the environment")]
    MissingRelation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MintedState {
    pub uid: Uid,
    pub parent: Uid,
}

/// State-level effects of one step, for UI subscriptions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StateEvents {
    pub minted: Vec<MintedState>,
    /// `(state uid, entry)` for each trail extension.
    pub trail: Vec<(Uid, TrailEntry)>,
}

#[derive(Clone, Debug)]
pub struct Step {
    pub rule: RuleId,
    pub path: FocusPath,
    pub program: Program,
    pub events: StateEvents,
}

impl Program {
    /// The tree below the answer-stream prefix, and the path to it.
    pub fn stream_tail(&self) -> (FocusPath, &Tree) {
        let mut path = Vec::new();
        let mut node = &self.tree;
        while let SearchTree::Plus(ans, rest) = &**node {
            if !ans.is_answer() {
                break;
            }
            path.push(Selector::PlusTail);
            node = rest;
        }
        (FocusPath(path), node)
    }

    pub fn is_terminal(&self) -> bool {
        let (_, tail) = self.stream_tail();
        tail.is_empty() || tail.is_answer()
    }

    /// Answer states in stream order, including an answer at the tail.
    pub fn answers(&self) -> Vec<&State> {
        let mut out = Vec::new();
        let mut node = &self.tree;
        while let SearchTree::Plus(ans, rest) = &**node {
            match ans.answer_state() {
                Some(st) => out.push(st),
                None => break,
            }
            node = rest;
        }
        if let Some(st) = node.answer_state() {
            out.push(st);
        }
        out
    }

    /// Reified answers in stream order.
    pub fn reified_answers(&self) -> Vec<Term> {
        self.answers()
            .into_iter()
            .map(|st| st.reify(&self.query_vars))
            .collect()
    }

    pub fn locate_redex(&self, rules: &RuleSet) -> Result<Option<Redex>, EngineError> {
        locate_redex(self, rules)
    }

    pub fn step(&self, rules: &RuleSet) -> Result<Option<Step>, EngineError> {
        step(self, rules)
    }
}

fn found(path: Vec<Selector>, rule: RuleId) -> Result<Option<Redex>, EngineError> {
    Ok(Some(Redex {
        path: FocusPath(path),
        rule,
    }))
}

fn stuck(path: Vec<Selector>, detail: impl Into<String>) -> Result<Option<Redex>, EngineError> {
    Err(EngineError::Stuck {
        path: FocusPath(path),
        detail: detail.into(),
    })
}

/// Finds the unique next redex, or `None` if the program is terminal.
pub fn locate_redex(p: &Program, rules: &RuleSet) -> Result<Option<Redex>, EngineError> {
    use SearchTree as S;
    let (FocusPath(mut path), tail) = p.stream_tail();

    match &**tail {
        S::Delay(_) if rules.has(RuleId::InvokeDelay) => return found(path, RuleId::InvokeDelay),
        S::DisjL(a, _) if a.is_answer() && rules.has(RuleId::PromoteLeft) => {
            return found(path, RuleId::PromoteLeft)
        }
        S::DisjR(_, a) if a.is_answer() && rules.has(RuleId::PromoteRight) => {
            return found(path, RuleId::PromoteRight)
        }
        S::Empty => return Ok(None),
        t if t.is_answer() => return Ok(None),
        _ => {}
    }

    let mut node = tail;
    loop {
        let try_rules = |candidates: &[(RuleId, bool)]| {
            candidates
                .iter()
                .find(|(r, hit)| *hit && rules.has(*r))
                .map(|(r, _)| *r)
        };
        match &**node {
            S::DisjL(l, _) => {
                let hit = try_rules(&[
                    (RuleId::PruneLeft, l.is_empty()),
                    (RuleId::AssocLeftLeft, matches!(&**l, S::DisjL(a, _) if a.is_answer())),
                    (RuleId::AssocLeftRight, matches!(&**l, S::DisjR(_, a) if a.is_answer())),
                    (RuleId::DelayLeft, l.is_delay()),
                ]);
                if let Some(r) = hit {
                    return found(path, r);
                }
                path.push(Selector::Left);
                node = l;
            }
            S::DisjR(_, r) => {
                let hit = try_rules(&[
                    (RuleId::PruneRight, r.is_empty()),
                    (RuleId::AssocRightLeft, matches!(&**r, S::DisjL(a, _) if a.is_answer())),
                    (RuleId::AssocRightRight, matches!(&**r, S::DisjR(_, a) if a.is_answer())),
                    (RuleId::DelayRight, r.is_delay()),
                ]);
                if let Some(rule) = hit {
                    return found(path, rule);
                }
                path.push(Selector::Right);
                node = r;
            }
            S::Conj(t, _) => {
                let hit = try_rules(&[
                    (RuleId::SuccConj, t.is_answer()),
                    (RuleId::PruneConj, t.is_empty()),
                    (RuleId::LeftAnsConj, matches!(&**t, S::DisjL(a, _) if a.is_answer())),
                    (RuleId::RightAnsConj, matches!(&**t, S::DisjR(_, a) if a.is_answer())),
                    (RuleId::DelayConj, t.is_delay()),
                ]);
                if let Some(r) = hit {
                    return found(path, r);
                }
                path.push(Selector::ConjTree);
                node = t;
            }
            S::Go(inner) => {
                return match &**inner {
                    S::Leaf(g, _) if g.is_call() && rules.has(RuleId::Proceed) => {
                        found(path, RuleId::Proceed)
                    }
                    _ => stuck(path, format!("no rule for {node}")),
                };
            }
            S::Leaf(g, st) => {
                let rule = match &**g {
                    Goal::Disj { .. } => Some(RuleId::DistrDisj),
                    Goal::Conj { .. } => Some(RuleId::DistrConj),
                    Goal::Exists { .. } => Some(RuleId::SubstFresh),
                    Goal::Call { .. } => {
                        if rules.has(RuleId::Delay) {
                            Some(RuleId::Delay)
                        } else {
                            Some(RuleId::Expand)
                        }
                    }
                    Goal::Unify { left, right, .. } => {
                        if st.subst.unify(left, right).is_some() {
                            Some(RuleId::UnifySucc)
                        } else {
                            Some(RuleId::UnifyFail)
                        }
                    }
                    Goal::Top => None,
                };
                return match rule {
                    Some(r) if rules.has(r) => found(path, r),
                    _ => stuck(path, format!("no rule for {node}")),
                };
            }
            S::Empty | S::Delay(_) | S::Plus(..) => {
                return stuck(path, format!("no rule for {node}"));
            }
        }
    }
}

/// Replaces the subtree at `path` with `f(subtree)`, sharing everything off
/// the path. Panics if `path` does not resolve.
pub fn replace_at(tree: &Tree, path: &[Selector], f: impl FnOnce(&Tree) -> Tree) -> Tree {
    use SearchTree as S;
    let Some((sel, rest)) = path.split_first() else {
        return f(tree);
    };
    Arc::new(match (sel, &**tree) {
        (Selector::PlusTail, S::Plus(a, b)) => S::Plus(a.clone(), replace_at(b, rest, f)),
        (Selector::Left, S::DisjL(a, b)) => S::DisjL(replace_at(a, rest, f), b.clone()),
        (Selector::Right, S::DisjR(a, b)) => S::DisjR(a.clone(), replace_at(b, rest, f)),
        (Selector::ConjTree, S::Conj(t, g)) => S::Conj(replace_at(t, rest, f), g.clone()),
        (sel, t) => panic!("focus path selector {sel:?} does not match {}", t.kind()),
    })
}

fn lookup<'a>(env: &'a RelEnv, rel: &str) -> Result<&'a crate::lower::Relation, EngineError> {
    env.get(rel)
        .ok_or_else(|| EngineError::MissingRelation(rel.to_string()))
}

/// Applies exactly one reduction. `None` when the program is terminal.
pub fn step(p: &Program, rules: &RuleSet) -> Result<Option<Step>, EngineError> {
    use SearchTree as S;
    let Some(Redex { path, rule }) = locate_redex(p, rules)? else {
        return Ok(None);
    };
    let node = path.resolve(&p.tree).expect("located path resolves");
    let mut next_uid = p.next_uid;
    let mut events = StateEvents::default();

    let shape = |what: &str| -> ! { panic!("{rule} located on {what}: {node}") };
    let replacement: Tree = match (rule, &**node) {
        (RuleId::DistrDisj, S::Leaf(g, st)) => {
            let Goal::Disj { left, right, .. } = &**g else { shape("non-disjunction") };
            let uid = next_uid;
            next_uid += 1;
            events.minted.push(MintedState {
                uid,
                parent: st.uid,
            });
            Arc::new(S::DisjL(
                S::leaf(left.clone(), st.clone()),
                S::leaf(right.clone(), st.with_uid(uid)),
            ))
        }
        (RuleId::DistrConj, S::Leaf(g, st)) => {
            let Goal::Conj { left, right, .. } = &**g else { shape("non-conjunction") };
            Arc::new(S::Conj(S::leaf(left.clone(), st.clone()), right.clone()))
        }
        (RuleId::SubstFresh, S::Leaf(g, st)) => {
            let Goal::Exists { vars, body, .. } = &**g else { shape("non-binder") };
            let fresh: Vec<Term> = (0..vars.len() as LVar)
                .map(|k| Term::Var(st.counter + k))
                .collect();
            let st = State {
                counter: st.counter + vars.len() as LVar,
                ..st.clone()
            };
            S::leaf(body.substitute(vars, &fresh), st)
        }
        (RuleId::Delay, S::Leaf(..)) => Arc::new(S::Delay(Arc::new(S::Go(node.clone())))),
        (RuleId::Proceed, S::Go(inner)) => {
            let S::Leaf(g, st) = &**inner else { shape("go of non-leaf") };
            let Goal::Call { rel, args, .. } = &**g else { shape("go of non-call") };
            let r = lookup(&p.env, rel)?;
            S::leaf(r.body.substitute(&r.params, args), st.clone())
        }
        (RuleId::Expand, S::Leaf(g, st)) => {
            let Goal::Call { rel, args, .. } = &**g else { shape("non-call") };
            let r = lookup(&p.env, rel)?;
            S::leaf(r.body.substitute(&r.params, args), st.clone())
        }
        (RuleId::UnifySucc, S::Leaf(g, st)) => {
            let Goal::Unify { left, right, uid } = &**g else { shape("non-unification") };
            let u = unify(left, right, &st.subst);
            let entry = TrailEntry {
                left: u.left,
                right: u.right,
                goal_uid: *uid,
            };
            events.trail.push((st.uid, entry.clone()));
            let st = State {
                subst: u.subst.expect("located UnifySucc must unify"),
                trail: st.trail.push(entry),
                ..st.clone()
            };
            S::leaf(Arc::new(Goal::Top), st)
        }
        (RuleId::UnifyFail, S::Leaf(..)) => S::empty(),
        (RuleId::SuccConj, S::Conj(t, g)) => {
            let S::Leaf(_, st) = &**t else { shape("non-answer") };
            S::leaf(g.clone(), st.clone())
        }
        (RuleId::PruneConj, S::Conj(..)) => S::empty(),
        (RuleId::PruneLeft, S::DisjL(_, s)) => s.clone(),
        (RuleId::PruneRight, S::DisjR(s, _)) => s.clone(),
        (RuleId::LeftAnsConj, S::Conj(t, g)) => {
            let S::DisjL(ans, s) = &**t else { shape("non-disjunction") };
            Arc::new(S::DisjL(
                Arc::new(S::Conj(ans.clone(), g.clone())),
                Arc::new(S::Conj(s.clone(), g.clone())),
            ))
        }
        (RuleId::RightAnsConj, S::Conj(t, g)) => {
            let S::DisjR(s, ans) = &**t else { shape("non-disjunction") };
            Arc::new(S::DisjR(
                Arc::new(S::Conj(s.clone(), g.clone())),
                Arc::new(S::Conj(ans.clone(), g.clone())),
            ))
        }
        // S1 → ((⊤σ) ← S2)  ⟶  (⊤σ) ← (S1 → S2)
        (RuleId::AssocRightLeft, S::DisjR(s1, r)) => {
            let S::DisjL(ans, s2) = &**r else { shape("mismatch") };
            Arc::new(S::DisjL(ans.clone(), Arc::new(S::DisjR(s1.clone(), s2.clone()))))
        }
        // S2 → (S1 → (⊤σ))  ⟶  (S2 → S1) → (⊤σ)
        (RuleId::AssocRightRight, S::DisjR(s2, r)) => {
            let S::DisjR(s1, ans) = &**r else { shape("mismatch") };
            Arc::new(S::DisjR(Arc::new(S::DisjR(s2.clone(), s1.clone())), ans.clone()))
        }
        // ((⊤σ) ← S1) ← S2  ⟶  (⊤σ) ← (S1 ← S2)
        (RuleId::AssocLeftLeft, S::DisjL(l, s2)) => {
            let S::DisjL(ans, s1) = &**l else { shape("mismatch") };
            Arc::new(S::DisjL(ans.clone(), Arc::new(S::DisjL(s1.clone(), s2.clone()))))
        }
        // (S1 → (⊤σ)) ← S2  ⟶  (S1 ← S2) → (⊤σ)
        (RuleId::AssocLeftRight, S::DisjL(l, s2)) => {
            let S::DisjR(s1, ans) = &**l else { shape("mismatch") };
            Arc::new(S::DisjR(Arc::new(S::DisjL(s1.clone(), s2.clone())), ans.clone()))
        }
        (RuleId::DelayConj, S::Conj(t, g)) => {
            let S::Delay(s) = &**t else { shape("non-delay") };
            Arc::new(S::Delay(Arc::new(S::Conj(s.clone(), g.clone()))))
        }
        (RuleId::DelayLeft, S::DisjL(l, s2)) => {
            let S::Delay(s1) = &**l else { shape("non-delay") };
            Arc::new(S::Delay(Arc::new(S::DisjR(s1.clone(), s2.clone()))))
        }
        (RuleId::DelayRight, S::DisjR(s1, r)) => {
            let S::Delay(s2) = &**r else { shape("non-delay") };
            Arc::new(S::Delay(Arc::new(S::DisjL(s1.clone(), s2.clone()))))
        }
        (RuleId::InvokeDelay, S::Delay(s)) => s.clone(),
        (RuleId::PromoteLeft, S::DisjL(ans, s)) => Arc::new(S::Plus(ans.clone(), s.clone())),
        (RuleId::PromoteRight, S::DisjR(s, ans)) => Arc::new(S::Plus(ans.clone(), s.clone())),
        _ => shape("unexpected node"),
    };

    let tree = replace_at(&p.tree, &path.0, |_| replacement);
    Ok(Some(Step {
        rule,
        path,
        program: Program {
            env: p.env.clone(),
            tree,
            next_uid,
            query_vars: p.query_vars.clone(),
        },
        events,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Halt {
    Terminal,
    Answers,
    Budget,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub program: Program,
    pub trace: Vec<RuleId>,
    pub halt: Halt,
}

/// Steps until terminal, until `max_answers` answers exist, or until
/// `max_steps` steps have been taken, whichever comes first.
pub fn run_bounded(
    p: &Program,
    rules: &RuleSet,
    max_steps: usize,
    max_answers: Option<usize>,
) -> Result<RunResult, EngineError> {
    let mut cur = p.clone();
    let mut trace = Vec::new();
    let halt = loop {
        if cur.is_terminal() {
            break Halt::Terminal;
        }
        if max_answers.is_some_and(|n| cur.answers().len() >= n) {
            break Halt::Answers;
        }
        if trace.len() >= max_steps {
            break Halt::Budget;
        }
        let s = step(&cur, rules)?.expect("non-terminal program has a redex");
        trace.push(s.rule);
        cur = s.program;
    };
    Ok(RunResult {
        program: cur,
        trace,
        halt,
    })
}
