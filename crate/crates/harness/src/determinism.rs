//! Exhaustive redex enumeration.
//!
//! Independently of [`locate_redex`], every node of the tree is classified by
//! its evaluation context and every enabled rule's left-hand side is matched
//! against it. A state passes when at most one (position, rule) pair matches
//! and that pair is the one the engine locates.

use mkstep_core::engine::{locate_redex, FocusPath, Selector};
use mkstep_core::{Goal, Program, RuleId, RuleSet, SearchTree};

/// How a node sits relative to the evaluation contexts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Context {
    /// Directly below the answer-stream prefix; stream-level rules apply.
    Tail,
    /// Reachable through active children below the tail.
    Active,
    /// Anywhere else: inside answers, inactive children, `delay`, `go`.
    Inactive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub path: FocusPath,
    pub rule: RuleId,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DeterminismFailure {
    #[error("step {step}: {} redexes match: {matches:?}", matches.len())]
    Ambiguous { step: usize, matches: Vec<Match> },
    #[error("step {step}: enumeration found {found:?} but the engine located {located:?}")]
    Disagree {
        step: usize,
        found: Option<Match>,
        located: Option<Match>,
    },
    #[error("step {step}: engine error: {error}")]
    Engine { step: usize, error: String },
}

/// Whether `rule`'s left-hand side matches `t`, ignoring context.
fn lhs_matches(rule: RuleId, t: &SearchTree) -> bool {
    use RuleId as R;
    use SearchTree as S;
    let ans = |t: &SearchTree| matches!(t, S::Leaf(g, _) if **g == Goal::Top);
    match (rule, t) {
        (R::DistrDisj, S::Leaf(g, _)) => matches!(**g, Goal::Disj { .. }),
        (R::DistrConj, S::Leaf(g, _)) => matches!(**g, Goal::Conj { .. }),
        (R::SubstFresh, S::Leaf(g, _)) => matches!(**g, Goal::Exists { .. }),
        (R::Delay | R::Expand, S::Leaf(g, _)) => matches!(**g, Goal::Call { .. }),
        (R::Proceed, S::Go(inner)) => {
            matches!(&**inner, S::Leaf(g, _) if matches!(**g, Goal::Call { .. }))
        }
        (R::UnifySucc, S::Leaf(g, st)) => match &**g {
            Goal::Unify { left, right, .. } => st.subst.unify(left, right).is_some(),
            _ => false,
        },
        (R::UnifyFail, S::Leaf(g, st)) => match &**g {
            Goal::Unify { left, right, .. } => st.subst.unify(left, right).is_none(),
            _ => false,
        },
        (R::SuccConj, S::Conj(t, _)) => ans(t),
        (R::PruneConj, S::Conj(t, _)) => matches!(**t, S::Empty),
        (R::PruneLeft, S::DisjL(l, _)) => matches!(**l, S::Empty),
        (R::PruneRight, S::DisjR(_, r)) => matches!(**r, S::Empty),
        (R::LeftAnsConj, S::Conj(t, _)) => matches!(&**t, S::DisjL(a, _) if ans(a)),
        (R::RightAnsConj, S::Conj(t, _)) => matches!(&**t, S::DisjR(_, a) if ans(a)),
        (R::AssocRightLeft, S::DisjR(_, r)) => matches!(&**r, S::DisjL(a, _) if ans(a)),
        (R::AssocRightRight, S::DisjR(_, r)) => matches!(&**r, S::DisjR(_, a) if ans(a)),
        (R::AssocLeftLeft, S::DisjL(l, _)) => matches!(&**l, S::DisjL(a, _) if ans(a)),
        (R::AssocLeftRight, S::DisjL(l, _)) => matches!(&**l, S::DisjR(_, a) if ans(a)),
        (R::DelayConj, S::Conj(t, _)) => matches!(**t, S::Delay(_)),
        (R::DelayLeft, S::DisjL(l, _)) => matches!(**l, S::Delay(_)),
        (R::DelayRight, S::DisjR(_, r)) => matches!(**r, S::Delay(_)),
        (R::InvokeDelay, S::Delay(_)) => true,
        (R::PromoteLeft, S::DisjL(a, _)) => ans(a),
        (R::PromoteRight, S::DisjR(_, a)) => ans(a),
        _ => false,
    }
}

fn stream_level(rule: RuleId) -> bool {
    matches!(
        rule,
        RuleId::InvokeDelay | RuleId::PromoteLeft | RuleId::PromoteRight
    )
}

/// Every (position, rule) match in `p` under `rules`.
pub fn all_matches(p: &Program, rules: &RuleSet) -> Vec<Match> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk(&p.tree, Context::Tail, true, &mut path, rules, &mut out);
    out
}

/// `in_prefix` is true while still inside the `+` answer prefix.
fn walk(
    t: &SearchTree,
    cx: Context,
    in_prefix: bool,
    path: &mut Vec<Selector>,
    rules: &RuleSet,
    out: &mut Vec<Match>,
) {
    use SearchTree as S;
    // Inside the answer prefix a `+` node is not itself a position, its tail is.
    if in_prefix {
        if let S::Plus(a, rest) = t {
            if matches!(&**a, S::Leaf(g, _) if **g == Goal::Top) {
                walk(a, Context::Inactive, false, path, rules, out);
                path.push(Selector::PlusTail);
                walk(rest, Context::Tail, true, path, rules, out);
                path.pop();
                return;
            }
        }
    }
    if cx != Context::Inactive {
        for rule in rules.iter() {
            let ok_here = match cx {
                Context::Tail => true,
                Context::Active => !stream_level(rule),
                Context::Inactive => false,
            };
            if ok_here && lhs_matches(rule, t) {
                out.push(Match {
                    path: FocusPath(path.clone()),
                    rule,
                });
            }
        }
    }
    let child_cx = |active: bool| {
        if active && cx != Context::Inactive {
            Context::Active
        } else {
            Context::Inactive
        }
    };
    let mut visit = |child: &SearchTree, sel: Option<Selector>, active: bool| {
        // Inactive positions never match, but are still visited so that a
        // context bug cannot hide a redex.
        if let (Some(sel), true) = (sel, active) {
            path.push(sel);
            walk(child, child_cx(true), false, path, rules, out);
            path.pop();
        } else {
            walk(child, Context::Inactive, false, path, rules, out);
        }
    };
    match t {
        S::Empty | S::Leaf(..) => {}
        S::DisjL(a, b) => {
            visit(a, Some(Selector::Left), true);
            visit(b, None, false);
        }
        S::DisjR(a, b) => {
            visit(a, None, false);
            visit(b, Some(Selector::Right), true);
        }
        S::Conj(s, _) => visit(s, Some(Selector::ConjTree), true),
        S::Plus(a, b) => {
            visit(a, None, false);
            visit(b, None, false);
        }
        S::Delay(s) | S::Go(s) => visit(s, None, false),
    }
}

/// Checks one state.
pub fn check_state(p: &Program, rules: &RuleSet, step: usize) -> Result<(), DeterminismFailure> {
    let matches = all_matches(p, rules);
    if matches.len() > 1 {
        return Err(DeterminismFailure::Ambiguous { step, matches });
    }
    let located = locate_redex(p, rules)
        .map_err(|e| DeterminismFailure::Engine {
            step,
            error: e.to_string(),
        })?
        .map(|r| Match {
            path: r.path,
            rule: r.rule,
        });
    let found = matches.into_iter().next();
    if found != located || (located.is_none() != p.is_terminal()) {
        return Err(DeterminismFailure::Disagree {
            step,
            found,
            located,
        });
    }
    Ok(())
}

/// Checks each of the first `steps + 1` states of the run from `p`.
/// Returns the number of states checked.
pub fn check_determinism(
    p: &Program,
    rules: &RuleSet,
    steps: usize,
) -> Result<usize, DeterminismFailure> {
    let mut cur = p.clone();
    for i in 0..=steps {
        check_state(&cur, rules, i)?;
        match cur.step(rules) {
            Ok(Some(s)) => cur = s.program,
            Ok(None) => return Ok(i + 1),
            Err(e) => {
                return Err(DeterminismFailure::Engine {
                    step: i,
                    error: e.to_string(),
                })
            }
        }
    }
    Ok(steps + 1)
}
