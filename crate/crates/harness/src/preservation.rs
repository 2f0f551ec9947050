//! Well-formedness and lineage checks after every step.

use std::collections::HashMap;
use std::sync::Arc;

use mkstep_core::engine::{replace_at, Step};
use mkstep_core::wf::{check_well_formed, Violation};
use mkstep_core::{
    EngineError, Program, RuleId, RuleSet, SearchTree, SourceMap, State, Tree, Uid,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PreservationFailure {
    #[error("step {step}: ill-formed program: {violation}")]
    IllFormed { step: usize, violation: Violation },
    #[error("step {step}: the relation environment changed")]
    EnvChanged { step: usize },
    #[error("step {step}: state {uid} counter went from {before} to {after}")]
    CounterDecreased {
        step: usize,
        uid: Uid,
        before: u32,
        after: u32,
    },
    #[error("step {step}: state {uid} trail or substitution is not an extension of its parent")]
    HistoryRewritten { step: usize, uid: Uid },
    #[error("step {step}: state {uid} appeared with no known parent")]
    Orphan { step: usize, uid: Uid },
    #[error("step {step}: {error}")]
    Engine { step: usize, error: EngineError },
}

fn states(t: &Tree) -> HashMap<Uid, &State> {
    let mut out = HashMap::new();
    t.for_each_state(&mut |st| {
        out.insert(st.uid, st);
    });
    out
}

fn lineage(
    before: &Program,
    after: &Step,
    step: usize,
) -> Result<(), PreservationFailure> {
    let old = states(&before.tree);
    let parents: HashMap<Uid, Uid> = after
        .events
        .minted
        .iter()
        .map(|m| (m.uid, m.parent))
        .collect();
    let mut res = Ok(());
    after.program.tree.for_each_state(&mut |st| {
        if res.is_err() {
            return;
        }
        let parent = old
            .get(&st.uid)
            .or_else(|| parents.get(&st.uid).and_then(|p| old.get(p)));
        res = match parent {
            None => Err(PreservationFailure::Orphan { step, uid: st.uid }),
            Some(p) if st.counter < p.counter => Err(PreservationFailure::CounterDecreased {
                step,
                uid: st.uid,
                before: p.counter,
                after: st.counter,
            }),
            Some(p) if !st.trail.extends(&p.trail) || !st.subst.extends(&p.subst) => {
                Err(PreservationFailure::HistoryRewritten { step, uid: st.uid })
            }
            Some(_) => Ok(()),
        };
    });
    res
}

/// Runs up to `steps` steps with `stepper`, checking the initial program and
/// every successor. Returns the number of steps taken.
pub fn check_preservation_with<F>(
    p: &Program,
    map: &SourceMap,
    steps: usize,
    mut stepper: F,
) -> Result<usize, PreservationFailure>
where
    F: FnMut(&Program) -> Result<Option<Step>, EngineError>,
{
    check_well_formed(p, map).map_err(|violation| PreservationFailure::IllFormed {
        step: 0,
        violation,
    })?;
    let mut cur = p.clone();
    for i in 1..=steps {
        let Some(next) = stepper(&cur).map_err(|error| PreservationFailure::Engine {
            step: i,
            error,
        })?
        else {
            return Ok(i - 1);
        };
        if !Arc::ptr_eq(&next.program.env, &cur.env) && next.program.env != cur.env {
            return Err(PreservationFailure::EnvChanged { step: i });
        }
        check_well_formed(&next.program, map)
            .map_err(|violation| PreservationFailure::IllFormed { step: i, violation })?;
        lineage(&cur, &next, i)?;
        cur = next.program;
    }
    Ok(steps)
}

pub fn check_preservation(
    p: &Program,
    map: &SourceMap,
    rules: &RuleSet,
    steps: usize,
) -> Result<usize, PreservationFailure> {
    check_preservation_with(p, map, steps, |p| p.step(rules))
}

/// A deliberately wrong stepper for negative controls: `SubstFresh` forgets
/// to advance the fresh-variable counter.
pub fn faulty_step(p: &Program, rules: &RuleSet) -> Result<Option<Step>, EngineError> {
    let Some(mut s) = p.step(rules)? else {
        return Ok(None);
    };
    if s.rule == RuleId::SubstFresh {
        let before = match &**s.path.resolve(&p.tree).expect("path resolves") {
            SearchTree::Leaf(_, st) => st.counter,
            _ => unreachable!("SubstFresh applies to a leaf"),
        };
        s.program.tree = replace_at(&s.program.tree, &s.path.0, |t| match &**t {
            SearchTree::Leaf(g, st) => SearchTree::leaf(
                g.clone(),
                State {
                    counter: before,
                    ..st.clone()
                },
            ),
            _ => t.clone(),
        });
    }
    Ok(Some(s))
}
