//! Well-formedness of programs, preserved by every reduction step.

use std::collections::HashSet;

use crate::engine::Program;
use crate::goal::Goal;
use crate::lower::SourceMap;
use crate::state::{State, Uid};
use crate::term::LVar;
use crate::tree::{SearchTree, Tree};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("`+` outside the answer stream or with a non-answer left child")]
    MisplacedPlus,
    #[error("`go` wraps something other than a relation-call leaf")]
    BadGo,
    #[error("directly nested `delay`")]
    NestedDelay,
    #[error("goal has free syntactic variables: {0}")]
    OpenGoal(String),
    #[error("logic variable #({var}) is not below the state counter {counter}")]
    StaleVariable { var: LVar, counter: LVar },
    #[error("goal UID {0} has no source mapping")]
    UnmappedGoal(Uid),
    #[error("state UID {0} appears on more than one leaf")]
    DuplicateState(Uid),
    #[error("UID {uid} is not below the UID counter {next}")]
    UidOutOfRange { uid: Uid, next: Uid },
    #[error("relation `{rel}`: {problem}")]
    BadRelation { rel: String, problem: String },
}

/// Checks the structural invariant:
/// - `+` cells occur only on the answer-stream spine and hold answers on the left;
/// - `go` wraps only a relation-call leaf; `delay` never directly nests;
/// - leaf goals and pending `×` goals are closed;
/// - every logic variable in a leaf is below that leaf's counter, and every
///   variable in a pending `×` goal is below the counter of each state under it;
/// - goal UIDs are mapped by `map`, state UIDs are distinct, all UIDs are
///   below the UID counter;
/// - relation bodies are closed over their parameters.
pub fn check_well_formed(p: &Program, map: &SourceMap) -> Result<(), Violation> {
    for (name, rel) in p.env.iter() {
        let free = rel.body.free_syn();
        if let Some(v) = free.iter().find(|v| !rel.params.contains(v)) {
            return Err(Violation::BadRelation {
                rel: name.to_string(),
                problem: format!("body mentions unbound `{v}`"),
            });
        }
        if rel.body.max_var().is_some() {
            return Err(Violation::BadRelation {
                rel: name.to_string(),
                problem: "body mentions a logic variable".into(),
            });
        }
        check_goal_uids(&rel.body, p, map)?;
    }

    let mut node = &p.tree;
    while let SearchTree::Plus(ans, rest) = &**node {
        if !ans.is_answer() {
            return Err(Violation::MisplacedPlus);
        }
        node = rest;
    }

    let mut cx = Cx {
        p,
        map,
        seen: HashSet::new(),
    };
    let mut node = &p.tree;
    while let SearchTree::Plus(ans, rest) = &**node {
        cx.tree(ans)?;
        node = rest;
    }
    cx.tree(node)
}

struct Cx<'a> {
    p: &'a Program,
    map: &'a SourceMap,
    seen: HashSet<Uid>,
}

fn check_goal_uids(g: &Goal, p: &Program, map: &SourceMap) -> Result<(), Violation> {
    let mut err = None;
    g.visit(&mut |g| {
        if let (None, Some(uid)) = (&err, g.uid()) {
            if !map.has_goal(uid) {
                err = Some(Violation::UnmappedGoal(uid));
            } else if uid >= p.next_uid {
                err = Some(Violation::UidOutOfRange {
                    uid,
                    next: p.next_uid,
                });
            }
        }
    });
    err.map_or(Ok(()), Err)
}

fn closed(g: &Goal) -> Result<(), Violation> {
    let free = g.free_syn();
    if free.is_empty() {
        Ok(())
    } else {
        Err(Violation::OpenGoal(free.join(", ")))
    }
}

fn below(max: Option<LVar>, counter: LVar) -> Result<(), Violation> {
    match max {
        Some(var) if var >= counter => Err(Violation::StaleVariable { var, counter }),
        _ => Ok(()),
    }
}

impl Cx<'_> {
    fn state(&mut self, st: &State) -> Result<(), Violation> {
        below(st.max_var(), st.counter)?;
        if st.uid >= self.p.next_uid {
            return Err(Violation::UidOutOfRange {
                uid: st.uid,
                next: self.p.next_uid,
            });
        }
        if !self.seen.insert(st.uid) {
            return Err(Violation::DuplicateState(st.uid));
        }
        Ok(())
    }

    fn tree(&mut self, t: &Tree) -> Result<(), Violation> {
        use SearchTree as S;
        match &**t {
            S::Empty => Ok(()),
            S::Leaf(g, st) => {
                closed(g)?;
                check_goal_uids(g, self.p, self.map)?;
                below(g.max_var(), st.counter)?;
                self.state(st)
            }
            S::DisjL(a, b) | S::DisjR(a, b) => {
                self.tree(a)?;
                self.tree(b)
            }
            S::Plus(..) => Err(Violation::MisplacedPlus),
            S::Conj(s, g) => {
                closed(g)?;
                check_goal_uids(g, self.p, self.map)?;
                let max = g.max_var();
                let mut res = Ok(());
                s.for_each_state(&mut |st| {
                    if res.is_ok() {
                        res = below(max, st.counter);
                    }
                });
                res?;
                self.tree(s)
            }
            S::Delay(s) => {
                if s.is_delay() {
                    return Err(Violation::NestedDelay);
                }
                self.tree(s)
            }
            S::Go(s) => match &**s {
                S::Leaf(g, _) if g.is_call() => self.tree(s),
                _ => Err(Violation::BadGo),
            },
        }
    }
}
