//! Stepping sessions.

use std::sync::Arc;
use std::time::Instant;

use mkstep_core::lower::{SourceMap, StateOrigin};
use mkstep_core::rules::UnknownName;
use mkstep_core::{compile, Diagnostic, EngineError, Lowered, RuleSet};

use crate::snapshot::Snapshot;
use crate::zipper::HistoryZipper;

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("program has {} diagnostic(s)", .0.len())]
    Diagnostics(Vec<Diagnostic>),
    #[error("unknown rule set `{0}`")]
    UnknownRules(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl From<UnknownName> for SessionError {
    fn from(e: UnknownName) -> Self {
        SessionError::UnknownRules(e.0)
    }
}

#[derive(Debug)]
pub struct Session {
    pub id: String,
    pub source: Arc<str>,
    rules: RuleSet,
    rules_name: String,
    base: Lowered,
    /// Goal map plus provenance of every state minted so far. States are only
    /// appended when a step is computed for the first time.
    map: SourceMap,
    history: HistoryZipper<Arc<Snapshot>>,
    pub created: Instant,
    pub touched: Instant,
}

impl Session {
    pub fn create(id: String, source: &str, rules: &str) -> Result<Session, SessionError> {
        let set = RuleSet::from_name(rules)?;
        let base = compile(source).map_err(SessionError::Diagnostics)?;
        let first = Snapshot::new(0, None, base.program.clone(), Default::default(), &set)?;
        let now = Instant::now();
        Ok(Session {
            id,
            source: source.into(),
            rules: set,
            rules_name: set.name().unwrap_or(rules).to_string(),
            map: base.source_map.clone(),
            base,
            history: HistoryZipper::new(Arc::new(first)),
            created: now,
            touched: now,
        })
    }

    pub fn rules_name(&self) -> &str {
        &self.rules_name
    }

    pub fn focus(&self) -> &Arc<Snapshot> {
        self.history.focus()
    }

    pub fn source_map(&self) -> &SourceMap {
        &self.map
    }

    pub fn json(&self) -> &str {
        self.focus().json(&self.source, &self.map)
    }

    /// Replays a visited step if there is one, otherwise applies the next
    /// rule. A terminal focus is returned unchanged.
    pub fn step_forward(&mut self) -> Result<&Arc<Snapshot>, SessionError> {
        if self.history.redo() {
            return Ok(self.focus());
        }
        let cur = self.focus().clone();
        if cur.terminal {
            return Ok(self.focus());
        }
        let Some(step) = cur.program.step(&self.rules)? else {
            return Ok(self.focus());
        };
        let n = cur.step + 1;
        for m in &step.events.minted {
            self.map.record_state(StateOrigin {
                uid: m.uid,
                rule: Some(step.rule),
                step: n,
                parent: Some(m.parent),
            });
        }
        let snap = Snapshot::new(n, Some(step.rule), step.program, step.events, &self.rules)?;
        self.history.push(Arc::new(snap));
        Ok(self.focus())
    }

    /// Up to `n` forward steps, stopping early at a terminal snapshot.
    pub fn step_many(&mut self, n: usize) -> Result<&Arc<Snapshot>, SessionError> {
        for _ in 0..n {
            if self.focus().terminal && !self.history.can_redo() {
                break;
            }
            self.step_forward()?;
        }
        Ok(self.focus())
    }

    pub fn step_back(&mut self) -> &Arc<Snapshot> {
        self.history.undo();
        self.focus()
    }

    /// Back to step 0 of the same lowered program, optionally under another
    /// rule set. Goal UIDs are unchanged; runtime state provenance is dropped.
    pub fn reset(&mut self, rules: Option<&str>) -> Result<&Arc<Snapshot>, SessionError> {
        let set = match rules {
            Some(name) => {
                let set = RuleSet::from_name(name)?;
                self.rules_name = set.name().unwrap_or(name).to_string();
                set
            }
            None => self.rules,
        };
        self.rules = set;
        self.map = self.base.source_map.clone();
        let first = Snapshot::new(0, None, self.base.program.clone(), Default::default(), &set)?;
        self.history = HistoryZipper::new(Arc::new(first));
        Ok(self.focus())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAME_CAT: &str = "(defrel (same x y) (== x y)) (run* (p) (same p 'cat))";

    #[test]
    fn forward_back_forward() {
        let mut s = Session::create("t".into(), SAME_CAT, "interleaving").unwrap();
        let mut rules = Vec::new();
        for _ in 0..5 {
            rules.push(s.step_forward().unwrap().rule.unwrap().name());
        }
        assert_eq!(rules, ["SubstFresh", "Delay", "InvokeDelay", "Proceed", "UnifySucc"]);
        assert!(s.focus().terminal);
        let end = s.json().to_string();
        assert_eq!(s.step_forward().unwrap().step, 5);
        assert_eq!(s.step_back().step, 4);
        assert_eq!(s.step_forward().unwrap().step, 5);
        assert_eq!(s.json(), end);
        for _ in 0..10 {
            s.step_back();
        }
        assert_eq!(s.focus().step, 0);
        assert!(s.focus().rule.is_none());
    }

    #[test]
    fn reset_swaps_rules() {
        let mut s = Session::create("t".into(), SAME_CAT, "interleaving").unwrap();
        s.step_many(3).unwrap();
        assert_eq!(s.reset(Some("prolog-dfs")).unwrap().step, 0);
        assert_eq!(s.rules_name(), "dfs");
        s.step_many(100).unwrap();
        assert_eq!(s.focus().step, 3);
        assert!(matches!(
            s.reset(Some("bfs")),
            Err(SessionError::UnknownRules(_))
        ));
    }
}
