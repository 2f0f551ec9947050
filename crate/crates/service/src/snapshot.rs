//! Snapshots and their JSON form.
//!
//! The JSON schema is versioned by [`SCHEMA_VERSION`]. Views derive both
//! `Serialize` and `Deserialize` with fixed field order and no floats, so a
//! document deserialized and serialized again is byte-identical.

use std::sync::OnceLock;

use mkstep_core::engine::{FocusPath, Selector, StateEvents};
use mkstep_core::goal::Code;
use mkstep_core::lower::{GoalForm, SourceMap, StateOrigin};
use mkstep_core::syntax::{Pos, Span};
use mkstep_core::{Goal, Program, RuleId, RuleSet, SearchTree, State, Tree};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// One point in a session's history.
#[derive(Debug)]
pub struct Snapshot {
    pub step: u64,
    /// Rule applied to reach this snapshot; `None` at step 0.
    pub rule: Option<RuleId>,
    pub program: Program,
    pub terminal: bool,
    pub events: StateEvents,
    /// Path to the next redex, or to the stream tail when terminal.
    pub focus: FocusPath,
    json: OnceLock<String>,
}

impl Snapshot {
    pub fn new(
        step: u64,
        rule: Option<RuleId>,
        program: Program,
        events: StateEvents,
        rules: &RuleSet,
    ) -> Result<Self, mkstep_core::EngineError> {
        let focus = match program.locate_redex(rules)? {
            Some(r) => r.path,
            None => program.stream_tail().0,
        };
        Ok(Snapshot {
            step,
            rule,
            terminal: program.is_terminal(),
            program,
            events,
            focus,
            json: OnceLock::new(),
        })
    }

    /// The serialized snapshot, computed once.
    pub fn json(&self, source: &str, map: &SourceMap) -> &str {
        self.json
            .get_or_init(|| serde_json::to_string(&self.view(source, map)).expect("serializable"))
    }

    pub fn view(&self, source: &str, map: &SourceMap) -> SnapshotView {
        let vars = &self.program.query_vars;
        let cx = ViewCx {
            map,
            vars,
        };
        SnapshotView {
            version: SCHEMA_VERSION,
            step: self.step,
            rule: self.rule.map(|r| r.name().to_string()),
            terminal: self.terminal,
            tree: cx.node(&self.program.tree, Some(&self.focus.0), false),
            answers: self
                .program
                .answers()
                .into_iter()
                .map(|st| AnswerView {
                    state_uid: st.uid,
                    reified: st.reify(vars).to_string(),
                })
                .collect(),
            focus_path: self.focus.0.iter().map(|s| s.name().to_string()).collect(),
            events: EventsView {
                minted: self
                    .events
                    .minted
                    .iter()
                    .map(|m| MintView {
                        uid: m.uid,
                        parent: m.parent,
                    })
                    .collect(),
                trail: self
                    .events
                    .trail
                    .iter()
                    .map(|(uid, e)| TrailEventView {
                        state_uid: *uid,
                        left: Code(&e.left).to_string(),
                        right: Code(&e.right).to_string(),
                        goal_uid: e.goal_uid,
                    })
                    .collect(),
            },
            source_map: SourceMapView {
                goals: map
                    .goals
                    .iter()
                    .map(|(uid, o)| GoalOriginView {
                        uid: *uid,
                        form: form_name(o.form).to_string(),
                        span: span_view(o.span),
                        text: o.span.text(source).to_string(),
                    })
                    .collect(),
                states: map
                    .states_until(self.step)
                    .iter()
                    .map(state_origin_view)
                    .collect(),
            },
        }
    }
}

fn form_name(f: GoalForm) -> &'static str {
    match f {
        GoalForm::Unify => "unify",
        GoalForm::Call => "call",
        GoalForm::Conde => "conde",
        GoalForm::Sequence => "sequence",
        GoalForm::Fresh => "fresh",
        GoalForm::Query => "query",
    }
}

fn pos_view(p: Pos) -> PosView {
    PosView {
        line: p.line,
        col: p.col,
        offset: p.offset as u64,
    }
}

pub(crate) fn span_view(s: Span) -> SpanView {
    SpanView {
        start: pos_view(s.start),
        end: pos_view(s.end),
    }
}

fn state_origin_view(o: &StateOrigin) -> StateOriginView {
    StateOriginView {
        uid: o.uid,
        rule: o.rule.map(|r| r.name().to_string()),
        step: o.step,
        parent: o.parent,
    }
}

struct ViewCx<'a> {
    map: &'a SourceMap,
    vars: &'a [u32],
}

impl ViewCx<'_> {
    fn goal(&self, g: &Goal) -> GoalView {
        let uid = g.uid();
        GoalView {
            uid,
            text: g.to_string(),
            span: uid.and_then(|u| self.map.goal(u)).map(|o| span_view(o.span)),
        }
    }

    fn state(&self, st: &State) -> StateView {
        StateView {
            uid: st.uid,
            counter: st.counter,
            substitution: st
                .subst
                .bindings()
                .into_iter()
                .map(|(v, t)| BindingView {
                    var: format!("#({v})"),
                    term: Code(t).to_string(),
                })
                .collect(),
            trail: st
                .trail_entries()
                .into_iter()
                .map(|e| TrailView {
                    left: Code(&e.left).to_string(),
                    right: Code(&e.right).to_string(),
                    goal_uid: e.goal_uid,
                })
                .collect(),
            reified: st.reify(self.vars).to_string(),
        }
    }

    /// `spine` is the remaining focus path when `t` is on it.
    fn node(&self, t: &Tree, spine: Option<&[Selector]>, under_go: bool) -> Node {
        let (goal, state) = match &**t {
            SearchTree::Leaf(g, st) => (Some(self.goal(g)), Some(self.state(st))),
            SearchTree::Conj(_, g) => (Some(self.goal(g)), None),
            _ => (None, None),
        };
        let is_go = matches!(&**t, SearchTree::Go(_));
        let next = spine.and_then(|p| p.split_first());
        Node {
            kind: t.kind().to_string(),
            goal,
            state,
            children: t
                .children()
                .into_iter()
                .enumerate()
                .map(|(i, c)| {
                    let sub = next.filter(|(sel, _)| sel.child_index() == i).map(|(_, rest)| rest);
                    self.node(c, sub, is_go)
                })
                .collect(),
            flags: Flags {
                on_active_spine: spine.is_some(),
                go_marked: under_go,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotView {
    pub version: u32,
    pub step: u64,
    pub rule: Option<String>,
    pub terminal: bool,
    pub tree: Node,
    pub answers: Vec<AnswerView>,
    pub focus_path: Vec<String>,
    pub events: EventsView,
    pub source_map: SourceMapView,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<GoalView>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateView>,
    pub children: Vec<Node>,
    pub flags: Flags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub on_active_spine: bool,
    /// The leaf directly under a `go` node.
    pub go_marked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalView {
    /// `null` for `⊤`, which is untagged.
    pub uid: Option<u64>,
    pub text: String,
    pub span: Option<SpanView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateView {
    pub uid: u64,
    pub counter: u32,
    pub substitution: Vec<BindingView>,
    pub trail: Vec<TrailView>,
    pub reified: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BindingView {
    pub var: String,
    pub term: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrailView {
    pub left: String,
    pub right: String,
    pub goal_uid: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerView {
    pub state_uid: u64,
    pub reified: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventsView {
    pub minted: Vec<MintView>,
    pub trail: Vec<TrailEventView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MintView {
    pub uid: u64,
    pub parent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrailEventView {
    pub state_uid: u64,
    pub left: String,
    pub right: String,
    pub goal_uid: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosView {
    pub line: u32,
    pub col: u32,
    pub offset: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanView {
    pub start: PosView,
    pub end: PosView,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceMapView {
    pub goals: Vec<GoalOriginView>,
    pub states: Vec<StateOriginView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalOriginView {
    pub uid: u64,
    pub form: String,
    pub span: SpanView,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateOriginView {
    pub uid: u64,
    pub rule: Option<String>,
    pub step: u64,
    pub parent: Option<u64>,
}
