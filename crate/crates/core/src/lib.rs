//! A miniKanren core whose execution is deterministic small-step rewriting
//! of an explicit search tree.
//!
//! Pipeline: [`syntax::frontend`] reads and checks source text,
//! [`lower::lower`] produces a [`Program`] and its [`SourceMap`], and
//! [`engine::step`] applies one reduction rule at a time under a chosen
//! [`RuleSet`].

pub mod engine;
pub mod goal;
pub mod lower;
pub mod plist;
pub mod rules;
pub mod state;
pub mod syntax;
pub mod term;
pub mod tree;
pub mod wf;

pub use engine::{locate_redex, run_bounded, step, EngineError, FocusPath, Halt, Program, Selector};
pub use goal::Goal;
pub use lower::{lower, Lowered, RelEnv, SourceMap};
pub use rules::{RuleId, RuleSet};
pub use state::{State, TrailEntry, Uid};
pub use syntax::{Diagnostic, DiagCode};
pub use term::{Atom, Subst, Term};
pub use tree::{SearchTree, Tree};

/// Frontend plus lowering.
pub fn compile(source: &str) -> Result<Lowered, Vec<Diagnostic>> {
    syntax::frontend(source).map(|p| lower(&p))
}
