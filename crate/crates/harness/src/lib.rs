//! Validation harness for `mkstep-core`: seeded program generation with
//! shrinking, exhaustive determinism and preservation checkers, an
//! independent stream-based oracle, and the example corpus.

pub mod batch;
pub mod corpus;
pub mod determinism;
pub mod gen;
pub mod oracle;
pub mod preservation;
pub mod shrink;

pub use determinism::{check_determinism, DeterminismFailure};
pub use gen::{gen_program, GenConfig, Generated};
pub use oracle::{oracle_answers, BoundExhausted, OracleAnswer};
pub use preservation::{check_preservation, PreservationFailure};

use mkstep_core::{run_bounded, Halt, RuleSet};

/// Sorted reified answers of a terminating run, or `None` if the run did not
/// terminate within `budget` steps.
pub fn tree_answers(g: &Generated, rules: &RuleSet, budget: usize) -> Option<Vec<String>> {
    let r = run_bounded(&g.lowered.program, rules, budget, None).ok()?;
    if r.halt != Halt::Terminal {
        return None;
    }
    let mut v: Vec<String> = r
        .program
        .reified_answers()
        .iter()
        .map(|t| t.to_string())
        .collect();
    v.sort();
    Some(v)
}
