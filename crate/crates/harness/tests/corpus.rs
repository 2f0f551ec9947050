//! Runs every corpus program against its sidecars. A program with no sidecar
//! is expected to diverge: both rule sets must exhaust the step budget.

use mkstep_core::syntax::frontend;
use mkstep_core::{compile, run_bounded, Halt, RuleSet};
use mkstep_harness::corpus::{default_dir, load};
use mkstep_harness::oracle_answers;

const BUDGET: usize = 20_000;

#[test]
fn corpus_matches_sidecars() {
    let entries = load(&default_dir()).unwrap();
    assert!(entries.len() >= 7);
    for e in &entries {
        let l = compile(&e.source).unwrap_or_else(|d| panic!("{}: {d:?}", e.name));
        if e.expectations.is_empty() {
            for rules in [RuleSet::interleaving(), RuleSet::dfs()] {
                let r = run_bounded(&l.program, &rules, BUDGET, None).unwrap();
                assert_eq!(r.halt, Halt::Budget, "{} should diverge", e.name);
            }
            continue;
        }
        for sc in &e.expectations {
            let rules = RuleSet::from_name(&sc.semantics).unwrap();
            let r = run_bounded(&l.program, &rules, BUDGET, None).unwrap();
            assert_eq!(r.halt, Halt::Terminal, "{} {}", e.name, sc.semantics);
            let got: Vec<String> =
                r.program.reified_answers().iter().map(|t| t.to_string()).collect();
            assert_eq!(got, sc.answers, "{} {}", e.name, sc.semantics);
            if let Some(trace) = &sc.rule_trace {
                let names: Vec<&str> = r.trace.iter().map(|r| r.name()).collect();
                assert_eq!(&names, trace, "{} {}", e.name, sc.semantics);
            }
            let mut sorted = sc.answers.clone();
            sorted.sort();
            let oracle = oracle_answers(&frontend(&e.source).unwrap(), 50).unwrap();
            assert_eq!(oracle.answers, sorted, "{} oracle", e.name);
        }
    }
}
