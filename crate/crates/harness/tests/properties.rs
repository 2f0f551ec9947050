use mkstep_core::syntax::frontend;
use mkstep_core::wf::check_well_formed;
use mkstep_core::{compile, RuleId, RuleSet, SearchTree};
use mkstep_harness::batch::map_seeds;
use mkstep_harness::determinism::{all_matches, DeterminismFailure};
use mkstep_harness::gen::{gen_ast, GProgram};
use mkstep_harness::preservation::{check_preservation_with, faulty_step};
use mkstep_harness::shrink::{minimize, shrink};
use mkstep_harness::{
    check_determinism, check_preservation, gen_program, oracle_answers, tree_answers, GenConfig,
    PreservationFailure,
};

const ANIMALS: &str = "(defrel (same x y) (== x y))
(run* (q) (conde [(conde [(same q 'turtle)] [(same q 'cat)] [(== q 'dog)])] [(same q 'fish)]))";
const SAME_CAT: &str = "(defrel (same x y) (== x y)) (run* (p) (same p 'cat))";

fn cfg(seed: u64) -> GenConfig {
    GenConfig {
        recursion: seed.is_multiple_of(3),
        ..GenConfig::with_seed(seed)
    }
}

#[test]
fn generated_programs_are_well_formed() {
    for seed in 0..200 {
        let g = gen_program(&cfg(seed));
        // the printed source is accepted and lowers again identically
        let again = compile(&g.source).unwrap();
        assert_eq!(again.program, g.lowered.program, "{}", g.source);
        check_well_formed(&g.lowered.program, &g.lowered.source_map).unwrap();
    }
}

#[test]
fn determinism_on_small_programs() {
    for rules in [RuleSet::interleaving(), RuleSet::dfs()] {
        let p = compile(SAME_CAT).unwrap().program;
        let n = check_determinism(&p, &rules, 1000).unwrap();
        if rules == RuleSet::interleaving() {
            assert_eq!(n, 6);
        }
        let p = compile(ANIMALS).unwrap().program;
        check_determinism(&p, &rules, 10_000).unwrap();
    }
}

#[test]
fn determinism_negative_control() {
    let rules = RuleSet::dfs().with(RuleId::Delay);
    let p = compile(SAME_CAT).unwrap().program;
    match check_determinism(&p, &rules, 100) {
        Err(DeterminismFailure::Ambiguous { matches, .. }) => {
            let rules: Vec<_> = matches.iter().map(|m| m.rule).collect();
            assert_eq!(rules, [RuleId::Delay, RuleId::Expand]);
        }
        other => panic!("expected ambiguity, got {other:?}"),
    }
}

#[test]
fn enumeration_finds_the_located_redex() {
    let l = compile(ANIMALS).unwrap();
    let rules = RuleSet::interleaving();
    let mut p = l.program;
    while let Some(r) = p.locate_redex(&rules).unwrap() {
        let m = all_matches(&p, &rules);
        assert_eq!(m.len(), 1);
        assert_eq!((&m[0].path, m[0].rule), (&r.path, r.rule));
        p = p.step(&rules).unwrap().unwrap().program;
    }
    assert!(all_matches(&p, &rules).is_empty());
}

#[test]
fn determinism_and_preservation_on_generated() {
    let failures: Vec<String> = map_seeds(0..150, |seed| {
        let g = gen_program(&cfg(seed));
        let mut errs = Vec::new();
        for rules in [RuleSet::interleaving(), RuleSet::dfs()] {
            if let Err(e) = check_determinism(&g.lowered.program, &rules, 200) {
                errs.push(format!("seed {seed}: {e}\n{}", g.source));
            }
            let (p, m) = (&g.lowered.program, &g.lowered.source_map);
            if let Err(e) = check_preservation(p, m, &rules, 200) {
                errs.push(format!("seed {seed}: {e}\n{}", g.source));
            }
        }
        errs
    })
    .into_iter()
    .flatten()
    .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn preservation_negative_control() {
    let l = compile(SAME_CAT).unwrap();
    let rules = RuleSet::interleaving();
    let err = check_preservation_with(&l.program, &l.source_map, 100, |p| faulty_step(p, &rules))
        .unwrap_err();
    assert!(
        matches!(err, PreservationFailure::IllFormed { step: 1, .. }),
        "{err}"
    );
}

#[test]
fn preservation_on_small_programs() {
    for src in [SAME_CAT, ANIMALS] {
        let l = compile(src).unwrap();
        for rules in [RuleSet::interleaving(), RuleSet::dfs()] {
            check_preservation(&l.program, &l.source_map, &rules, 10_000).unwrap();
        }
    }
}

#[test]
fn answers_agree_with_oracle() {
    let mismatches: Vec<String> = map_seeds(0..150, |seed| {
        let g = gen_program(&GenConfig {
            recursion: seed % 2 == 0,
            ..GenConfig::with_seed(seed)
        });
        let surface = frontend(&g.source).unwrap();
        let oracle = oracle_answers(&surface, 40).expect("finite generated program");
        let i = tree_answers(&g, &RuleSet::interleaving(), 200_000).expect("terminates");
        let d = tree_answers(&g, &RuleSet::dfs(), 200_000).expect("terminates");
        if i == oracle.answers && d == oracle.answers {
            None
        } else {
            Some(format!(
                "seed {seed}: interleaving {i:?} dfs {d:?} oracle {:?}\n{}",
                oracle.answers, g.source
            ))
        }
    })
    .into_iter()
    .flatten()
    .collect();
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn delay_never_nests_and_go_wraps_calls() {
    for seed in 0..100 {
        let g = gen_program(&cfg(seed));
        let rules = RuleSet::interleaving();
        let mut p = g.lowered.program;
        for _ in 0..200 {
            fn scan(t: &SearchTree) {
                match t {
                    SearchTree::Delay(s) => assert!(!s.is_delay()),
                    SearchTree::Go(s) => {
                        assert!(matches!(&**s, SearchTree::Leaf(g, _) if g.is_call()))
                    }
                    _ => {}
                }
                t.children().into_iter().for_each(|c| scan(c));
            }
            scan(&p.tree);
            match p.step(&rules).unwrap() {
                Some(s) => p = s.program,
                None => break,
            }
        }
    }
}

#[test]
fn replay_is_deterministic() {
    for seed in 0..50 {
        let a = gen_program(&cfg(seed));
        let b = gen_program(&cfg(seed));
        let rules = RuleSet::interleaving();
        let (mut p, mut q) = (a.lowered.program, b.lowered.program);
        for _ in 0..100 {
            assert_eq!(p, q);
            match (p.step(&rules).unwrap(), q.step(&rules).unwrap()) {
                (Some(s), Some(t)) => {
                    assert_eq!((s.rule, &s.path, &s.events), (t.rule, &t.path, &t.events));
                    p = s.program;
                    q = t.program;
                }
                (None, None) => break,
                _ => panic!("diverging replays"),
            }
        }
    }
}

/// A program that fails the faulty stepper's preservation check, i.e. that
/// contains a reachable `fresh`.
fn breaks_faulty(p: &GProgram) -> bool {
    let Ok(l) = compile(&p.to_string()) else {
        return false;
    };
    let rules = RuleSet::dfs();
    check_preservation_with(&l.program, &l.source_map, 200, |p| faulty_step(p, &rules)).is_err()
}

#[test]
fn shrinking_preserves_failure() {
    let mut shrunk_some = false;
    for seed in 0..40 {
        let ast = gen_ast(&cfg(seed));
        for cand in shrink(&ast) {
            // every candidate is still a valid program
            cand.clone().build();
        }
        if !breaks_faulty(&ast) {
            continue;
        }
        let small = minimize(&ast, breaks_faulty);
        assert!(breaks_faulty(&small), "shrunk program no longer fails");
        assert!(small.size() <= ast.size());
        shrunk_some |= small.size() < ast.size();
    }
    assert!(shrunk_some);
}
