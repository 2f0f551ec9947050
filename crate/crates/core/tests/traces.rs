use mkstep_core::engine::{run_bounded, Halt};
use mkstep_core::rules::{RuleId, RuleSet};
use mkstep_core::term::Term;
use mkstep_core::tree::SearchTree;
use mkstep_core::wf::check_well_formed;
use mkstep_core::compile;

const ANIMALS: &str = "(defrel (same x y) (== x y))
(run* (q)
  (conde
    [(conde
       [(same q 'turtle)]
       [(same q 'cat)]
       [(== q 'dog)])]
    [(same q 'fish)]))";

const SAME_CAT: &str = "(defrel (same x y) (== x y)) (run* (p) (same p 'cat))";

const CAT_DOG: &str = "(defrel (same x y) (== x y))
(run* (q) (conde ((same q 'cat)) ((same q 'dog))))";

fn syms(names: &[&str]) -> Vec<Term> {
    names.iter().map(|s| Term::sym(s)).collect()
}

fn answers(src: &str, rules: RuleSet) -> Vec<Term> {
    let l = compile(src).unwrap();
    let r = run_bounded(&l.program, &rules, 10_000, None).unwrap();
    assert_eq!(r.halt, Halt::Terminal);
    r.program.reified_answers()
}

#[test]
fn same_cat_trace() {
    use RuleId::*;
    let l = compile(SAME_CAT).unwrap();
    let r = run_bounded(&l.program, &RuleSet::interleaving(), 100, None).unwrap();
    assert_eq!(r.halt, Halt::Terminal);
    assert_eq!(r.trace, [SubstFresh, Delay, InvokeDelay, Proceed, UnifySucc]);
    assert_eq!(r.program.tree.to_string(), "⊤ ((#(0) ↦ 'cat), 1)");
    assert_eq!(r.program.reified_answers(), syms(&["cat"]));
}

#[test]
fn same_cat_intermediate_trees() {
    let l = compile(SAME_CAT).unwrap();
    let rules = RuleSet::interleaving();
    let mut p = l.program;
    let mut lines = vec![p.tree.to_string()];
    while let Some(s) = p.step(&rules).unwrap() {
        assert!(!p.is_terminal());
        p = s.program;
        lines.push(p.tree.to_string());
    }
    assert_eq!(
        lines,
        [
            "∃ (p) same(p, 'cat) (∅, 0)",
            "same(#(0), 'cat) (∅, 1)",
            "delay(go(same(#(0), 'cat) (∅, 1)))",
            "go(same(#(0), 'cat) (∅, 1))",
            "#(0) ≡ 'cat (∅, 1)",
            "⊤ ((#(0) ↦ 'cat), 1)",
        ]
    );
}

#[test]
fn interleaving_order() {
    assert_eq!(
        answers(ANIMALS, RuleSet::interleaving()),
        syms(&["fish", "turtle", "dog", "cat"])
    );
}

#[test]
fn dfs_order() {
    assert_eq!(
        answers(ANIMALS, RuleSet::dfs()),
        syms(&["turtle", "cat", "dog", "fish"])
    );
}

#[test]
fn two_branch_promotion() {
    let l = compile(CAT_DOG).unwrap();
    let rules = RuleSet::interleaving();
    let mut p = l.program;
    let mut trace = Vec::new();
    let promoted = loop {
        let s = p.step(&rules).unwrap().expect("answer before termination");
        trace.push(s.rule);
        p = s.program;
        if let SearchTree::Plus(..) = &*p.tree {
            break s.rule;
        }
    };
    assert_eq!(
        p.tree.to_string(),
        "(⊤ ((#(0) ↦ 'cat), 1) + go(same(#(0), 'dog) (∅, 1)))"
    );
    assert_eq!(trace[1], RuleId::DistrDisj);
    // the left branch answers first, so the promoting rule is the left one
    assert_eq!(promoted, RuleId::PromoteLeft);
    assert_eq!(p.reified_answers(), syms(&["cat"]));
}

#[test]
fn answer_orders_agree_as_sets_on_two_branch() {
    let mut a = answers(CAT_DOG, RuleSet::interleaving());
    let mut b = answers(CAT_DOG, RuleSet::dfs());
    assert_eq!(b, syms(&["cat", "dog"]));
    a.sort_by_key(|t| t.to_string());
    b.sort_by_key(|t| t.to_string());
    assert_eq!(a, b);
}

#[test]
fn terminal_cases() {
    let l = compile("(run* (q) (== 'a 'b))").unwrap();
    let r = run_bounded(&l.program, &RuleSet::interleaving(), 10, None).unwrap();
    assert!(r.program.tree.is_empty());
    assert!(r.program.is_terminal());
    assert!(r.program.step(&RuleSet::interleaving()).unwrap().is_none());
    assert!(r.program.reified_answers().is_empty());

    let l = compile("(run* (q) succeed)").unwrap();
    let r = run_bounded(&l.program, &RuleSet::interleaving(), 10, None).unwrap();
    assert_eq!(r.program.reified_answers(), syms(&["_0"]));
    assert!(r.program.locate_redex(&RuleSet::dfs()).unwrap().is_none());
}

#[test]
fn zero_budget() {
    let l = compile(ANIMALS).unwrap();
    let r = run_bounded(&l.program, &RuleSet::interleaving(), 0, None).unwrap();
    assert_eq!(r.halt, Halt::Budget);
    assert!(r.trace.is_empty());
    assert_eq!(r.program, l.program);
}

#[test]
fn answer_quota() {
    let l = compile(ANIMALS).unwrap();
    let r = run_bounded(&l.program, &RuleSet::interleaving(), 10_000, Some(2)).unwrap();
    assert_eq!(r.halt, Halt::Answers);
    assert_eq!(r.program.reified_answers(), syms(&["fish", "turtle"]));
}

#[test]
fn newb_appendoh_diverges() {
    let src = "(defrel (appendoh l s ls)
      (conde
       ((== '() l) (== s ls))
       ((fresh (a d res)
          (appendoh d s res)
          (== `(,a . ,d) l)
          (== `(,a . ,res) ls)))))
    (run* (q) (fresh (x y z) (appendoh x y z)))";
    let l = compile(src).unwrap();
    let r = run_bounded(&l.program, &RuleSet::interleaving(), 3000, None).unwrap();
    assert_ne!(r.halt, Halt::Terminal);
    check_well_formed(&r.program, &l.source_map).unwrap();
}

#[test]
fn every_animals_state_is_well_formed() {
    for rules in [RuleSet::interleaving(), RuleSet::dfs()] {
        let l = compile(ANIMALS).unwrap();
        let mut p = l.program;
        check_well_formed(&p, &l.source_map).unwrap();
        while let Some(s) = p.step(&rules).unwrap() {
            p = s.program;
            check_well_formed(&p, &l.source_map).unwrap();
        }
    }
}
