//! Prints each corpus program's answers and rule trace under both rule sets,
//! next to the oracle's answer set.
use mkstep_core::{compile, run_bounded, RuleSet};
use mkstep_harness::corpus;

fn main() {
    for e in corpus::load(&corpus::default_dir()).unwrap() {
        let l = compile(&e.source).unwrap();
        for name in ["interleaving", "dfs"] {
            let r = run_bounded(&l.program, &RuleSet::from_name(name).unwrap(), 5000, None).unwrap();
            let ans: Vec<String> = r.program.reified_answers().iter().map(|t| t.to_string()).collect();
            println!("{} {name} {:?} {ans:?} steps={}", e.name, r.halt, r.trace.len());
            if r.trace.len() < 12 {
                println!("  {:?}", r.trace.iter().map(|r| r.name()).collect::<Vec<_>>());
            }
        }
        let s = mkstep_core::syntax::frontend(&e.source).unwrap();
        println!("  oracle {:?}", mkstep_harness::oracle_answers(&s, 30));
    }
}
