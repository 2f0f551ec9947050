//! Prints a few generated programs and run statistics.
use mkstep_core::{run_bounded, Halt, RuleSet};
use mkstep_harness::{gen_program, GenConfig};

fn main() {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let (mut term, mut budget, mut steps, mut answers, mut max_size, mut some) = (0, 0, 0, 0, 0, 0);
    for seed in 0..n {
        let g = gen_program(&GenConfig {
            recursion: seed % 3 == 0,
            ..GenConfig::with_seed(seed)
        });
        if seed < 3 {
            println!("{}", g.source);
        }
        let r = run_bounded(&g.lowered.program, &RuleSet::interleaving(), 200, None).unwrap();
        match r.halt {
            Halt::Terminal => term += 1,
            _ => budget += 1,
        }
        steps += r.trace.len();
        answers += r.program.answers().len();
        some += (!r.program.answers().is_empty()) as usize;
        max_size = max_size.max(r.program.tree.size());
    }
    println!("with answers {some} terminal {term} budget {budget} mean steps {} mean answers {} max tree {max_size}",
        steps as f64 / n as f64, answers as f64 / n as f64);
}
