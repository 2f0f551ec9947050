use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use mkstep_core::RuleSet;
use mkstep_harness::batch::map_seeds_seq;
use mkstep_harness::{check_determinism, check_preservation, gen_program, GenConfig};

fn workload(seed: u64) -> usize {
    let cfg = GenConfig {
        recursion: seed % 2 == 1,
        ..GenConfig::with_seed(seed)
    };
    let g = gen_program(&cfg);
    let mut states = 0;
    for rules in [RuleSet::interleaving(), RuleSet::dfs()] {
        states += check_determinism(&g.lowered.program, &rules, 200).unwrap();
        check_preservation(&g.lowered.program, &g.lowered.source_map, &rules, 200).unwrap();
    }
    states
}

fn batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("determinism_and_preservation");
    group.sample_size(10);
    for n in [16u64, 64] {
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| map_seeds_seq(0..n, workload).iter().sum::<usize>())
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("rayon", n), &n, |b, &n| {
            b.iter(|| {
                mkstep_harness::batch::map_seeds_par(0..n, workload)
                    .iter()
                    .sum::<usize>()
            })
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let programs: Vec<_> = (0..32).map(|s| gen_program(&GenConfig::with_seed(s))).collect();
    c.bench_function("oracle_32_programs", |b| {
        b.iter(|| {
            programs
                .iter()
                .filter_map(|g| {
                    let p = mkstep_core::syntax::frontend(&g.source).unwrap();
                    mkstep_harness::oracle_answers(&p, 30).ok()
                })
                .count()
        })
    });
}

criterion_group!(benches, batch, oracle);
criterion_main!(benches);
