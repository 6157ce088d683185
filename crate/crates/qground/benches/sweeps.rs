use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qground::encoders::{check_observable, three_from_walk};
use qground::par::{self, Strategy};
use qground::probe::{axiom_truth_table, find_breaking_point, planted_sentence, probe_conjecture};
use qground::semantics::{eval_fn, Semantics, ThetaInterpretation};
use qground::{Func, Nat};

const STRATEGIES: [Strategy; 2] = [Strategy::Sequential, Strategy::Parallel];

fn breaking_points(c: &mut Criterion) {
    let sigma = ThetaInterpretation::sample(0x5eed, 32);
    let phi = planted_sentence(1000);
    let mut g = c.benchmark_group("breaking_point_k1000");
    for s in STRATEGIES {
        let sem = Semantics::standard(&sigma).with_strategy(s);
        g.bench_with_input(BenchmarkId::from_parameter(format!("{s:?}")), &sem, |b, sem| {
            b.iter(|| find_breaking_point(black_box(&phi), 1024, sem).unwrap())
        });
    }
    g.finish();
}

fn observability(c: &mut Criterion) {
    let t = three_from_walk();
    let mut g = c.benchmark_group("observable_200_samples");
    for s in STRATEGIES {
        g.bench_function(format!("{s:?}"), |b| b.iter(|| check_observable(black_box(&t), 200, 7, s).unwrap()));
    }
    g.finish();
}

fn function_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("sub_div_table_2e10");
    for s in STRATEGIES {
        g.bench_function(format!("{s:?}"), |b| {
            b.iter(|| {
                par::map_range(s, 0..1 << 10, |x| {
                    let x = Nat::from(x);
                    (0..1u64 << 10)
                        .map(|y| {
                            let y = Nat::from(y);
                            eval_fn(Func::Sub, &[x.clone(), y.clone()]).bits() + eval_fn(Func::Div, &[x.clone(), y]).bits()
                        })
                        .sum::<u64>()
                })
            })
        });
    }
    g.finish();
}

fn probes(c: &mut Criterion) {
    let ks = [4u64, 16, 256, 4096];
    let mut g = c.benchmark_group("probe_conjecture");
    g.sample_size(10);
    for s in STRATEGIES {
        g.bench_function(format!("{s:?}"), |b| b.iter(|| probe_conjecture(black_box(&ks), s)));
    }
    g.finish();
}

fn truth_tables(c: &mut Criterion) {
    let sigma = ThetaInterpretation::sample(0x5eed, 16);
    let mut g = c.benchmark_group("axiom_truth_table_d4");
    g.sample_size(10);
    for s in STRATEGIES {
        g.bench_function(format!("{s:?}"), |b| b.iter(|| axiom_truth_table(&[4], &sigma, 4, s)));
    }
    g.finish();
}

criterion_group!(benches, breaking_points, observability, function_table, probes, truth_tables);
criterion_main!(benches);
