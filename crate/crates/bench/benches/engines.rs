use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use farcheck_bench::corpus;
use farcheck_core::oracles::{backward_reach, explicit_reach, BackwardConfig, DEFAULT_STATE_LIMIT};
use farcheck_core::{check, Config, Solver};

fn engines(c: &mut Criterion) {
    let models = corpus();
    let mut far = c.benchmark_group("far");
    for sys in &models {
        far.bench_function(&sys.name, |b| {
            b.iter(|| check(black_box(sys), &Solver::new(&sys.sig), &Config::default()).verdict)
        });
    }
    far.finish();

    let mut back = c.benchmark_group("backward");
    for sys in &models {
        back.bench_function(&sys.name, |b| {
            b.iter(|| backward_reach(black_box(sys), &Solver::new(&sys.sig), &BackwardConfig::default()).verdict)
        });
    }
    back.finish();

    let mut explicit = c.benchmark_group("explicit3");
    for sys in &models {
        explicit.bench_function(&sys.name, |b| b.iter(|| explicit_reach(black_box(sys), 3, DEFAULT_STATE_LIMIT)));
    }
    explicit.finish();
}

criterion_group!(benches, engines);
criterion_main!(benches);
