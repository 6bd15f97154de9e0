use std::hint::black_box;

use clustersense::harness::{error_vs_budget_sweep, phase_transition_sweep, Execution, ExperimentConfig};
use criterion::{criterion_group, criterion_main, Criterion};

fn executions() -> Vec<(&'static str, Execution)> {
    let mut out = vec![("sequential", Execution::Sequential)];
    #[cfg(feature = "parallel")]
    out.push(("parallel", Execution::Parallel { threads: None }));
    out
}

fn phase_transition(c: &mut Criterion) {
    let mut cfg = ExperimentConfig::phase_transition();
    cfg.set("theta-list", "4,6,8").unwrap();
    cfg.trials = 20;
    let mut group = c.benchmark_group("phase_transition");
    group.sample_size(10);
    for (name, exec) in executions() {
        group.bench_function(name, |b| {
            b.iter(|| black_box(phase_transition_sweep(cfg.clone(), exec).unwrap()))
        });
    }
    group.finish();
}

fn error_vs_budget(c: &mut Criterion) {
    let mut cfg = ExperimentConfig::error_vs_budget();
    cfg.set("budget-list", "64,1024,16384").unwrap();
    cfg.trials = 10;
    let mut group = c.benchmark_group("error_vs_budget");
    group.sample_size(10);
    for (name, exec) in executions() {
        group.bench_function(name, |b| {
            b.iter(|| black_box(error_vs_budget_sweep(cfg.clone(), exec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, phase_transition, error_vs_budget);
criterion_main!(benches);
