use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sat2probe::generators::{generate, map_difficulty, GeneratorKind};
use sat2probe::harness::{generate_dataset, verify, RunConfig};
use sat2probe::logic::count_models_with;
use sat2probe::par::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn model_counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_models");
    let params = map_difficulty(GeneratorKind::MonoBridge, &Default::default(), 20).unwrap();
    let f = generate(&params, 7).unwrap().formula;
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, f.num_vars()), &f, |b, f| {
            b.iter(|| count_models_with(black_box(f), 24, exec).unwrap())
        });
    }
    group.finish();
}

fn dataset(c: &mut Criterion) {
    let mut config = RunConfig { formulas_per_setting: 2, ..RunConfig::default() };
    config.sweeps.truncate(1);
    let mut group = c.benchmark_group("dataset");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("generate", name), |b| {
            b.iter(|| generate_dataset(black_box(&config), exec).0.len())
        });
    }
    let (records, _) = generate_dataset(&config, Execution::Parallel);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("verify", name), |b| b.iter(|| verify(black_box(&records), exec).len()));
    }
    group.finish();
}

criterion_group!(benches, model_counting, dataset);
criterion_main!(benches);
