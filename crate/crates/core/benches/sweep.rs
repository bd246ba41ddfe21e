use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use densemem::dynamics::{synchronous_step, ModelSpec, NetworkState};
use densemem::experiments::{run_sweep, TrialSeed, TrialSpec};
use densemem::pattern::corrupt_on_sphere;
use densemem::{generate_patterns, SeedSpec};

fn grid() -> Vec<TrialSpec> {
    [25usize, 561, 4000]
        .iter()
        .map(|&m| TrialSpec::new(ModelSpec::exponential(), 40, m, 5, TrialSeed::new(1, 0)))
        .collect()
}

fn threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("exponential_sweep");
    group.sample_size(10);
    let grid = grid();
    for parallelism in [1, threads()] {
        group.bench_with_input(BenchmarkId::new("parallelism", parallelism), &parallelism, |b, &p| {
            b.iter(|| run_sweep(black_box(&grid), 64, p).unwrap())
        });
    }
    group.finish();
}

fn one_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("synchronous_step");
    for (name, model) in [
        ("classical", ModelSpec::classical()),
        ("polynomial3", ModelSpec::polynomial(3).unwrap()),
        ("exponential", ModelSpec::exponential()),
    ] {
        let store = generate_patterns(512, 1024, SeedSpec::new(2, "bench", 0)).unwrap();
        let start = corrupt_on_sphere(&store.patterns()[0], 64, SeedSpec::new(2, "bench-corrupt", 0)).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| {
                let mut state = NetworkState::new(&store, start.clone()).unwrap();
                synchronous_step(&mut state, &model).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, sweep, one_step);
criterion_main!(benches);
