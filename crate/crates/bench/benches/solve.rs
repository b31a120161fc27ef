use criterion::{criterion_group, criterion_main, Criterion};

use cdp_bench::fixtures;
use cdp_core::dominance::NogoodMode;
use cdp_core::driver;

fn bench_forward(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_forward");
    for fixture in fixtures() {
        group.bench_function(fixture.name, |b| {
            b.iter(|| {
                driver::solve_forward(
                    &fixture.instance,
                    &fixture.spec,
                    NogoodMode::EquivalenceFree,
                    &fixture.config,
                )
                .unwrap()
                .forward_solutions
                .len()
            })
        });
    }
    group.finish();
}

fn bench_full_pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_with_backward");
    for fixture in fixtures() {
        group.bench_function(fixture.name, |b| {
            b.iter(|| {
                driver::solve(
                    &fixture.instance,
                    &fixture.spec,
                    NogoodMode::EquivalenceFree,
                    &fixture.config,
                )
                .unwrap()
                .final_set
                .map(|f| f.len())
            })
        });
    }
    group.finish();
}

fn bench_brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force_oracle");
    for fixture in fixtures() {
        if fixture.spec.is_custom() {
            continue;
        }
        group.bench_function(fixture.name, |b| {
            b.iter(|| {
                driver::brute_force_full_solution(&fixture.instance, &fixture.spec, 1_000_000)
                    .unwrap()
                    .len()
            })
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_forward,
    bench_full_pipeline,
    bench_brute_force
);
criterion_main!(benches);
