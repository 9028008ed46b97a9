use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use vanish_bench::Case;
use vanish_core::{mpa_solve, Energy, MpaOptions};

fn energy_eval(c: &mut Criterion) {
    let mut group = c.benchmark_group("energy");
    for m in [2000usize, 20000] {
        let case = Case::prototype(6486.0, m);
        let energy = Energy::new(&case.grid, &case.pen).unwrap();
        let u = case.endpoint();
        group.bench_with_input(BenchmarkId::new("j", m), &u, |b, u| b.iter(|| energy.j(black_box(u))));
        group.bench_with_input(BenchmarkId::new("gradient", m), &u, |b, u| {
            b.iter(|| energy.gradient(black_box(u)))
        });
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("mpa_solve");
    group.sample_size(10);
    for (name, case) in [("sanity", Case::sanity(2000)), ("prototype", Case::prototype(6486.0, 2000))] {
        let energy = Energy::new(&case.grid, &case.pen).unwrap();
        let e = case.endpoint();
        group.bench_function(name, |b| b.iter(|| mpa_solve(&energy, black_box(&e), &MpaOptions::default()).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, energy_eval, solve);
criterion_main!(benches);
