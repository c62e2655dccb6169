use criterion::{criterion_group, criterion_main, Criterion};
use ness_bench::regimes;
use ness_core::sweep::{Axis, Mode};
use ness_core::{
    liouvillian, pairwise_concurrences, run_sweep, steady_state_null, steady_state_rk4,
    DensityMatrix, Rk4Options, SweepSpec,
};
use std::hint::black_box;

fn generator(c: &mut Criterion) {
    for (name, p, b) in regimes() {
        c.bench_function(&format!("liouvillian/{name}"), |bench| {
            bench.iter(|| liouvillian(black_box(&p), black_box(&b)).unwrap())
        });
    }
}

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("steady_state");
    for (name, p, b) in regimes() {
        group.bench_function(format!("null_space/{name}"), |bench| {
            bench.iter(|| steady_state_null(black_box(&p), black_box(&b)).unwrap())
        });
    }
    group.sample_size(10);
    let rho0 = DensityMatrix::maximally_mixed();
    for (name, p, b) in regimes() {
        group.bench_function(format!("rk4/{name}"), |bench| {
            bench.iter(|| steady_state_rk4(&p, &b, &rho0, &Rk4Options::default()).unwrap())
        });
    }
    group.finish();
}

fn entanglement(c: &mut Criterion) {
    let (_, p, b) = &regimes()[1];
    let (rho, _) = steady_state_null(p, b).unwrap();
    c.bench_function("pairwise_concurrences", |bench| {
        bench.iter(|| pairwise_concurrences(black_box(&rho)).unwrap())
    });
}

fn sweep(c: &mut Criterion) {
    let spec = SweepSpec {
        mode: Mode::TmDtGrid,
        epsilon: 3.0,
        j1: 0.5,
        j2: 2.5,
        tm: Some(0.4),
        axes: vec![Axis::dt_auto(41)],
        ..SweepSpec::default()
    };
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("tm_dt_row_41", |bench| {
        bench.iter(|| run_sweep(&spec).unwrap())
    });
    group.finish();
}

criterion_group!(benches, generator, solvers, entanglement, sweep);
criterion_main!(benches);
