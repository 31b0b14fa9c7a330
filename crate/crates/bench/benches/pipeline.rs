use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dimerspin::{
    concurrence, run_sweep, GridAxis, PreparedChain, Strategy, SweepParam, SweepRequest,
    TwoQubitState,
};
use dimerspin_bench::{closed_chain, tilted_xx};

fn prepare(c: &mut Criterion) {
    let mut g = c.benchmark_group("prepare");
    g.sample_size(10);
    for n in [8, 10, 12] {
        let spec = closed_chain(n);
        g.bench_with_input(BenchmarkId::new("sectored", n), &spec, |b, s| {
            b.iter(|| PreparedChain::with_strategy(s, Strategy::Sectored).unwrap())
        });
    }
    for n in [8, 10] {
        let spec = closed_chain(n);
        g.bench_with_input(BenchmarkId::new("dense", n), &spec, |b, s| {
            b.iter(|| PreparedChain::with_strategy(s, Strategy::Dense).unwrap())
        });
        let tilted = tilted_xx(n, 1.0);
        g.bench_with_input(BenchmarkId::new("symmetric", n), &tilted, |b, s| {
            b.iter(|| PreparedChain::with_strategy(s, Strategy::Symmetric).unwrap())
        });
    }
    g.finish();
}

fn reduce(c: &mut Criterion) {
    let mut g = c.benchmark_group("pair_state");
    let chain = PreparedChain::new(&closed_chain(12)).unwrap();
    for kt in [0.02, 0.1, 1.0] {
        let w = chain.weights(1.0, kt).unwrap();
        g.bench_with_input(BenchmarkId::new("n12", kt), &w, |b, w| {
            b.iter(|| chain.pair_state(w, 1).unwrap())
        });
    }
    g.finish();
}

fn kernel(c: &mut Criterion) {
    let singlet = TwoQubitState::pure([0.0, 0.5f64.sqrt(), -(0.5f64.sqrt()), 0.0]);
    let state = TwoQubitState::mix(0.7, &singlet, &TwoQubitState::maximally_mixed());
    c.bench_function("concurrence", |b| {
        b.iter(|| concurrence(black_box(&state)).unwrap())
    });
}

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    let axis = GridAxis::linspace(SweepParam::B, 0.0, 5.0, 100).unwrap();
    for threads in [1, 4] {
        let req = SweepRequest::new(closed_chain(10), 0.1, vec![axis.clone()], vec![1, 2])
            .with_threads(threads);
        g.bench_with_input(BenchmarkId::new("n10_b100", threads), &req, |b, r| {
            b.iter(|| run_sweep(r).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, prepare, reduce, kernel, sweep);
criterion_main!(benches);
