//! Benchmarks for the numerically heavy paths: the dense eigensolver,
//! a single teleportation step, the analytic chain curves, and the
//! Monte Carlo chain estimator.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use pdo_core::{
    chain_value, channel_pdo, eig_hermitian, estimate_chain, teleport_channel, theory_curve,
    BlochVector, ChainConfig, ChainMode, ChannelParams, ComplexOperator, DensityMatrix,
};

fn eight_by_eight() -> ComplexOperator {
    let four = channel_pdo(ChannelParams::new(0.5, 0.5, 0.25).unwrap())
        .matrix()
        .clone();
    let two = DensityMatrix::from_bloch(BlochVector::new(0.3, 0.1, 0.4).unwrap())
        .matrix()
        .clone();
    four.kron(&two).unwrap()
}

fn bench_eigensolver(c: &mut Criterion) {
    let small = channel_pdo(ChannelParams::new(0.8, 0.8, 0.64).unwrap())
        .matrix()
        .clone();
    let large = eight_by_eight();
    c.bench_function("eig_hermitian 4x4", |b| {
        b.iter(|| eig_hermitian(black_box(&small)).unwrap())
    });
    c.bench_function("eig_hermitian 8x8", |b| {
        b.iter(|| eig_hermitian(black_box(&large)).unwrap())
    });
}

fn bench_teleport(c: &mut Criterion) {
    let rho = DensityMatrix::from_bloch(BlochVector::new(0.6, 0.0, 0.8).unwrap());
    let eta = ChannelParams::new(0.5, 0.3, 0.2).unwrap();
    c.bench_function("teleport_channel", |b| {
        b.iter(|| teleport_channel(black_box(&rho), black_box(eta)).unwrap())
    });
}

fn bench_chains(c: &mut Criterion) {
    let config = ChainConfig::with_default_settings(ChainMode::Temporal, 20, 1.0).unwrap();
    c.bench_function("chain_value n=20", |b| {
        b.iter(|| chain_value(black_box(&config)).unwrap())
    });
    c.bench_function("theory_curve spatial 2..=20", |b| {
        b.iter(|| theory_curve(ChainMode::Spatial, 2, 20, black_box(0.982)).unwrap())
    });
}

fn bench_montecarlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("montecarlo");
    group.sample_size(10);
    group.bench_function("estimate_chain hybrid n=10 1e4 shots", |b| {
        b.iter(|| estimate_chain(ChainMode::Hybrid, 10, black_box(0.982), 10_000, 7).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_eigensolver,
    bench_teleport,
    bench_chains,
    bench_montecarlo
);
criterion_main!(benches);
