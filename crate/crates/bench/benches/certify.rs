use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use penner_bench::{chained_blocks, dense, slow_cycle};
use penner_core::{certify, check, graph_of, mat_pow, scc_decompose, spectral_radius, BigRational};

fn gap(den: u64) -> BigRational {
    BigRational::new(1.into(), den.into())
}

fn bench_mat_pow(c: &mut Criterion) {
    let mut group = c.benchmark_group("mat_pow");
    for &(n, m) in &[(8, 64), (16, 64), (16, 512), (32, 128)] {
        let a = dense(n, 7);
        group.bench_with_input(BenchmarkId::new(format!("n={n}"), m), &m, |b, &m| b.iter(|| mat_pow(black_box(&a), m)));
    }
    group.finish();
}

fn bench_scc(c: &mut Criterion) {
    let a = chained_blocks(32, 4);
    c.bench_function("scc_decompose/128", |b| b.iter(|| scc_decompose(&graph_of(black_box(&a)))));
}

fn bench_spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral_radius");
    for &n in &[4, 8, 16] {
        let a = dense(n, 3);
        group.bench_with_input(BenchmarkId::new("dense/1e-9", n), &a, |b, a| {
            b.iter(|| spectral_radius(a, &gap(1_000_000_000)))
        });
    }
    let cycle = slow_cycle(8);
    group.bench_function("slow_cycle/8/1e-6", |b| b.iter(|| spectral_radius(&cycle, &gap(1_000_000))));
    let chained = chained_blocks(8, 3);
    group.bench_function("chained/8x3/1e-9", |b| b.iter(|| spectral_radius(&chained, &gap(1_000_000_000))));
    group.finish();
}

fn bench_certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certificate");
    for &n in &[4, 8, 16] {
        let a = dense(n, 11);
        let cert = certify(&a).expect("dense matrices exceed one");
        group.bench_with_input(BenchmarkId::new("certify", n), &a, |b, a| b.iter(|| certify(black_box(a))));
        group.bench_with_input(BenchmarkId::new("check", n), &a, |b, a| b.iter(|| check(black_box(a), &cert)));
    }
    let chained = chained_blocks(8, 3);
    group.bench_function("certify/chained/8x3", |b| b.iter(|| certify(black_box(&chained))));
    group.finish();
}

criterion_group!(benches, bench_mat_pow, bench_scc, bench_spectral, bench_certify);
criterion_main!(benches);
