use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hecke_bench::{
    afe, bessel, eisenstein_on_line, exponential_sum, hecke_characters, AFE_TS, BESSEL_CASES, EISENSTEIN_TS,
    HECKE_DISCS,
};

fn bench_bessel(c: &mut Criterion) {
    let mut group = c.benchmark_group("bessel_k_scaled");
    for (t, y) in BESSEL_CASES {
        group.bench_with_input(BenchmarkId::from_parameter(format!("t{t}_y{y}")), &(t, y), |b, &(t, y)| {
            b.iter(|| bessel(black_box(t), black_box(y)).unwrap())
        });
    }
    group.finish();
}

fn bench_eisenstein(c: &mut Criterion) {
    let mut group = c.benchmark_group("eisenstein");
    for t in EISENSTEIN_TS {
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| b.iter(|| eisenstein_on_line(black_box(t)).unwrap()));
    }
    group.finish();
}

fn bench_afe(c: &mut Criterion) {
    let mut group = c.benchmark_group("epstein_afe");
    group.sample_size(10);
    for t in AFE_TS {
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| b.iter(|| afe(black_box(t)).unwrap()));
    }
    group.finish();
}

fn bench_exp_sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("exp_sum");
    group.sample_size(10);
    for t in [1e3, 1e5] {
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| b.iter(|| exponential_sum(black_box(t)).unwrap()));
    }
    group.finish();
}

fn bench_hecke(c: &mut Criterion) {
    let mut group = c.benchmark_group("lk_hecke_all");
    group.sample_size(10);
    for d in HECKE_DISCS {
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| b.iter(|| hecke_characters(black_box(d)).unwrap()));
    }
    group.finish();
}

criterion_group!(kernels, bench_bessel, bench_eisenstein, bench_afe, bench_exp_sum, bench_hecke);
criterion_main!(kernels);
