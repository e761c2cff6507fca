use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spectra_bench::{hermitian, pencil, quartic};
use spectra_core::hermat::{default_zero_tol, eigh, ldl_factor};
use spectra_core::solver::{locate, nu};
use spectra_core::SolverConfig;

fn factorizations(c: &mut Criterion) {
    let mut g = c.benchmark_group("hermat");
    for n in [16, 64, 128] {
        let a = hermitian(n);
        g.bench_with_input(BenchmarkId::new("ldl", n), &a, |b, a| {
            b.iter(|| ldl_factor(black_box(a), default_zero_tol(n)))
        });
        g.bench_with_input(BenchmarkId::new("eigh", n), &a, |b, a| {
            b.iter(|| eigh(black_box(a)).unwrap())
        });
    }
    g.finish();
}

fn schur(c: &mut Criterion) {
    let mut g = c.benchmark_group("pencil");
    for n in [8, 32, 64] {
        let (p, lambda) = pencil(n, n);
        g.bench_with_input(BenchmarkId::new("schur", n), &lambda, |b, &l| {
            b.iter(|| p.schur(black_box(l)).unwrap())
        });
        let cfg = SolverConfig::default();
        g.bench_with_input(BenchmarkId::new("nu", n), &lambda, |b, &l| {
            b.iter(|| nu(&p, black_box(l), &cfg).unwrap())
        });
    }
    g.finish();
}

fn localization(c: &mut Criterion) {
    let mut g = c.benchmark_group("solver");
    g.sample_size(10);
    let cfg = SolverConfig::default();
    for n in [16, 32] {
        let p = quartic(n);
        g.bench_with_input(BenchmarkId::new("locate_quartic", n), &p, |b, p| {
            b.iter(|| locate(p, 0.5, 200.0, &cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, factorizations, schur, localization);
criterion_main!(benches);
