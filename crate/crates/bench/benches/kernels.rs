use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use galois_lab::permstat::{descent_inv_table_by, TableMethod};
use galois_lab::qcombi::{galois_number, q_binomial};
use galois_lab::stats::normality_report;
use galois_lab::QPoly;

fn galois(c: &mut Criterion) {
    let mut group = c.benchmark_group("galois_number");
    for (n, r) in [(40, 2), (80, 2), (60, 5)] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{n}x{r}")), &(n, r), |b, &(n, r)| {
            b.iter(|| galois_number(black_box(n), black_box(r)))
        });
    }
    group.finish();
}

fn binomial(c: &mut Criterion) {
    c.bench_function("q_binomial/100_50", |b| b.iter(|| q_binomial(black_box(100), black_box(50))));
}

fn tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("descent_inv_table");
    group.sample_size(10);
    for n in [8usize, 10] {
        group.bench_with_input(BenchmarkId::new("enumerate", n), &n, |b, &n| {
            b.iter(|| descent_inv_table_by(n, TableMethod::Enumerate))
        });
        group.bench_with_input(BenchmarkId::new("inclusion_exclusion", n), &n, |b, &n| {
            b.iter(|| descent_inv_table_by(n, TableMethod::InclusionExclusion))
        });
    }
    group.finish();
}

fn multiply(c: &mut Criterion) {
    let mut group = c.benchmark_group("qpoly_mul");
    for len in [16usize, 256, 2048] {
        let a = QPoly::from_i64s(&(0..len as i64).map(|i| i * 7919 % 1000 - 500).collect::<Vec<_>>());
        let b = QPoly::from_i64s(&(0..len as i64).map(|i| i * 104_729 % 997).collect::<Vec<_>>());
        group.bench_with_input(BenchmarkId::from_parameter(len), &len, |bench, _| bench.iter(|| &a * &b));
    }
    group.finish();
}

fn normality(c: &mut Criterion) {
    let mut group = c.benchmark_group("normality_report");
    group.sample_size(10);
    group.bench_function("N80_r2", |b| b.iter(|| normality_report(black_box(80), 2, 1e-12)));
    group.finish();
}

criterion_group!(benches, galois, binomial, tables, multiply, normality);
criterion_main!(benches);
