use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rice_ie::bounds::{bracket, error_record};
use rice_ie::ie::ORACLE_TOL;
use rice_ie::marcum::{marcum_q1, marcum_q_half, MarcumArgs};
use rice_ie::specfun::{bessel_i_half, bessel_i_scaled, struve_l_half};
use rice_ie_bench::{label, points};

fn bounds(c: &mut Criterion) {
    let mut group = c.benchmark_group("bounds");
    for p in points() {
        group.bench_with_input(BenchmarkId::new("bracket", label(&p)), &p, |b, p| {
            b.iter(|| bracket(black_box(p)))
        });
    }
    let p = points()[1];
    group.bench_function("error_record/k=0.5,x=7", |b| b.iter(|| error_record(black_box(&p), ORACLE_TOL)));
    group.finish();
}

fn marcum(c: &mut Criterion) {
    let mut group = c.benchmark_group("marcum");
    for (a, bb) in [(1.0, 1.0), (3.2, 1.1), (12.2, 3.27)] {
        let args = MarcumArgs::new(a, bb).unwrap();
        let id = format!("a={a},b={bb}");
        group.bench_with_input(BenchmarkId::new("q1", &id), &args, |b, args| {
            b.iter(|| marcum_q1(black_box(*args)))
        });
        group.bench_with_input(BenchmarkId::new("q_half", &id), &args, |b, args| {
            b.iter(|| marcum_q_half(black_box(*args)))
        });
    }
    group.finish();
}

fn special_functions(c: &mut Criterion) {
    let mut group = c.benchmark_group("specfun");
    for x in [0.5, 20.0, 200.0] {
        group.bench_with_input(BenchmarkId::new("bessel_i0_scaled", x), &x, |b, &x| {
            b.iter(|| bessel_i_scaled(0, black_box(x)))
        });
        group.bench_with_input(BenchmarkId::new("bessel_i5_scaled", x), &x, |b, &x| {
            b.iter(|| bessel_i_scaled(5, black_box(x)))
        });
        group.bench_with_input(BenchmarkId::new("bessel_i_3half", x), &x, |b, &x| {
            b.iter(|| bessel_i_half(1, black_box(x)))
        });
        group.bench_with_input(BenchmarkId::new("struve_l_5half", x), &x, |b, &x| {
            b.iter(|| struve_l_half(2.5, black_box(x)))
        });
    }
    group.finish();
}

criterion_group!(benches, bounds, marcum, special_functions);
criterion_main!(benches);
