use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fdh_core::oracle::random_dataset;
use fdh_core::{classify_all, classify_all_sequential, Tolerance};

fn batch(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut group = c.benchmark_group("classify_all");
    for n in [50usize, 200, 800] {
        let exact = random_dataset(7, n, 3, 2);
        let float = exact.to_f64();
        group.bench_with_input(BenchmarkId::new("rayon/f64", n), &float, |b, d| {
            b.iter(|| classify_all(black_box(d), tol))
        });
        group.bench_with_input(BenchmarkId::new("sequential/f64", n), &float, |b, d| {
            b.iter(|| classify_all_sequential(black_box(d), tol))
        });
        if n <= 200 {
            group.bench_with_input(BenchmarkId::new("rayon/exact", n), &exact, |b, d| {
                b.iter(|| classify_all(black_box(d), tol))
            });
            group.bench_with_input(BenchmarkId::new("sequential/exact", n), &exact, |b, d| {
                b.iter(|| classify_all_sequential(black_box(d), tol))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
