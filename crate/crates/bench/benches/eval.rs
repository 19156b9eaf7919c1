use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use prdesc_bench::{addition, multiplication};
use prdesc_core::{eval, fingerprint, Budget, Tuple};

fn bench_eval(c: &mut Criterion) {
    let budget = Budget::default();
    let mut g = c.benchmark_group("eval");
    for n in [10u64, 100, 1000] {
        let x = Tuple::from_u64s(&[n, n]);
        g.bench_with_input(BenchmarkId::new("addition", n), &x, |b, x| {
            b.iter(|| eval(&addition(), black_box(x), budget))
        });
        g.bench_with_input(BenchmarkId::new("multiplication", n), &x, |b, x| {
            b.iter(|| eval(&multiplication(), black_box(x), budget))
        });
    }
    g.finish();
    c.bench_function("fingerprint/multiplication-grid-8", |b| {
        let t = multiplication();
        b.iter(|| fingerprint(black_box(&t), 8, budget))
    });
}

criterion_group!(benches, bench_eval);
criterion_main!(benches);
