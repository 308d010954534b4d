use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hyperbolic_heat::kernel::{KernelQuery, QuadratureConfig};
use hyperbolic_heat::sweep::{evaluate_grid, Execution};
use hyperbolic_heat::tcheb::Weight;

fn grid(n: usize) -> Vec<KernelQuery> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let t = 10f64.powf(-2.0 + 4.0 * i as f64 / (n - 1) as f64);
        for j in 0..n {
            let r = 5.0 * j as f64 / (n - 1) as f64;
            out.push(KernelQuery::new(t, r, Weight::new(1.3).unwrap()).unwrap());
        }
    }
    out
}

fn sweep(c: &mut Criterion) {
    let cfg = QuadratureConfig::with_rel_tol(1e-8);
    let mut group = c.benchmark_group("evaluate_grid");
    group.sample_size(20);
    for n in [4usize, 16] {
        let queries = grid(n);
        for (label, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(label, n * n), &queries, |b, q| {
                b.iter(|| evaluate_grid(black_box(q), &cfg, exec))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
