use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use esetlab::curve_geometry::c_intervals;
use esetlab::logderiv::{build_exceptional_set, cartan_discs, log_derivative_direct, log_derivative_recursive};
use esetlab::measure::{exceptional_c_measure, IntervalUnion};
use esetlab::{Ambient, ComplexPoint, Gauge};
use esetlab_bench::{plane_collection, rational, spiral};

fn c_interval_bench(c: &mut Criterion) {
    let col = plane_collection(500);
    c.bench_function("c_intervals_500", |b| b.iter(|| c_intervals(black_box(&col), 0.0)));
    c.bench_function("exceptional_measure_500", |b| b.iter(|| exceptional_c_measure(black_box(&col), 0.0).unwrap()));
}

fn cartan_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("cartan_discs");
    for n in [10usize, 50, 200] {
        let pts = spiral(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &pts, |b, pts| b.iter(|| cartan_discs(pts, 0.5)));
    }
    group.finish();
}

fn logderiv_bench(c: &mut Criterion) {
    let f = rational(100);
    let z = ComplexPoint::new(60.0, 3.0);
    c.bench_function("log_derivative_recursive_k3", |b| b.iter(|| log_derivative_recursive(&f, 3, 0, black_box(z)).unwrap()));
    let small = rational(20);
    c.bench_function("log_derivative_direct_k2_j1", |b| {
        b.iter(|| log_derivative_direct(&small, 2, 1, black_box(z)).unwrap())
    });
    let g = Gauge::concave_power(0.75).unwrap();
    c.bench_function("build_exceptional_set_100", |b| {
        b.iter(|| build_exceptional_set(&f, 0, 2.0, &g, Ambient::Plane, None).unwrap())
    });
}

fn interval_bench(c: &mut Criterion) {
    let items: Vec<(f64, f64)> = (0..1000).map(|i| ((i * 37 % 1000) as f64, (i * 37 % 1000) as f64 + 1.5)).collect();
    c.bench_function("interval_union_1000", |b| {
        b.iter(|| IntervalUnion::from_intervals(black_box(items.iter().copied())).unwrap().measure())
    });
}

criterion_group!(benches, c_interval_bench, cartan_bench, logderiv_bench, interval_bench);
criterion_main!(benches);
