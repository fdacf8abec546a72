use criterion::{black_box, criterion_group, criterion_main, Criterion};

use underspread_bench::{square_fixture, GRID, TF};
use underspread_core::*;

fn kernels(c: &mut Criterion) {
    let (p, lat) = square_fixture();
    c.bench_function("ambiguity", |b| {
        b.iter(|| ambiguity(&p, black_box(0.003), black_box(0.7)))
    });
    c.bench_function("interference_sum", |b| {
        b.iter(|| interference_sum(&p, &lat, black_box(0.003), black_box(0.004)))
    });
    c.bench_function("taylor_coeffs", |b| b.iter(|| taylor_coeffs(&p, &lat)));
    let rect = SpreadRect::square(1e-4).unwrap();
    c.bench_function("ambiguity_extremes", |b| {
        b.iter(|| ambiguity_extremes(&p, &lat, black_box(&rect)))
    });
}

fn bound(c: &mut Criterion) {
    let setting = SquareSetting::new(TF, 1e-6, 1e-6, ExtremesMode::Taylor).unwrap();
    c.bench_function("lb_simple", |b| b.iter(|| setting.bound(black_box(1e3), 1.0)));
    c.bench_function("penalty_infimum", |b| {
        b.iter(|| penalty_infimum(black_box(1e3), 2e-3, 1e-5, 3e-5))
    });
}

fn interval(c: &mut Criterion) {
    let mut g = c.benchmark_group("interval");
    g.sample_size(10);
    g.bench_function("solve_taylor", |b| {
        let opts = IntervalOptions {
            mode: ExtremesMode::Taylor,
            ..IntervalOptions::default()
        };
        b.iter(|| solve_interval_with(TF, 1e-6, 1e-6, &opts))
    });
    g.bench_function("sweep_4x4_auto", |b| b.iter(|| sweep(TF, &GRID, &GRID, 0.75)));
    g.finish();
}

criterion_group!(benches, kernels, bound, interval);
criterion_main!(benches);
