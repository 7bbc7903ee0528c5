use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mahler_core::elliptic::{am_integral_quad, make_ctx, IntegrandKind};
use mahler_core::mahler::{mahler_1var_roots, mahler_nd, parse_poly};
use mahler_core::polylog::{li2, li3};
use mahler_core::qseries::{qseries_rhs, QSeriesKind};
use mahler_core::trig_integrals::ti;
use mahler_core::tsst::{ts_closed, ts_quad, ts_v1_closed};
use mahler_core::MahlerConfig;
use num_complex::Complex64 as C;

fn polylog(c: &mut Criterion) {
    let mut g = c.benchmark_group("polylog");
    for z in [C::new(0.3, 0.2), C::new(0.9, 0.4), C::new(-3.0, 1.0)] {
        g.bench_with_input(BenchmarkId::new("li2", z), &z, |b, &z| b.iter(|| li2(black_box(z))));
        g.bench_with_input(BenchmarkId::new("li3", z), &z, |b, &z| b.iter(|| li3(black_box(z))));
    }
    g.bench_function("ti(2)", |b| b.iter(|| ti(black_box(2.0))));
    g.finish();
}

fn double_integrals(c: &mut Criterion) {
    let mut g = c.benchmark_group("tsst");
    g.bench_function("ts_v1_closed", |b| b.iter(|| ts_v1_closed(black_box(0.7))));
    g.bench_function("ts_closed", |b| b.iter(|| ts_closed(black_box(0.8), black_box(0.5))));
    g.bench_function("ts_quad", |b| b.iter(|| ts_quad(black_box(0.8), black_box(0.5))));
    g.finish();
}

fn elliptic(c: &mut Criterion) {
    let ctx = make_ctx(0.6).unwrap();
    c.bench_function("am_integral_quad cn/sn", |b| b.iter(|| am_integral_quad(IntegrandKind::CnSn, black_box(&ctx))));
    c.bench_function("qseries_rhs dilog1", |b| b.iter(|| qseries_rhs(QSeriesKind::Dilog1, black_box(&ctx))));
}

fn mahler(c: &mut Criterion) {
    let mut g = c.benchmark_group("mahler");
    g.sample_size(10);
    let cubic: Vec<C> = [0.3, 2.0, -0.7, 0.2].iter().map(|&x| C::new(x, 0.1)).collect();
    g.bench_function("jensen 1-var cubic", |b| b.iter(|| mahler_1var_roots(black_box(&cubic))));
    g.bench_function("parse condon", |b| b.iter(|| parse_poly(black_box("1+x+(1-x)*(y+z)"))));
    let smyth = parse_poly("1+x+y+z").unwrap();
    for grid in [256, 1024] {
        let cfg = MahlerConfig::jensen(grid);
        g.bench_with_input(BenchmarkId::new("smyth jensen", grid), &cfg, |b, cfg| b.iter(|| mahler_nd(&smyth, cfg)));
    }
    let cfg = MahlerConfig::monte_carlo(100_000, 1);
    g.bench_function("smyth mc 1e5", |b| b.iter(|| mahler_nd(&smyth, &cfg)));
    g.finish();
}

criterion_group!(benches, polylog, double_integrals, elliptic, mahler);
criterion_main!(benches);
