//! Parallel-vs-sequential benchmarks for the data-parallel batch
//! operations: energy-level sweeps and the generalized-CH grid scan.
//! Both paths run the same per-cell work; the parallel one fans out over
//! rayon (the `parallel` feature, enabled by default).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use travwave::classify::classify_level;
use travwave::exec::{par_map, seq_map};
use travwave::models::{peaked_scan_point, GchParams};
use travwave::Potential;

fn sweep_levels(c: &mut Criterion) {
    // Camassa-Holm case (iii) potential: every level band is populated.
    let f = Potential::new(vec![0.0, -1.0, 2.0, -0.5]).unwrap();
    let hs: Vec<f64> = (0..200).map(|i| -1.2 + 2.4 * i as f64 / 199.0).collect();

    let mut group = c.benchmark_group("classify_sweep");
    group.bench_with_input(BenchmarkId::new("sequential", hs.len()), &hs, |b, hs| {
        b.iter(|| seq_map(hs, |&h| classify_level(&f, h)));
    });
    group.bench_with_input(BenchmarkId::new("parallel", hs.len()), &hs, |b, hs| {
        b.iter(|| par_map(hs, |&h| classify_level(&f, h)));
    });
    group.finish();
}

fn conjecture_grid(c: &mut Criterion) {
    let mut points = Vec::new();
    for ai in 0..6 {
        for ci in 0..8 {
            for ki in 0..5 {
                for ri in 0..5 {
                    points.push(GchParams {
                        a: -2.5 + 0.5 * ai as f64,
                        c: -2.0 + 0.5 * ci as f64,
                        kappa: -1.0 + 0.5 * ki as f64,
                        r: -1.0 + 0.5 * ri as f64,
                    });
                }
            }
        }
    }

    let mut group = c.benchmark_group("gch_scan");
    group.bench_with_input(
        BenchmarkId::new("sequential", points.len()),
        &points,
        |b, pts| {
            b.iter(|| seq_map(pts, peaked_scan_point));
        },
    );
    group.bench_with_input(
        BenchmarkId::new("parallel", points.len()),
        &points,
        |b, pts| {
            b.iter(|| par_map(pts, peaked_scan_point));
        },
    );
    group.finish();
}

criterion_group!(benches, sweep_levels, conjecture_grid);
criterion_main!(benches);
