use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mrf_ptas::decomp::build_grid_band;
use mrf_ptas::ptas::PtasConfig;
use mrf_ptas::{solve_ptas, ExactSolver};
use mrf_ptas_bench::{grid, stereo};

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    for side in [4, 6] {
        let inst = grid(side, 3, 7);
        let d = build_grid_band(inst.graph(), side).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(side), &inst, |b, inst| {
            b.iter(|| ExactSolver::default().solve(black_box(inst), &d).unwrap())
        });
    }
    group.finish();
}

fn ptas(c: &mut Criterion) {
    let inst = grid(16, 3, 7);
    let mut group = c.benchmark_group("ptas_grid16");
    group.sample_size(20);
    for k in [2, 3] {
        let cfg = PtasConfig::with_k(k).unwrap();
        group.bench_with_input(BenchmarkId::new("k", k), &cfg, |b, cfg| b.iter(|| solve_ptas(black_box(&inst), cfg).unwrap()));
    }
    group.finish();
}

fn stereo_model(c: &mut Criterion) {
    let inst = stereo(32, 24, 4);
    let cfg = PtasConfig::with_k(2).unwrap();
    let mut group = c.benchmark_group("stereo");
    group.sample_size(10);
    group.bench_function("32x24_L4_k2", |b| b.iter(|| solve_ptas(black_box(&inst), &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, exact, ptas, stereo_model);
criterion_main!(benches);
