//! Benchmarks for the hot paths: extendibility search, completion search,
//! and the PPT spectrum of rho-bar.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use upb_core::constructions::{gentiles1, pyramid, sept, shifts, tensor_upb, tiles};
use upb_core::entangle::{ppt_all_cuts, rho_bar};
use upb_core::extend::{complete_search, is_extendible, is_extendible_unpruned};
use upb_core::Tolerance;

fn bench_extendibility(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut group = c.benchmark_group("is_extendible");
    let pyramid = pyramid();
    group.bench_function("pyramid_pruned", |b| {
        b.iter(|| black_box(is_extendible(&pyramid, tol, u64::MAX)))
    });
    group.bench_function("pyramid_exhaustive", |b| {
        b.iter(|| black_box(is_extendible_unpruned(&pyramid, tol)))
    });
    let sept = sept();
    group.bench_function("sept_pruned", |b| {
        b.iter(|| black_box(is_extendible(&sept, tol, u64::MAX)))
    });
    let g16 = gentiles1(6).unwrap();
    group.bench_function("gentiles1_6_pruned", |b| {
        b.iter(|| black_box(is_extendible(&g16, tol, u64::MAX)))
    });
    let tensor = tensor_upb(&pyramid, &pyramid).unwrap();
    group.sample_size(10);
    group.bench_function("pyramid_tensor_pyramid_pruned", |b| {
        b.iter(|| black_box(is_extendible(&tensor, tol, u64::MAX)))
    });
    group.finish();
}

fn bench_completion(c: &mut Criterion) {
    let tol = Tolerance::default();
    let tiles = tiles();
    // Completing a 4-member sub-basis of Tiles back to 9 states.
    let raw: Vec<Vec<upb_core::CVec>> = tiles
        .states()
        .iter()
        .take(4)
        .map(|s| s.locals().to_vec())
        .collect();
    let sub = upb_core::basis::verify_pb(tiles.dims(), &raw, tol).unwrap();
    c.bench_function("complete_search/tiles_minus_one", |b| {
        b.iter(|| black_box(complete_search(&sub, tol, u64::MAX).unwrap()))
    });
}

fn bench_ppt(c: &mut Criterion) {
    let tol = Tolerance::default();
    let rho = rho_bar(&shifts()).unwrap();
    c.bench_function("ppt_all_cuts/shifts", |b| {
        b.iter(|| black_box(ppt_all_cuts(&rho, tol).unwrap()))
    });
}

criterion_group!(benches, bench_extendibility, bench_completion, bench_ppt);
criterion_main!(benches);
