use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lattice_cover::census;
use lattice_cover::cover::{build_cover, MChoice};
use lattice_cover::genpos::{build_general_position, verify_general_position};
use lattice_cover::lattice::{enumerate_points, successive_minima};
use lattice_cover::oracle::{exact_g, exact_h};
use lattice_cover::rational::int;
use lattice_cover_bench::{ball, flat_cross};

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_points");
    for (n, r) in [(2, 100), (3, 20), (4, 8)] {
        let body = ball(n, r);
        group.bench_with_input(BenchmarkId::new(format!("ball n={n}"), r), &body, |b, body| {
            b.iter(|| enumerate_points(black_box(body), &int(1)).unwrap())
        });
    }
    group.finish();
}

fn minima(c: &mut Criterion) {
    let mut group = c.benchmark_group("successive_minima");
    for (name, body) in [("ball n=3 r=10", ball(3, 10)), ("ball n=4 r=6", ball(4, 6)), ("C_x' n=3 x=10", flat_cross(3, 10))] {
        group.bench_function(name, |b| b.iter(|| successive_minima(black_box(&body)).unwrap()));
    }
    group.finish();
}

fn census_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    for (n, r) in [(2, 80), (3, 6), (3, 10)] {
        group.bench_function(format!("n={n} r={r}"), |b| b.iter(|| census::census(n, &int(r)).unwrap()));
    }
    group.finish();
}

fn general_position(c: &mut Criterion) {
    let mut group = c.benchmark_group("general_position");
    group.sample_size(10);
    for r in [50, 100] {
        let cert = build_general_position(&ball(2, r)).unwrap();
        let pts = cert.points();
        group.bench_function(format!("verify ball r={r}"), |b| b.iter(|| verify_general_position(black_box(&pts), 2)));
        group.bench_function(format!("build ball r={r}"), |b| b.iter(|| build_general_position(&ball(2, r)).unwrap()));
    }
    group.finish();
}

fn covers_and_oracles(c: &mut Criterion) {
    let mut group = c.benchmark_group("cover_oracle");
    group.sample_size(10);
    let body = ball(3, 8);
    group.bench_function("cover ball n=3 r=8", |b| b.iter(|| build_cover(&body, MChoice::Auto).unwrap()));
    let body = ball(3, 3);
    group.bench_function("exact_g ball n=3 r=3", |b| b.iter(|| exact_g(&body).unwrap()));
    group.bench_function("exact_h ball n=3 r=3", |b| b.iter(|| exact_h(&body).unwrap()));
    group.finish();
}

criterion_group!(benches, enumeration, minima, census_bench, general_position, covers_and_oracles);
criterion_main!(benches);
