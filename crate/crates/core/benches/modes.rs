//! Benchmarks of the grid-parallel hot paths, tagged by execution mode so
//! runs with and without the `parallel` feature land in comparable
//! criterion IDs:
//!
//!   cargo bench -p eqlab-core                          # parallel
//!   cargo bench -p eqlab-core --no-default-features    # sequential

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use eqlab_core::bodies2d::{make_ellipse, make_parabola_body};
use eqlab_core::circle_search::candidate_objective;
use eqlab_core::property_lab::{profile, Functional};
use eqlab_core::space3d::{
    midpoint_locus, sphere_property_check, Body3, Ellipsoid, Point3, SectionMode, Sphere,
};

fn mode() -> &'static str {
    if eqlab_core::par::is_parallel() {
        "parallel"
    } else {
        "sequential"
    }
}

fn bench_profile(c: &mut Criterion) {
    let (curve, circle) = make_ellipse(2.0, 1.0).unwrap();
    let mut group = c.benchmark_group("profile_product");
    group.sample_size(20);
    group.bench_function(BenchmarkId::new(mode(), "ellipse_720"), |b| {
        b.iter(|| profile(&curve, &circle, Functional::Product, 720, 1e-6).unwrap())
    });
    let (parabola, unit) = make_parabola_body();
    group.bench_function(BenchmarkId::new(mode(), "parabola_360"), |b| {
        b.iter(|| profile(&parabola, &unit, Functional::Product, 360, 1e-6).unwrap())
    });
    group.finish();
}

fn bench_objective(c: &mut Criterion) {
    let (curve, circle) = make_ellipse(2.0, 1.0).unwrap();
    let mut group = c.benchmark_group("search_objective");
    group.sample_size(20);
    group.bench_function(BenchmarkId::new(mode(), "ellipse_96"), |b| {
        b.iter(|| candidate_objective(&curve, &circle, Functional::Product, 96).unwrap())
    });
    group.finish();
}

fn bench_space3d(c: &mut Criterion) {
    let ball = Ellipsoid::ball(Point3::origin(), 1.0).unwrap();
    let p = Point3::new(0.3, 0.1, 0.0);
    let mut group = c.benchmark_group("space3d");
    group.sample_size(20);
    group.bench_function(BenchmarkId::new(mode(), "midpoint_locus_2048"), |b| {
        b.iter(|| midpoint_locus(&ball, p, 2048).unwrap())
    });
    let k = Body3::Ball(Sphere::new(Point3::origin(), 2.0).unwrap());
    let s = Sphere::new(Point3::origin(), 1.0).unwrap();
    group.bench_function(BenchmarkId::new(mode(), "sphere_check_512x256"), |b| {
        b.iter(|| {
            sphere_property_check(&k, &s, SectionMode::Equipotential, true, 512, 256, 1e-9)
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_profile, bench_objective, bench_space3d);
criterion_main!(benches);
