use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lorentz3::catalog::verify_all;
use lorentz3::curvature::curvature_with;
use lorentz3::report::{MetricInput, OrientationChoice};
use lorentz3::{
    analyze, build_report, classify_metric, levi_civita, milnor_operator, FamilyId, GroupId,
    Orientation,
};
use lorentz3_bench::{sample, samples};
use std::hint::black_box;

const TOL: f64 = 1e-9;

fn stages(c: &mut Criterion) {
    let mut group = c.benchmark_group("stages");
    for gid in [
        GroupId::Nil,
        GroupId::SU2,
        GroupId::PSL2R,
        GroupId::Sol,
        GroupId::E2tilde,
    ] {
        let (_, alg, g) = sample(gid);
        group.bench_with_input(BenchmarkId::new("milnor_operator", gid), &gid, |b, _| {
            b.iter(|| milnor_operator(black_box(&alg), black_box(&g), Orientation::Positive, TOL))
        });
        group.bench_with_input(BenchmarkId::new("levi_civita", gid), &gid, |b, _| {
            b.iter(|| levi_civita(black_box(&alg), black_box(&g)))
        });
        let lc = levi_civita(&alg, &g);
        group.bench_with_input(BenchmarkId::new("curvature", gid), &gid, |b, _| {
            b.iter(|| curvature_with(black_box(&alg), black_box(&lc)))
        });
        let data = curvature_with(&alg, &lc);
        group.bench_with_input(BenchmarkId::new("analyze", gid), &gid, |b, _| {
            b.iter(|| analyze(black_box(&alg), &g, &lc, &data, TOL))
        });
        group.bench_with_input(BenchmarkId::new("classify", gid), &gid, |b, _| {
            b.iter(|| classify_metric(black_box(&alg), black_box(&g), TOL))
        });
    }
    group.finish();
}

fn reports(c: &mut Criterion) {
    let inputs: Vec<MetricInput> = samples()
        .into_iter()
        .map(|(p, _, _)| MetricInput::family(p).expect("family input"))
        .collect();
    c.bench_function("report/all families", |b| {
        b.iter(|| {
            for i in &inputs {
                black_box(build_report(i, TOL, OrientationChoice::Auto, false).expect("report"));
            }
        })
    });
}

fn grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("sl2azz+ grid 5", |b| {
        b.iter(|| verify_all(&[FamilyId::SL2AZZP], 5, TOL))
    });
    group.bench_function("all families grid 5", |b| {
        b.iter(|| verify_all(&[], 5, TOL))
    });
    group.finish();
}

criterion_group!(benches, stages, reports, grid);
criterion_main!(benches);
