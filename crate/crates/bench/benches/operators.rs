use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use starbody::bodies::{centroid_body, isotropic_position, support_on_grid};
use starbody::experiments::theorem3_operator_spectrum;
use starbody::transforms::{radon_transform, EigenvalueTable, TransformKind};
use starbody_bench::perturbed_ball;

fn kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernel_apply");
    for m in [8, 16, 24] {
        let body = perturbed_ball(3, m);
        group.bench_with_input(BenchmarkId::new("centroid_p1.5", m), &body, |b, k| {
            b.iter(|| centroid_body(k, 1.5).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("radon", m), &body, |b, k| {
            b.iter(|| radon_transform(k.radial()).unwrap())
        });
    }
    group.finish();
}

fn geometry(c: &mut Criterion) {
    let mut group = c.benchmark_group("geometry");
    group.sample_size(10);
    for m in [8, 16] {
        let body = perturbed_ball(3, m);
        group.bench_with_input(BenchmarkId::new("support_on_grid", m), &body, |b, k| {
            b.iter(|| support_on_grid(k))
        });
        group.bench_with_input(BenchmarkId::new("isotropic_position", m), &body, |b, k| {
            b.iter(|| isotropic_position(k).unwrap())
        });
    }
    group.finish();
}

fn eigenvalues(c: &mut Criterion) {
    c.bench_function("eigenvalue_table_n5_L32", |b| {
        b.iter(|| EigenvalueTable::build(TransformKind::PCosine { p: 2.5 }, 5, 32).unwrap())
    });
    c.bench_function("theorem3_spectrum_n4_L12", |b| {
        b.iter(|| theorem3_operator_spectrum(4, 1.5, 12).unwrap())
    });
}

criterion_group!(benches, kernels, geometry, eigenvalues);
criterion_main!(benches);
