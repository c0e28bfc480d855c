use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use klab_core::holproj::project;
use klab_core::kronecker::k1_full_modular;
use klab_core::qseries::{delta_qexp, s24_basis};
use klab_core::specfun::kbessel;
use klab_core::{Dd, HalfPlanePoint, Qd, Real};

fn qexp(c: &mut Criterion) {
    c.bench_function("delta_qexp 1000", |b| {
        b.iter(|| delta_qexp(black_box(1000)))
    });
}

fn specfun(c: &mut Criterion) {
    let s = Dd::from_f64(1.3);
    let y = Dd::from_f64(0.7);
    c.bench_function("kbessel dd", |b| {
        b.iter(|| kbessel(black_box(s), black_box(y)).unwrap())
    });
}

fn kronecker(c: &mut Criterion) {
    let k1 = k1_full_modular::<Dd>(400).unwrap();
    let z = HalfPlanePoint::<Dd>::from_f64(0.2, 0.9).unwrap();
    c.bench_function("k1_eval dd tol 1e-12", |b| {
        b.iter(|| k1.eval_to(black_box(&z), 1e-12).unwrap())
    });
}

fn holproj(c: &mut Criterion) {
    let (d2, _) = s24_basis(400);
    let mut group = c.benchmark_group("project delta2");
    group.sample_size(10);
    group.bench_function("dd", |b| {
        b.iter(|| project::<Dd>(black_box(&d2), 10, 1e-10).unwrap())
    });
    group.bench_function("qd", |b| {
        b.iter(|| project::<Qd>(black_box(&d2), 10, 1e-10).unwrap())
    });
    group.finish();
}

criterion_group!(benches, qexp, specfun, kronecker, holproj);
criterion_main!(benches);
