use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use finclass_core::enumeration::{enumerate_bundles, EnumerateOptions, MonotoneMaps};
use finclass_core::group::conjugacy_representatives;
use finclass_core::{canonical_form, face_space, CellComplex, ClassifyingSpace, FinGroup};

fn build(c: &mut Criterion) {
    let s3 = FinGroup::builtin("S3").unwrap();
    let fam = conjugacy_representatives(&s3);
    c.bench_function("build E S3 kappa=2", |b| {
        b.iter(|| ClassifyingSpace::new(&s3, black_box(&fam), 2, 100_000).unwrap())
    });
}

fn maps(c: &mut Criterion) {
    let z3 = FinGroup::builtin("Z3").unwrap();
    let e = ClassifyingSpace::new(&z3, &[z3.trivial_subgroup()], 2, 100_000).unwrap();
    let b_space = e.orbit_space().space;
    let a = face_space(&CellComplex::builtin("circle").unwrap());
    c.bench_function("monotone maps circle to BZ3", |b| {
        b.iter(|| MonotoneMaps::new(black_box(&a), &b_space).count())
    });
    c.bench_function("canonical form of BZ3", |b| b.iter(|| canonical_form(black_box(&b_space))));
}

fn bundles(c: &mut Criterion) {
    let z3 = FinGroup::builtin("Z3").unwrap();
    let k = CellComplex::builtin("circle").unwrap();
    let opts = EnumerateOptions { kappa: None, budget_maps: 10_000_000, budget_points: 100_000, workers: 0 };
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    g.bench_function("circle Z3", |b| b.iter(|| enumerate_bundles(black_box(&k), &z3, opts).unwrap()));
    g.finish();
}

criterion_group!(benches, build, maps, bundles);
criterion_main!(benches);
