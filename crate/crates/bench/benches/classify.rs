use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use conic_nets::classify::{Classifier, PlaneOrbit};
use conic_nets::gf::Field;
use conic_nets::group;
use conic_nets_bench::plane_fixture;

fn field_ops(c: &mut Criterion) {
    for q in [27u64, 1031] {
        let Ok(f) = Field::new(q) else { continue };
        let xs: Vec<_> = f.elements().take(64).collect();
        c.bench_with_input(BenchmarkId::new("field_mul_inv", q), &xs, |b, xs| {
            b.iter(|| {
                let mut acc = f.from_int(1);
                for &x in xs.iter().skip(1) {
                    acc = f.mul(acc, f.inv(x).unwrap());
                }
                black_box(acc)
            })
        });
    }
}

fn line_distribution(c: &mut Criterion) {
    for q in [5u64, 13, 27] {
        let (f, planes) = plane_fixture(q);
        let cl = Classifier::new(&f);
        let (_, plane) = planes.iter().find(|(o, _)| *o == PlaneOrbit::S15).unwrap().clone();
        c.bench_with_input(BenchmarkId::new("line_distribution", q), &plane, |b, plane| {
            b.iter(|| cl.line_distribution(black_box(plane)).unwrap())
        });
    }
}

fn classify_plane(c: &mut Criterion) {
    for q in [5u64, 13] {
        let (f, planes) = plane_fixture(q);
        let cl = Classifier::new(&f);
        c.bench_with_input(BenchmarkId::new("classify_all_reps", q), &planes, |b, planes| {
            b.iter(|| {
                for (_, p) in planes {
                    black_box(cl.classify_plane(p).unwrap());
                }
            })
        });
    }
}

fn stabilizer(c: &mut Criterion) {
    let (f, planes) = plane_fixture(3);
    let (_, plane) = planes[0].clone();
    let mut g = c.benchmark_group("stabilizer");
    g.sample_size(10);
    g.bench_function("q3_S1", |b| b.iter(|| group::stabilizer_order(&f, black_box(&plane), false).unwrap()));
    g.finish();
}

criterion_group!(benches, field_ops, line_distribution, classify_plane, stabilizer);
criterion_main!(benches);
