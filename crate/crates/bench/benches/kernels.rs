use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use somass_core::census::{mass_type2, Type2With};
use somass_core::equivalence::aut_order;
use somass_core::lifting::{free_so_lifts, so_lifts};
use somass_core::{howell_form, CodeZp2, FpCode, Modulus, ResidueMatrix};

fn howell(c: &mut Criterion) {
    let mut g = c.benchmark_group("howell_form");
    for p in [2u64, 3, 5] {
        let md = Modulus::square(p).unwrap();
        let q = (p * p) as i64;
        let rows: Vec<Vec<i64>> = (0..6)
            .map(|i| (0..8).map(|j| (3 * i + 5 * j + i * j) as i64 % q).collect())
            .collect();
        let m = ResidueMatrix::from_rows(md, 8, &rows).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(p), &m, |b, m| b.iter(|| howell_form(black_box(m))));
    }
    g.finish();
}

fn lifts(c: &mut Criterion) {
    let c1 = FpCode::new(3, 6, &[vec![1, 1, 1, 0, 0, 0], vec![0, 0, 0, 1, 1, 1]]).unwrap();
    let c2 = c1.join(&FpCode::new(3, 6, &[vec![1, 2, 0, 0, 0, 0]]).unwrap()).unwrap();
    c.bench_function("free_so_lifts p=3 n=6 k1=2", |b| {
        b.iter(|| free_so_lifts(black_box(&c1)).unwrap().codes().count())
    });
    c.bench_function("so_lifts p=3 n=6 k1=2 k2=1", |b| {
        b.iter(|| so_lifts(black_box(&c1), black_box(&c2)).unwrap().codes().count())
    });
}

fn automorphisms(c: &mut Criterion) {
    let octacode = CodeZp2::from_generators(
        2,
        8,
        &[
            vec![1, 0, 0, 0, 3, 1, 2, 1],
            vec![0, 1, 0, 0, 1, 2, 3, 1],
            vec![0, 0, 1, 0, 3, 3, 3, 2],
            vec![0, 0, 0, 1, 2, 3, 1, 1],
        ],
    )
    .unwrap();
    let worked = CodeZp2::from_generators(3, 4, &[vec![1, 1, 4, 0], vec![0, 3, 6, 0]]).unwrap();
    c.bench_function("aut_order Z/9 n=4", |b| b.iter(|| aut_order(black_box(&worked)).unwrap()));
    c.bench_function("aut_order Z/4 n=8", |b| b.iter(|| aut_order(black_box(&octacode)).unwrap()));
    c.bench_function("mass_type2 n=8", |b| b.iter(|| mass_type2(8, Type2With::Pm1).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = howell, lifts, automorphisms
}
criterion_main!(benches);
