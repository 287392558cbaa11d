use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qdrh_core::framed::Framing;
use qdrh_core::qderham::{
    build_q_de_rham, cartier_check, compare_framings_invariants, gm_h1, p1_cohomology,
};
use qdrh_core::TruncationParams;

fn gm(c: &mut Criterion) {
    let mut g = c.benchmark_group("gm_h1");
    for n in [2usize, 4, 6] {
        let t = TruncationParams::new(3, 2, n, 2, 1).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| gm_h1(black_box(t), 8).unwrap())
        });
    }
    g.finish();
}

fn de_rham_cohomology(c: &mut Criterion) {
    let mut g = c.benchmark_group("q_de_rham_cohomology");
    let t = TruncationParams::new(3, 2, 3, 2, 1).unwrap();
    let s = t.series();
    for d in [1usize, 2] {
        let f = Framing::laurent(d);
        g.bench_with_input(BenchmarkId::new("laurent", d), &f, |b, f| {
            b.iter(|| {
                build_q_de_rham(f, 2, &s)
                    .unwrap()
                    .complex
                    .cohomology()
                    .unwrap()
            })
        });
    }
    g.finish();
}

fn experiments(c: &mut Criterion) {
    let t = TruncationParams::new(3, 2, 4, 6, 2).unwrap();
    c.bench_function("cartier_p3", |b| {
        b.iter(|| cartier_check(1, black_box(&t), 9).unwrap())
    });
    c.bench_function("p1_p3", |b| {
        b.iter(|| p1_cohomology(black_box(&t), &[2]).unwrap())
    });
    let t = TruncationParams::new(3, 2, 3, 9, 2).unwrap();
    let (f1, f2) = (Framing::polynomial(1), Framing::shifted(&[1]));
    c.bench_function("compare_framings_p3", |b| {
        b.iter(|| compare_framings_invariants(&f1, &f2, black_box(&t)).unwrap())
    });
}

criterion_group!(benches, gm, de_rham_cohomology, experiments);
criterion_main!(benches);
