use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use legendre_core::gf::build_field;
use legendre_core::{Family, Poly};

fn field_multiply(c: &mut Criterion) {
    let f = build_field(3, 4).unwrap();
    let q = f.order() as u32;
    let pairs: Vec<(u32, u32)> = (0..1024u32)
        .map(|i| ((i * 37) % q, (i * 53 + 1) % q))
        .collect();
    c.bench_function("gf81 mul x1024 (tables)", |b| {
        b.iter(|| {
            pairs
                .iter()
                .fold(0u32, |acc, &(x, y)| acc ^ f.mul(black_box(x), black_box(y)))
        })
    });
    c.bench_function("gf81 mul x1024 (schoolbook)", |b| {
        b.iter(|| {
            pairs.iter().fold(0u32, |acc, &(x, y)| {
                acc ^ f.mul_slow(black_box(x), black_box(y))
            })
        })
    });
}

fn poly_multiply(c: &mut Criterion) {
    let f = build_field(7, 2).unwrap();
    let q = f.order() as u32;
    let mut group = c.benchmark_group("poly mul over F49");
    for n in [16usize, 128, 1024] {
        let a = Poly::from_coeffs(&f, (0..n as u32).map(|i| (i * 11 + 3) % q).collect());
        let b = Poly::from_coeffs(&f, (0..n as u32).map(|i| (i * 29 + 5) % q).collect());
        group.bench_function(format!("degree {}", n - 1), |bch| {
            bch.iter(|| black_box(&a) * black_box(&b))
        });
    }
    group.finish();
}

fn group_law(c: &mut Criterion) {
    let fam = Family::new(5, 1).unwrap();
    let (p, q) = (fam.point_p(0), fam.point_p(1));
    c.bench_function("d=6 P0 + P1", |b| {
        b.iter(|| fam.curve().add(black_box(&p), black_box(&q)))
    });
}

criterion_group!(benches, field_multiply, poly_multiply, group_law);
criterion_main!(benches);
