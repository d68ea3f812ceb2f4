use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mersexp::{
    canonical_form, differential_uniformity, ext_euclid_inverse, family_exponent, kasami_inverse,
    mul_mod, solve_carries, ExponentFamily, FieldContext,
};
use mersexp_bench::{checked_kasami, dense_word};
use num_bigint::BigUint;

fn closed_form_vs_euclid(c: &mut Criterion) {
    let mut group = c.benchmark_group("kasami_inverse");
    for (r, n) in checked_kasami() {
        group.bench_with_input(
            BenchmarkId::new("closed_form", format!("r{r}_n{n}")),
            &(r, n),
            |b, &(r, n)| b.iter(|| kasami_inverse(black_box(r), black_box(n)).unwrap()),
        );
        let l = family_exponent(&ExponentFamily::Kasami(r), n).unwrap();
        group.bench_with_input(
            BenchmarkId::new("ext_euclid", format!("r{r}_n{n}")),
            &l,
            |b, l| b.iter(|| ext_euclid_inverse(black_box(l.value()), n).unwrap()),
        );
    }
    group.finish();
}

fn carries(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_carries");
    for n in [64u32, 512, 4096] {
        let form = canonical_form(&ExponentFamily::Kasami(5)).unwrap();
        let a = dense_word(n);
        let s = mul_mod(&form.residue(n).unwrap(), &a.to_residue())
            .unwrap()
            .to_bits();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| solve_carries(&form, black_box(&a), black_box(&s)).unwrap())
        });
    }
    group.finish();
}

fn uniformity(c: &mut Criterion) {
    let mut group = c.benchmark_group("differential_uniformity");
    group.sample_size(10);
    for n in [7u32, 9, 11] {
        let ctx = FieldContext::new(n).unwrap();
        let l = BigUint::from(57u32);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| differential_uniformity(black_box(&l), ctx).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, closed_form_vs_euclid, carries, uniformity);
criterion_main!(benches);
