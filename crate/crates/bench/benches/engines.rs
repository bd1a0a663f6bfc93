use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dynatomic::roots::aberth;
use dynatomic::{
    build_cycle, colength, dynatomic_poly, enumerate_periodic, local_system, Field, FieldElement, Poly, PolyMap,
};
use rug::Rational;

fn uni(field: &Field, coeffs: &[i64]) -> PolyMap {
    PolyMap::univariate(Poly::from_dense(
        field,
        coeffs.iter().map(|&c| field.from_i64(c)).collect(),
    ))
    .unwrap()
}

fn dynatomic(c: &mut Criterion) {
    let mut g = c.benchmark_group("dynatomic_poly");
    let m = PolyMap::univariate(Poly::from_dense(
        &Field::Rational,
        vec![
            FieldElement::Rational(Rational::from((-3, 4))),
            Field::Rational.zero(),
            Field::Rational.one(),
        ],
    ))
    .unwrap();
    for n in [2u64, 4, 6] {
        g.bench_with_input(BenchmarkId::new("z^2-3/4", n), &n, |b, &n| {
            b.iter(|| dynatomic_poly(&m, n).unwrap())
        });
    }
    g.finish();
}

fn local(c: &mut Criterion) {
    let f = Field::Rational;
    let (x, y) = (Poly::var(&f, 2, 0), Poly::var(&f, 2, 1));
    let m = PolyMap::affine(vec![
        x.add(&y.pow(2).unwrap()).unwrap(),
        y.add(&x.pow(2).unwrap()).unwrap(),
    ])
    .unwrap();
    let origin = [f.zero(), f.zero()];
    c.bench_function("colength/cusp", |b| {
        b.iter(|| {
            let sys = local_system(&m, 1, &origin).unwrap();
            colength(&sys, sys.bezout_bound())
        })
    });
}

fn finite(c: &mut Criterion) {
    let f = Field::finite(5, 1).unwrap();
    let m = uni(&f, &[2, 0, 1]);
    c.bench_function("enumerate/F5 z^2+2 n=3 cap 3", |b| {
        b.iter(|| enumerate_periodic(&m, 3, 3).unwrap())
    });
    c.bench_function("cycle/F5 z^2+2 n=3 cap 3", |b| {
        b.iter(|| build_cycle(&m, 3, 3).unwrap())
    });
}

fn roots(c: &mut Criterion) {
    // second iterate of z^2 - 3/4 minus z; has a double root
    let coeffs: Vec<Rational> = [(-3, 16), (-1, 1), (-3, 2), (0, 1), (1, 1)]
        .iter()
        .map(|&(a, b)| Rational::from((a, b)))
        .collect();
    c.bench_function("aberth/quartic 30 digits", |b| b.iter(|| aberth(&coeffs, 30)));
}

criterion_group!(benches, dynatomic, local, finite, roots);
criterion_main!(benches);
