use dynatomic::{
    build_cycle, build_dynatomic_cycle, colength, deform, deformed_periodic_poly, divisors, dynatomic_poly,
    enumerate_periodic, flat_limit_clusters, formal_multiplicity_at, local_system, mobius, periodic_poly,
    specialize_parameter, truncated_colength, verify_effectivity, AlgebraicPoint, Ambient, ColengthValue, Error, Field,
    Poly, PolyMap, ZeroCycle,
};
use proptest::prelude::*;
use rug::Rational;

fn uni(field: &Field, coeffs: &[i64]) -> PolyMap {
    PolyMap::univariate(Poly::from_dense(
        field,
        coeffs.iter().map(|&c| field.from_i64(c)).collect(),
    ))
    .unwrap()
}

fn monic(lower: Vec<i64>) -> Vec<i64> {
    let mut c = lower;
    c.push(1);
    c
}

fn small_field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::finite(3, 1).unwrap()), Just(Field::finite(5, 1).unwrap())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn degrees_follow_mobius(lower in prop::collection::vec(-3i64..=3, 2..=3), n in 1u64..=4) {
        let m = uni(&Field::Rational, &monic(lower));
        let k = m.degree();
        prop_assert_eq!(periodic_poly(&m, n).unwrap().total_degree(), Some(k.pow(n as u32)));
        let want: i64 = divisors(n).unwrap().into_iter().map(|d| i64::from(mobius((n / d) as i64).unwrap()) * k.pow(d as u32) as i64).sum();
        prop_assert_eq!(dynatomic_poly(&m, n).unwrap().dynatomic.total_degree(), Some(want as u64));
    }

    #[test]
    fn nonperiodic_points_have_zero_formal_multiplicity(
        field in small_field(),
        lower in prop::collection::vec(0i64..5, 2..=3),
        n in 1u64..=4,
    ) {
        let m = uni(&field, &monic(lower));
        let p = field.galois().unwrap().characteristic();
        for v in 0..p as i64 {
            let x = field.from_i64(v);
            let periodic = divisors(n).unwrap().into_iter().any(|d| {
                let it = m.iterate(d).unwrap();
                it.coords()[0].eval(std::slice::from_ref(&x)).unwrap() == x
            });
            if !periodic {
                prop_assert_eq!(formal_multiplicity_at(&m, n, &x).unwrap(), 0);
            }
        }
    }

    #[test]
    fn multiplicity_one_support_has_exact_period(
        field in small_field(),
        lower in prop::collection::vec(0i64..5, 2..=3),
        n in 1u64..=4,
    ) {
        let m = uni(&field, &monic(lower));
        let cap = 3;
        let star = build_dynatomic_cycle(&m, n, cap).unwrap();
        let by_divisor: Vec<ZeroCycle> =
            divisors(n).unwrap().into_iter().map(|d| build_cycle(&m, d, cap).unwrap()).collect();
        let periods = enumerate_periodic(&m, n, cap).unwrap();
        for (p, a_star) in star.entries() {
            let simple = by_divisor.iter().all(|c| c.multiplicity(p) <= 1);
            if a_star > 0 && simple {
                let pp = periods.iter().find(|q| &q.point == p).unwrap();
                prop_assert_eq!(pp.minimal_period, n);
            }
        }
    }

    #[test]
    fn colength_certificates_survive_deeper_truncation(coeffs in prop::collection::vec(0i64..5, 12)) {
        let f = Field::finite(5, 1).unwrap();
        let (x, y) = (Poly::var(&f, 2, 0), Poly::var(&f, 2, 1));
        let monos = [Poly::one(&f, 2), x.clone(), y.clone(), x.mul(&x).unwrap(), x.mul(&y).unwrap(), y.mul(&y).unwrap()];
        let coord = |c: &[i64]| {
            monos.iter().zip(c).fold(Poly::zero(&f, 2), |acc, (mono, &k)| acc.add(&mono.scale(&f.from_i64(k))).unwrap())
        };
        let m = PolyMap::affine(vec![coord(&coeffs[..6]), coord(&coeffs[6..])]).unwrap();
        let points = match enumerate_periodic(&m, 1, 1) {
            Ok(p) => p,
            Err(Error::Degenerate(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        for pp in points {
            let sys = local_system(&m, 1, &pp.point.coordinates().unwrap()).unwrap();
            prop_assert!(sys.generators().iter().all(|g| g.eval(&[f.zero(), f.zero()]).unwrap().is_zero()));
            let r = colength(&sys, sys.bezout_bound());
            if let ColengthValue::Finite(v) = r.value {
                prop_assert!(v >= 1 && v <= r.bound_used);
                prop_assert!(u64::from(r.certified_at_degree) <= v + 1);
                prop_assert_eq!(truncated_colength(&sys, r.certified_at_degree + 2), v);
            }
        }
    }

    #[test]
    fn cycle_arithmetic(points in prop::collection::vec((-4i64..=4, 1i64..=3, -3i64..=3), 0..8)) {
        let mut c = ZeroCycle::new(&Field::Rational, Ambient::Affine(1), None);
        for (a, b, m) in &points {
            c.add_point(AlgebraicPoint::Rational(vec![Rational::from((*a, *b))]), *m);
        }
        prop_assert!(c.entries().all(|(_, m)| m != 0));
        let total: i64 = points.iter().map(|p| p.2).sum();
        prop_assert_eq!(c.total_degree(), total);
        prop_assert!(c.combine(&c, -1).unwrap().is_empty());
        let rep = verify_effectivity(&c);
        prop_assert_eq!(rep.effective, rep.violations.is_empty());
        prop_assert_eq!(rep.effective, c.entries().all(|(_, m)| m > 0));
    }

    #[test]
    fn deformation_specializes_to_base(lower in prop::collection::vec(-3i64..=3, 2..=3), n in 1u64..=3) {
        let base = uni(&Field::Rational, &monic(lower));
        let d = deform(&base).unwrap();
        prop_assert_eq!(&d.at(&Rational::new()).unwrap(), &base);
        let fam = deformed_periodic_poly(&d, n).unwrap();
        prop_assert_eq!(specialize_parameter(&fam, &Rational::new()).unwrap(), periodic_poly(&base, n).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cluster_census_accounts_for_every_root(c in -2i64..=2, den in 1i64..=4, n in 1u64..=2) {
        let f = Field::Rational;
        let base = PolyMap::univariate(Poly::from_dense(
            &f,
            vec![dynatomic::FieldElement::Rational(Rational::from((c, den))), f.zero(), f.one()],
        ))
        .unwrap();
        let d = deform(&base).unwrap();
        let ts: Vec<Rational> = (4..=6).map(|k| Rational::from((1, 10i64.pow(k)))).collect();
        let r = match flat_limit_clusters(&d, n, &ts, 30) {
            Ok(r) => r,
            Err(Error::Inconclusive(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        for k in 0..ts.len() {
            let placed: usize = r.clusters.iter().map(|cl| cl.counts[k]).sum();
            prop_assert_eq!(placed + r.unassigned[k], 1usize << n);
        }
    }
}
