//! The additive deformation φ(x, t) = φ(x) + t, its degenerate parameters,
//! and the numeric flat-limit check that clusters of deformed periodic
//! points reproduce a_P(n) and a*_P(n).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::dynatomic::{periodic_unipolys, profile_from_periodic};
use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldElement, RatFunc};
use crate::map::{Model, PolyMap};
use crate::mobius::{divisors, mu};
use crate::poly::Poly;
use crate::qpoly::QPoly;
use crate::roots::{aberth, bits_for_digits, Complex};
use crate::univariate::UniPoly;

/// Rejection draws allowed before random sampling gives up.
const MAX_REJECTIONS: usize = 100;
/// Extra t values tried (each a tenth of the last) when clusters overlap.
const MAX_SHRINKS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedMap {
    base: PolyMap,
    deformed: PolyMap,
}

impl DeformedMap {
    pub fn base(&self) -> &PolyMap {
        &self.base
    }

    /// The family as a map over ℚ(t).
    pub fn deformed(&self) -> &PolyMap {
        &self.deformed
    }

    /// Specialization at t = t0, a map over ℚ.
    pub fn at(&self, t0: &Rational) -> Result<PolyMap> {
        self.deformed.specialize_parameter(t0)
    }

    fn base_coeffs(&self) -> Result<Vec<Rational>> {
        let dense = self.base.univariate_poly()?.to_dense()?;
        Ok(dense
            .iter()
            .map(|c| c.as_rational().expect("rational").clone())
            .collect())
    }
}

/// φᵢ(x) + t in every coordinate. The base map must be affine over ℚ.
pub fn deform(map: &PolyMap) -> Result<DeformedMap> {
    if map.model() != Model::Affine {
        return Err(Error::Unsupported("deformation of P1 maps".into()));
    }
    if *map.field() != Field::Rational {
        return Err(Error::Unsupported(format!(
            "deformation over {}; only Q is supported",
            map.field()
        )));
    }
    let qt = Field::RationalFunction;
    let lifted = map.embed(&Embedding::new(map.field(), &qt)?)?;
    let t = Poly::constant(&qt, map.nvars(), FieldElement::RationalFunction(RatFunc::t()));
    let coords = lifted.coords().iter().map(|c| c.add(&t)).collect::<Result<Vec<_>>>()?;
    Ok(DeformedMap {
        base: map.clone(),
        deformed: PolyMap::affine(coords)?,
    })
}

/// A polynomial in x whose coefficients are polynomials in t, low degree first.
type TPoly = Vec<QPoly>;

fn tpoly_trim(mut p: TPoly) -> TPoly {
    while p.last().is_some_and(QPoly::is_zero) {
        p.pop();
    }
    p
}

fn tpoly_mul(a: &TPoly, b: &TPoly) -> TPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![QPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    tpoly_trim(out)
}

fn tpoly_add_constant(mut p: TPoly, c: &QPoly) -> TPoly {
    if p.is_empty() {
        p.push(QPoly::zero());
    }
    p[0] = p[0].add(c);
    tpoly_trim(p)
}

/// Coefficients of φ(·, t)ⁿ(x) − x.
fn periodic_tpoly(dmap: &DeformedMap, n: u64) -> Result<TPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    if !dmap.base.is_univariate() {
        return Err(Error::Unsupported(
            "parametric periodic polynomials need a univariate map".into(),
        ));
    }
    let phi = dmap.base_coeffs()?;
    let x: TPoly = vec![QPoly::zero(), QPoly::one()];
    let mut cur = x.clone();
    for _ in 0..n {
        let mut acc: TPoly = Vec::new();
        for (i, a) in phi.iter().enumerate().rev() {
            acc = tpoly_mul(&acc, &cur);
            let mut c = QPoly::constant(a.clone());
            if i == 0 {
                c = c.add(&QPoly::x());
            }
            acc = tpoly_add_constant(acc, &c);
        }
        cur = acc;
    }
    let minus_x = vec![QPoly::zero(), QPoly::one().neg()];
    let mut out = cur;
    out.resize(out.len().max(2), QPoly::zero());
    for (o, m) in out.iter_mut().zip(&minus_x) {
        *o = o.add(m);
    }
    Ok(tpoly_trim(out))
}

fn tpoly_at(p: &TPoly, t0: &Rational) -> QPoly {
    QPoly::from_rationals(p.iter().map(|c| c.eval(t0)).collect())
}

/// (φ(·, t))ⁿ(x) − x as a univariate polynomial over ℚ(t).
pub fn deformed_periodic_poly(dmap: &DeformedMap, n: u64) -> Result<Poly> {
    let p = periodic_tpoly(dmap, n)?;
    let qt = Field::RationalFunction;
    Poly::from_terms(
        &qt,
        1,
        p.into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (vec![i as u32], FieldElement::RationalFunction(RatFunc::from_poly(c)))),
    )
}

/// The t-values where some period-n point of the family is multiple: the
/// roots of a squarefree polynomial in t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterLocus {
    /// Monic and squarefree.
    pub polynomial: QPoly,
    /// The rational roots, when the search was feasible.
    pub rational_points: Option<Vec<Rational>>,
}

impl ParameterLocus {
    pub fn contains(&self, t0: &Rational) -> bool {
        self.polynomial.eval(t0).cmp0().is_eq()
    }
}

/// Squarefree part of disc_x(φⁿ(x, t) − x), recovered by interpolating
/// exact discriminants at integer t.
pub fn degenerate_parameter_locus(dmap: &DeformedMap, n: u64) -> Result<ParameterLocus> {
    let p = periodic_tpoly(dmap, n)?;
    let m = p.len().saturating_sub(1);
    if m == 0 {
        return Err(Error::Degenerate(format!("phi^{n}(x, t) - x has no roots in x")));
    }
    if p[m].degree() != Some(0) {
        return Err(Error::Unsupported("leading x-coefficient depends on t".into()));
    }
    let dt = p.iter().filter_map(QPoly::degree).max().unwrap_or(0);
    let bound = (2 * m - 2) * dt;
    let xs: Vec<Rational> = (0..=bound as i64).map(Rational::from).collect();
    let ys = xs
        .iter()
        .map(|t0| {
            let d = UniPoly::from_qpoly(&tpoly_at(&p, t0)).discriminant()?;
            Ok(d.as_rational().expect("rational").clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let disc = interpolate(&xs, &ys);
    if disc.is_zero() {
        return Err(Error::Degenerate(format!(
            "discriminant of phi^{n}(x, t) - x vanishes identically in t"
        )));
    }
    let sqf = disc.squarefree_decomposition()?;
    let polynomial = sqf.factors.iter().fold(QPoly::one(), |acc, (f, _)| acc.mul(f)).monic();
    let rational_points = polynomial.rational_roots(64).map(|mut r| {
        r.sort();
        r
    });
    Ok(ParameterLocus {
        polynomial,
        rational_points,
    })
}

/// Newton interpolation through (xs[i], ys[i]).
fn interpolate(xs: &[Rational], ys: &[Rational]) -> QPoly {
    let k = xs.len();
    let mut c = ys.to_vec();
    for j in 1..k {
        for i in (j..k).rev() {
            c[i] = Rational::from(&c[i] - &c[i - 1]) / Rational::from(&xs[i] - &xs[i - j]);
        }
    }
    let mut out = QPoly::zero();
    for i in (0..k).rev() {
        out = out.mul(&QPoly::linear_root(&xs[i])).add(&QPoly::constant(c[i].clone()));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicitySample {
    pub t0: Rational,
    pub degree: usize,
    pub squarefree: bool,
    /// gcd(f, f′), monic, when f is not squarefree.
    pub repeated_factor: Option<QPoly>,
}

/// Whether φⁿ(x, t0) − x is squarefree.
pub fn simplicity_at(dmap: &DeformedMap, n: u64, t0: &Rational) -> Result<SimplicitySample> {
    let f = tpoly_at(&periodic_tpoly(dmap, n)?, t0);
    let g = f.gcd(&f.derivative());
    let squarefree = g.degree().unwrap_or(0) == 0;
    Ok(SimplicitySample {
        t0: t0.clone(),
        degree: f.degree().unwrap_or(0),
        squarefree,
        repeated_factor: (!squarefree).then_some(g),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityReport {
    pub passed: bool,
    pub undeformed_degree: usize,
    pub samples: Vec<SimplicitySample>,
    pub counterexamples: Vec<SimplicitySample>,
}

/// Draws `samples` random t0 = a/b (a, b uniform in 1..=1000) off the
/// degenerate locus and checks that each fiber is squarefree of the
/// undeformed degree.
pub fn generic_simplicity_check(dmap: &DeformedMap, n: u64, samples: usize, seed: u64) -> Result<SimplicityReport> {
    let locus = degenerate_parameter_locus(dmap, n)?;
    let undeformed_degree = tpoly_at(&periodic_tpoly(dmap, n)?, &Rational::new())
        .degree()
        .unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut rejected = 0;
        let t0 = loop {
            let t0 = Rational::from((rng.gen_range(1..=1000i64), rng.gen_range(1..=1000i64)));
            if !locus.contains(&t0) {
                break t0;
            }
            rejected += 1;
            if rejected == MAX_REJECTIONS {
                return Err(Error::Inconclusive(format!(
                    "{MAX_REJECTIONS} consecutive draws landed on the degenerate locus"
                )));
            }
        };
        out.push(simplicity_at(dmap, n, &t0)?);
    }
    let counterexamples: Vec<SimplicitySample> = out
        .iter()
        .filter(|s| !s.squarefree || s.degree != undeformed_degree)
        .cloned()
        .collect();
    Ok(SimplicityReport {
        passed: counterexamples.is_empty(),
        undeformed_degree,
        samples: out,
        counterexamples,
    })
}

/// True when the leading x-coefficient of φⁿ(x, t) − x is a nonzero
/// constant, so every fiber has the same degree.
pub fn degree_conservation_check(dmap: &DeformedMap, n: u64) -> Result<bool> {
    let p = periodic_tpoly(dmap, n)?;
    Ok(p.last().is_some_and(|c| c.degree() == Some(0)))
}

#[derive(Clone, Debug)]
pub struct Cluster {
    pub center: Complex,
    /// The squarefree factor of the undeformed φⁿ − z the center is a root of.
    pub orbit: QPoly,
    pub expected_a: u32,
    pub expected_a_star: i64,
    /// Member counts, one per t value.
    pub counts: Vec<usize>,
    /// Minimal-period tags of the members, one sorted list per t value.
    pub tags: Vec<Vec<u64>>,
    pub reconstructed_a: usize,
    pub reconstructed_a_star: i64,
    /// Largest member distance to the center at the smallest t.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct ClusterReport {
    pub t_sequence: Vec<Rational>,
    pub clusters: Vec<Cluster>,
    /// Roots per t value that fell outside every cluster radius.
    pub unassigned: Vec<usize>,
    pub residual: f64,
    /// Every count and reconstruction matches the exact multiplicities.
    pub consistent: bool,
}

/// Numeric flat limit over ℂ of the period-n points of φ(x) + t as t → 0.
pub fn flat_limit_clusters(dmap: &DeformedMap, n: u64, t_sequence: &[Rational], digits: u32) -> Result<ClusterReport> {
    if t_sequence.is_empty() {
        return Err(Error::InvalidArgument("empty t sequence".into()));
    }
    for w in t_sequence.windows(2) {
        if Rational::from(w[1].abs_ref()) >= Rational::from(w[0].abs_ref()) {
            return Err(Error::InvalidArgument(
                "t values must decrease strictly toward 0".into(),
            ));
        }
    }
    if t_sequence.iter().any(|t| t.cmp0().is_eq()) {
        return Err(Error::InvalidArgument("t values must be nonzero".into()));
    }
    let locus = degenerate_parameter_locus(dmap, n)?;
    if let Some(t) = t_sequence.iter().find(|t| locus.contains(t)) {
        return Err(Error::InvalidArgument(format!("t = {t} lies on the degenerate locus")));
    }
    let prec = bits_for_digits(digits);
    let base = periodic_unipolys(&dmap.base, n)?;
    let divs = divisors(n)?;

    // Undeformed support, with exact multiplicities per center.
    let mut clusters = Vec::new();
    for block in profile_from_periodic(&base, n)? {
        let factor = block.factor.to_qpoly().expect("rational");
        for center in aberth(&factor.coeffs(), digits)? {
            clusters.push(Cluster {
                center,
                orbit: factor.clone(),
                expected_a: block.multiplicity(n).expect("profile covers n"),
                expected_a_star: block.formal,
                counts: Vec::new(),
                tags: Vec::new(),
                reconstructed_a: 0,
                reconstructed_a_star: 0,
                residual: 0.0,
            });
        }
    }
    let mut nearest: Option<Float> = None;
    for (i, a) in clusters.iter().enumerate() {
        for b in &clusters[i + 1..] {
            let d = a.center.dist(&b.center);
            if nearest.as_ref().is_none_or(|m| d < *m) {
                nearest = Some(d);
            }
        }
    }
    let scale = nearest.map_or_else(|| Float::with_val(prec, 1), |d| d / 2u32);
    let radius = |t: &Rational, m: u32| {
        let tf = Float::with_val(prec, t).abs();
        Float::with_val(prec, &scale * tf.pow(Float::with_val(prec, 1) / m))
    };

    // Shrink t until no two centers are within 4 radii of each other.
    let mut ts = t_sequence.to_vec();
    let overlapping = |t: &Rational| {
        clusters.iter().enumerate().any(|(i, a)| {
            clusters[i + 1..].iter().any(|b| {
                let r = radius(t, a.expected_a.max(b.expected_a));
                a.center.dist(&b.center) < Float::with_val(prec, &r * 4u32)
            })
        })
    };
    let mut shrinks = 0;
    while overlapping(ts.last().unwrap()) {
        if shrinks == MAX_SHRINKS {
            return Err(Error::Inconclusive("clusters overlap at every tried t".into()));
        }
        let next = Rational::from(ts.last().unwrap() / 10u32);
        ts.push(next);
        shrinks += 1;
    }

    let phi: Vec<Complex> = dmap
        .base_coeffs()?
        .iter()
        .map(|c| Complex::from_rational(c, prec))
        .collect();
    let tol = Float::with_val(prec, 10u32).pow(-((digits / 2) as i32));
    let band = Float::with_val(prec, &tol * 1000u32);
    let mut unassigned = Vec::new();
    let mut total_ok = true;
    for (k, t) in ts.iter().enumerate() {
        let fiber = tpoly_at(&periodic_tpoly(dmap, n)?, t);
        let roots = aberth(&fiber.coeffs(), digits)?;
        total_ok &= roots.len() == fiber.degree().unwrap_or(0);
        for c in clusters.iter_mut() {
            c.counts.push(0);
            c.tags.push(Vec::new());
        }
        let mut stray = 0;
        let mut shifted = phi.clone();
        shifted[0] = shifted[0].add(&Complex::from_rational(t, prec));
        for z in &roots {
            let (best, dist) = clusters
                .iter()
                .enumerate()
                .map(|(i, c)| (i, z.dist(&c.center)))
                .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
                .expect("nonempty support");
            let c = &mut clusters[best];
            if dist >= radius(t, c.expected_a) {
                stray += 1;
                continue;
            }
            let tag = period_tag(&shifted, z, n, &tol, &band)?;
            c.counts[k] += 1;
            c.tags[k].push(tag);
            if k == ts.len() - 1 {
                c.residual = c.residual.max(dist.to_f64());
            }
        }
        unassigned.push(stray);
    }
    let mut consistent = total_ok && unassigned.iter().all(|&s| s == 0);
    for c in clusters.iter_mut() {
        for tags in c.tags.iter_mut() {
            tags.sort_unstable();
        }
        let last = ts.len() - 1;
        c.reconstructed_a = c.counts[last];
        c.reconstructed_a_star = c.tags[last]
            .iter()
            .map(|&m| divs.iter().filter(|&d| d % m == 0).map(|d| mu(n / d)).sum::<i64>())
            .sum();
        consistent &=
            c.counts.iter().all(|&k| k == c.expected_a as usize) && c.reconstructed_a_star == c.expected_a_star;
    }
    let residual = clusters.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(ClusterReport {
        t_sequence: ts,
        clusters,
        unassigned,
        residual,
        consistent,
    })
}

/// Smallest d ≤ n with |φ^d(z) − z| < tol.
fn period_tag(phi: &[Complex], z: &Complex, n: u64, tol: &Float, band: &Float) -> Result<u64> {
    let mut cur = z.clone();
    for d in 1..=n {
        cur = crate::roots::eval(phi, &cur);
        let gap = cur.dist(z);
        if gap < *tol {
            return Ok(d);
        }
        if gap < *band {
            return Err(Error::Inconclusive(format!(
                "period tag for {z} is within the tolerance band at d = {d}"
            )));
        }
    }
    Err(Error::Inconclusive(format!("{z} does not return within {n} steps")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    fn running() -> DeformedMap {
        let f = Field::Rational;
        let c = |a, b| FieldElement::Rational(q(a, b));
        deform(&PolyMap::univariate(Poly::from_dense(&f, vec![c(-3, 4), c(0, 1), c(1, 1)])).unwrap()).unwrap()
    }

    fn tp(coeffs: &[&[(i64, i64)]]) -> TPoly {
        coeffs
            .iter()
            .map(|c| QPoly::from_rationals(c.iter().map(|&(a, b)| q(a, b)).collect()))
            .collect()
    }

    #[test]
    fn running_example_family() {
        let d = running();
        assert_eq!(d.deformed().to_string(), "(z^2 + (t - 3/4))");
        let p2 = periodic_tpoly(&d, 2).unwrap();
        let want = tp(&[
            &[(-3, 16), (-1, 2), (1, 1)],
            &[(-1, 1)],
            &[(-3, 2), (2, 1)],
            &[],
            &[(1, 1)],
        ]);
        assert_eq!(p2, want);
        let p1 = periodic_tpoly(&d, 1).unwrap();
        assert_eq!(p1, tp(&[&[(-3, 4), (1, 1)], &[(-1, 1)], &[(1, 1)]]));
        let poly = deformed_periodic_poly(&d, 2).unwrap();
        let at0 = crate::poly::specialize_parameter(&poly, &q(0, 1)).unwrap();
        assert_eq!(at0, crate::dynatomic::periodic_poly(d.base(), 2).unwrap());
    }

    #[test]
    fn locus_examples() {
        let d = running();
        let l2 = degenerate_parameter_locus(&d, 2).unwrap();
        assert_eq!(l2.rational_points, Some(vec![q(0, 1), q(1, 1)]));
        assert_eq!(l2.polynomial.degree(), Some(2));
        let l1 = degenerate_parameter_locus(&d, 1).unwrap();
        assert_eq!(l1.rational_points, Some(vec![q(1, 1)]));
        let zt = deform(&PolyMap::univariate(Poly::var(&Field::Rational, 1, 0).pow(2).unwrap()).unwrap()).unwrap();
        let l = degenerate_parameter_locus(&zt, 1).unwrap();
        assert_eq!(l.rational_points, Some(vec![q(1, 4)]));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = QPoly::from_rationals(vec![q(1, 3), q(-2, 1), q(0, 1), q(5, 7)]);
        let xs: Vec<Rational> = (0..4).map(Rational::from).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), f);
    }

    #[test]
    fn simplicity_examples() {
        let d = running();
        let s = simplicity_at(&d, 2, &q(1, 3)).unwrap();
        assert!(s.squarefree && s.degree == 4);
        assert!(!simplicity_at(&d, 2, &q(0, 1)).unwrap().squarefree);
        let s = simplicity_at(&d, 1, &q(1, 1)).unwrap();
        assert_eq!(s.repeated_factor, Some(QPoly::linear_root(&q(1, 2))));
        let r = generic_simplicity_check(&d, 2, 5, 7).unwrap();
        assert!(r.passed);
        assert_eq!(r.samples.len(), 5);
        assert_eq!(r, generic_simplicity_check(&d, 2, 5, 7).unwrap());
    }

    #[test]
    fn degree_is_conserved() {
        let d = running();
        assert!(degree_conservation_check(&d, 1).unwrap());
        assert!(degree_conservation_check(&d, 2).unwrap());
    }

    #[test]
    fn flat_limit_of_running_example() {
        let ts: Vec<Rational> = (3..=8).map(|k| Rational::from((1, 10i64.pow(k)))).collect();
        let r = flat_limit_clusters(&running(), 2, &ts, 30).unwrap();
        assert!(r.consistent, "{r:?}");
        assert!(r.residual < 1e-2);
        let at = |x: f64| {
            r.clusters
                .iter()
                .find(|c| (c.center.re.to_f64() - x).abs() < 1e-9)
                .unwrap()
        };
        let m = at(-0.5);
        assert_eq!(m.reconstructed_a, 3);
        assert_eq!(m.tags.last().unwrap(), &vec![1, 2, 2]);
        assert_eq!(m.reconstructed_a_star, 2);
        let s = at(1.5);
        assert_eq!(s.tags.last().unwrap(), &vec![1]);
        assert_eq!(s.reconstructed_a_star, 0);
    }

    #[test]
    fn rejects_bad_sequences() {
        let d = running();
        assert!(flat_limit_clusters(&d, 2, &[q(1, 100), q(1, 10)], 20).is_err());
        assert!(flat_limit_clusters(&d, 1, &[q(1, 1)], 20).is_err());
    }
}
