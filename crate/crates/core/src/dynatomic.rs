//! Periodic-point and dynatomic polynomials of one-variable maps.

use crate::error::{Error, Result};
use crate::field::{Embedding, FieldElement};
use crate::map::{dehomogenize, Model, PolyMap};
use crate::mobius::{divisors, mu};
use crate::poly::Poly;
use crate::univariate::UniPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynatomicResult {
    pub n: u64,
    /// φⁿ(z) − z (for a ℙ¹ map, the fixed-point form of φⁿ on the chart Y = 1).
    pub phi_n_minus_z: Poly,
    /// The quotient of the Möbius product.
    pub dynatomic: Poly,
    /// Whether the Möbius division was exact.
    pub division_certificate: bool,
}

/// Polynomials whose roots are the affine period-d points, for d = 1..=n.
pub(crate) fn periodic_unipolys(map: &PolyMap, n: u64) -> Result<Vec<UniPoly>> {
    if n == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    let out: Vec<UniPoly> = match map.model() {
        Model::Affine => {
            let phi = UniPoly::from_poly(map.univariate_poly()?)?;
            let z = UniPoly::x(phi.field());
            let mut cur = phi.clone();
            let mut out = Vec::with_capacity(n as usize);
            for d in 1..=n {
                if d > 1 {
                    cur = phi.compose(&cur);
                }
                out.push(cur.sub(&z));
            }
            out
        }
        Model::P1 => map
            .iterates(n)?
            .iter()
            .map(|m| dehomogenize(&m.fixed_point_form()?, false))
            .collect::<Result<_>>()?,
    };
    for (d, p) in out.iter().enumerate() {
        if p.is_zero() {
            return Err(degenerate(d as u64 + 1));
        }
    }
    Ok(out)
}

fn degenerate(d: u64) -> Error {
    Error::Degenerate(format!("phi^{d}(z) - z vanishes identically"))
}

fn periodic_forms_at_infinity(map: &PolyMap, n: u64) -> Result<Vec<UniPoly>> {
    let h = map.homogenize()?;
    let out: Vec<UniPoly> = h
        .iterates(n)?
        .iter()
        .map(|m| dehomogenize(&m.fixed_point_form()?, true))
        .collect::<Result<_>>()?;
    for (d, p) in out.iter().enumerate() {
        if p.is_zero() {
            return Err(degenerate(d as u64 + 1));
        }
    }
    Ok(out)
}

/// φⁿ(z) − z for a one-variable map.
pub fn periodic_poly(map: &PolyMap, n: u64) -> Result<Poly> {
    Ok(periodic_unipolys(map, n)?.pop().expect("n >= 1").to_poly())
}

/// Φ*ₙ as the quotient of the two signed halves of the Möbius product.
pub fn dynatomic_poly(map: &PolyMap, n: u64) -> Result<DynatomicResult> {
    let ps = periodic_unipolys(map, n)?;
    let (q, exact) = dynatomic_from_periodic(&ps, n)?;
    Ok(DynatomicResult {
        n,
        phi_n_minus_z: ps[n as usize - 1].to_poly(),
        dynatomic: q.to_poly(),
        division_certificate: exact,
    })
}

/// Given `ps[d-1]` for d = 1..=n, the Möbius quotient and whether it was exact.
pub(crate) fn dynatomic_from_periodic(ps: &[UniPoly], n: u64) -> Result<(UniPoly, bool)> {
    let field = ps[0].field().clone();
    let mut num = UniPoly::one(&field);
    let mut den = UniPoly::one(&field);
    for d in divisors(n)? {
        match mu(n / d) {
            1 => num = num.mul(&ps[d as usize - 1]),
            -1 => den = den.mul(&ps[d as usize - 1]),
            _ => {}
        }
    }
    match num.exact_div(&den)? {
        Some(q) => Ok((q, true)),
        None => Ok((num.div_rem(&den)?.0, false)),
    }
}

fn lift(poly: &UniPoly, point: &FieldElement) -> Result<UniPoly> {
    if *poly.field() == point.field() {
        return Ok(poly.clone());
    }
    let e = Embedding::new(poly.field(), &point.field())?;
    UniPoly::from_poly(&poly.to_poly().embed(&e)?)
}

/// a_P(n): the multiplicity of P as a root of φⁿ(z) − z. The point may lie
/// in an extension of the map's field.
pub fn multiplicity_at(map: &PolyMap, n: u64, point: &FieldElement) -> Result<u32> {
    let p = periodic_unipolys(map, n)?.pop().expect("n >= 1");
    lift(&p, point)?.order_at(point)
}

/// a*_P(n) = Σ_{d|n} μ(n/d) a_P(d).
pub fn formal_multiplicity_at(map: &PolyMap, n: u64, point: &FieldElement) -> Result<i64> {
    let ps = periodic_unipolys(map, n)?;
    let mut total = 0;
    for d in divisors(n)? {
        let m = mu(n / d);
        if m != 0 {
            total += m * i64::from(lift(&ps[d as usize - 1], point)?.order_at(point)?);
        }
    }
    Ok(total)
}

/// a_∞(n), read off on the chart X = 1.
pub fn multiplicity_at_infinity(map: &PolyMap, n: u64) -> Result<u32> {
    let p = periodic_forms_at_infinity(map, n)?.pop().expect("n >= 1");
    let zero = p.field().zero();
    p.order_at(&zero)
}

pub fn formal_multiplicity_at_infinity(map: &PolyMap, n: u64) -> Result<i64> {
    let ps = periodic_forms_at_infinity(map, n)?;
    let mut total = 0;
    for d in divisors(n)? {
        let p = &ps[d as usize - 1];
        total += mu(n / d) * i64::from(p.order_at(&p.field().zero())?);
    }
    Ok(total)
}

/// A squarefree factor of φⁿ(z) − z whose roots share one multiplicity
/// profile: a_P(d) for every d | n, and the resulting a*_P(n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitBlock {
    pub factor: UniPoly,
    pub profile: Vec<(u64, u32)>,
    pub formal: i64,
}

impl OrbitBlock {
    pub fn multiplicity(&self, d: u64) -> Option<u32> {
        self.profile.iter().find(|(e, _)| *e == d).map(|(_, m)| *m)
    }
}

/// Splits squarefree `g` by the multiplicity its roots have in `f`.
pub(crate) fn split_by_multiplicity(g: &UniPoly, f: &UniPoly) -> Result<Vec<(UniPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::Degenerate("multiplicity in the zero polynomial".into()));
    }
    if let (Some(gq), Some(fq)) = (g.to_qpoly(), f.to_qpoly()) {
        return Ok(crate::qpoly::QPoly::split_by_multiplicity(&gq, &fq)?
            .iter()
            .map(|(p, j)| (UniPoly::from_qpoly(p), *j))
            .collect());
    }
    let mut out = Vec::new();
    let mut h = g.monic();
    let mut cur = f.clone();
    let mut j = 0;
    loop {
        let common = h.gcd(&cur);
        let piece = h.exact_div(&common)?.expect("gcd divides");
        if piece.degree().unwrap_or(0) > 0 {
            out.push((piece, j));
        }
        if common.degree().unwrap_or(0) == 0 {
            break;
        }
        cur = cur.exact_div(&common)?.expect("gcd divides");
        h = common;
        j += 1;
    }
    Ok(out)
}

/// Partition of the affine period-n points into blocks of equal
/// multiplicity profile, without factoring into irreducibles.
pub fn orbit_profile(map: &PolyMap, n: u64) -> Result<Vec<OrbitBlock>> {
    let ps = periodic_unipolys(map, n)?;
    profile_from_periodic(&ps, n)
}

pub(crate) fn profile_from_periodic(ps: &[UniPoly], n: u64) -> Result<Vec<OrbitBlock>> {
    let divs = divisors(n)?;
    let (_, top) = ps[n as usize - 1].squarefree_decomposition()?;
    let mut blocks: Vec<(UniPoly, Vec<(u64, u32)>)> = top.into_iter().map(|(g, m)| (g, vec![(n, m)])).collect();
    for &d in divs.proper() {
        let mut next = Vec::new();
        for (g, prof) in blocks {
            for (piece, j) in split_by_multiplicity(&g, &ps[d as usize - 1])? {
                let mut p = prof.clone();
                p.push((d, j));
                next.push((piece, p));
            }
        }
        blocks = next;
    }
    let mut out: Vec<OrbitBlock> = blocks
        .into_iter()
        .map(|(factor, mut profile)| {
            profile.sort_unstable();
            let formal = profile.iter().map(|&(d, a)| mu(n / d) * i64::from(a)).sum();
            OrbitBlock {
                factor,
                profile,
                formal,
            }
        })
        .collect();
    out.sort_by_key(|a| (a.factor.degree(), a.factor.to_string()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rug::Rational;

    fn q(n: i64, d: i64) -> FieldElement {
        FieldElement::Rational(Rational::from((n, d)))
    }

    fn uni(coeffs: &[(i64, i64)]) -> PolyMap {
        PolyMap::univariate(Poly::from_dense(
            &Field::Rational,
            coeffs.iter().map(|&(n, d)| q(n, d)).collect(),
        ))
        .unwrap()
    }

    fn running() -> PolyMap {
        uni(&[(-3, 4), (0, 1), (1, 1)])
    }

    #[test]
    fn periodic_examples() {
        let phi = running();
        assert_eq!(periodic_poly(&phi, 1).unwrap().to_string(), "z^2 - z - 3/4");
        assert_eq!(periodic_poly(&phi, 2).unwrap().to_string(), "z^4 - 3/2*z^2 - z - 3/16");
        let sq = uni(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(periodic_poly(&sq, 2).unwrap().to_string(), "z^4 - z");
        let id = uni(&[(0, 1), (1, 1)]);
        assert!(matches!(periodic_poly(&id, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn dynatomic_examples() {
        let r = dynatomic_poly(&running(), 2).unwrap();
        assert!(r.division_certificate);
        assert_eq!(r.dynatomic.to_string(), "z^2 + z + 1/4");
        let sq = uni(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(dynatomic_poly(&sq, 2).unwrap().dynatomic.to_string(), "z^2 + z + 1");
        let r1 = dynatomic_poly(&running(), 1).unwrap();
        assert_eq!(r1.dynatomic, r1.phi_n_minus_z);
    }

    #[test]
    fn multiplicity_examples() {
        let phi = running();
        assert_eq!(multiplicity_at(&phi, 2, &q(-1, 2)).unwrap(), 3);
        assert_eq!(multiplicity_at(&phi, 2, &q(3, 2)).unwrap(), 1);
        assert_eq!(multiplicity_at(&phi, 1, &q(0, 1)).unwrap(), 0);
        assert_eq!(formal_multiplicity_at(&phi, 2, &q(-1, 2)).unwrap(), 2);
        assert_eq!(formal_multiplicity_at(&phi, 2, &q(3, 2)).unwrap(), 0);
        assert_eq!(formal_multiplicity_at(&phi, 1, &q(-1, 2)).unwrap(), 1);
        assert_eq!(multiplicity_at_infinity(&phi, 2).unwrap(), 1);
    }

    #[test]
    fn profile_of_running_example() {
        let blocks = orbit_profile(&running(), 2).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].factor.to_string(), "z + 1/2");
        assert_eq!(blocks[0].profile, vec![(1, 1), (2, 3)]);
        assert_eq!(blocks[0].formal, 2);
        assert_eq!(blocks[1].factor.to_string(), "z - 3/2");
        assert_eq!(blocks[1].profile, vec![(1, 1), (2, 1)]);
        assert_eq!(blocks[1].formal, 0);
    }

    #[test]
    fn finite_field_extension_points() {
        let f5 = Field::finite(5, 1).unwrap();
        let sq = PolyMap::univariate(Poly::from_dense(&f5, vec![f5.zero(), f5.zero(), f5.one()])).unwrap();
        let f25 = Field::finite(5, 2).unwrap();
        // primitive cube roots of unity in F25 have minimal period 2 under z^2
        let zeta = f25
            .elements()
            .unwrap()
            .find(|x| !x.is_one() && x.pow(3).is_one())
            .unwrap();
        assert_eq!(multiplicity_at(&sq, 2, &zeta).unwrap(), 1);
        assert_eq!(multiplicity_at(&sq, 1, &zeta).unwrap(), 0);
        assert_eq!(formal_multiplicity_at(&sq, 2, &zeta).unwrap(), 1);
    }

    #[test]
    fn projective_maps_and_infinity() {
        // z + 1 on P1: everything is at infinity, with multiplicity 2
        let shift = uni(&[(1, 1), (1, 1)]);
        assert_eq!(periodic_poly(&shift, 3).unwrap().to_string(), "3");
        assert_eq!(multiplicity_at_infinity(&shift, 3).unwrap(), 2);
        // [Y^2 : X^2] is z -> 1/z^2; infinity and 0 swap
        let f = Field::Rational;
        let x = Poly::var(&f, 2, 0);
        let y = Poly::var(&f, 2, 1);
        let m = PolyMap::projective(y.pow(2).unwrap(), x.pow(2).unwrap()).unwrap();
        assert_eq!(periodic_poly(&m, 1).unwrap().to_string(), "-z^3 + 1");
        assert_eq!(multiplicity_at_infinity(&m, 1).unwrap(), 0);
        assert_eq!(multiplicity_at_infinity(&m, 2).unwrap(), 1);
        assert_eq!(formal_multiplicity_at_infinity(&m, 2).unwrap(), 1);
        assert!(dynatomic_poly(&m, 2).unwrap().division_certificate);
    }
}
