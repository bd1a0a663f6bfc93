//! Zero-cycles of periodic points: Φₙ and Φ*ₙ, over ℚ at the level of
//! Galois orbits and over finite fields by exhaustive enumeration.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rug::Rational;

use crate::dynatomic::{multiplicity_at_infinity, periodic_unipolys, profile_from_periodic};
use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldElement, GaloisField};
use crate::local::{colength, local_system_from_iterate, ColengthValue};
use crate::map::{dehomogenize, Model, PolyMap};
use crate::mobius::{divisors, mu};
use crate::qpoly::QPoly;
use crate::univariate::UniPoly;

/// Largest coefficient size (bits) for which orbit factors are searched
/// for rational roots when normalizing.
const ROOT_SEARCH_BITS: u32 = 48;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraicPoint {
    Rational(Vec<Rational>),
    /// Coordinates in the smallest field F_{p^j} containing all of them.
    Finite {
        field: Arc<GaloisField>,
        coords: Vec<u64>,
    },
    /// Every root of a monic squarefree polynomial over ℚ.
    Orbit(QPoly),
    Infinity,
}

impl AlgebraicPoint {
    fn rank(&self) -> u8 {
        match self {
            AlgebraicPoint::Rational(_) => 0,
            AlgebraicPoint::Finite { .. } => 1,
            AlgebraicPoint::Orbit(_) => 2,
            AlgebraicPoint::Infinity => 3,
        }
    }

    /// Number of geometric points this key stands for.
    pub fn degree(&self) -> u64 {
        match self {
            AlgebraicPoint::Orbit(q) => q.degree().unwrap_or(0) as u64,
            _ => 1,
        }
    }

    /// Coordinates as field elements of the point's own field.
    pub fn coordinates(&self) -> Option<Vec<FieldElement>> {
        match self {
            AlgebraicPoint::Rational(c) => Some(c.iter().cloned().map(FieldElement::Rational).collect()),
            AlgebraicPoint::Finite { field, coords } => {
                let f = Field::Finite(field.clone());
                Some(coords.iter().map(|&v| f.finite_element(v).expect("reduced")).collect())
            }
            _ => None,
        }
    }

    /// The univariate polynomial vanishing exactly on this key, for ℚ points.
    fn as_orbit(&self) -> Option<QPoly> {
        match self {
            AlgebraicPoint::Orbit(q) => Some(q.clone()),
            AlgebraicPoint::Rational(c) if c.len() == 1 => Some(QPoly::linear_root(&c[0])),
            _ => None,
        }
    }
}

impl PartialOrd for AlgebraicPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        use AlgebraicPoint::*;
        match (self, other) {
            (Rational(a), Rational(b)) => a.cmp(b),
            (Finite { field: fa, coords: a }, Finite { field: fb, coords: b }) => {
                (fa.degree(), a).cmp(&(fb.degree(), b))
            }
            (Orbit(a), Orbit(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for AlgebraicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = |parts: Vec<String>| {
            if parts.len() == 1 {
                parts[0].clone()
            } else {
                format!("({})", parts.join(", "))
            }
        };
        match self {
            AlgebraicPoint::Rational(c) => f.write_str(&coords(c.iter().map(ToString::to_string).collect())),
            AlgebraicPoint::Finite { .. } => f.write_str(&coords(
                self.coordinates().unwrap().iter().map(ToString::to_string).collect(),
            )),
            AlgebraicPoint::Orbit(q) => write!(f, "roots of {q}"),
            AlgebraicPoint::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    Affine(usize),
    P1,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Affine(b) => write!(f, "A{b}"),
            Ambient::P1 => f.write_str("P1"),
        }
    }
}

/// A finite formal sum of points with nonzero integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCycle {
    field: Field,
    ambient: Ambient,
    /// Over finite fields: only points of degree ≤ this over the base field.
    ext_cap: Option<u32>,
    entries: BTreeMap<AlgebraicPoint, i64>,
}

impl ZeroCycle {
    pub fn new(field: &Field, ambient: Ambient, ext_cap: Option<u32>) -> Self {
        ZeroCycle {
            field: field.clone(),
            ambient,
            ext_cap,
            entries: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn ext_cap(&self) -> Option<u32> {
        self.ext_cap
    }

    pub fn entries(&self) -> impl Iterator<Item = (&AlgebraicPoint, i64)> {
        self.entries.iter().map(|(p, &m)| (p, m))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, point: &AlgebraicPoint) -> i64 {
        self.entries.get(point).copied().unwrap_or(0)
    }

    pub fn add_point(&mut self, point: AlgebraicPoint, m: i64) {
        if m == 0 {
            return;
        }
        let e = self.entries.entry(point.clone()).or_insert(0);
        *e += m;
        if *e == 0 {
            self.entries.remove(&point);
        }
    }

    /// `self + coeff·other`.
    pub fn combine(&self, other: &ZeroCycle, coeff: i64) -> Result<ZeroCycle> {
        if self.field != other.field || self.ambient != other.ambient {
            return Err(Error::FieldMismatch(format!(
                "cycles on {} over {} and {} over {}",
                self.ambient, self.field, other.ambient, other.field
            )));
        }
        let mut out = self.clone();
        out.ext_cap = match (self.ext_cap, other.ext_cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for (p, m) in &other.entries {
            out.add_point(p.clone(), coeff * m);
        }
        Ok(out)
    }

    /// Σ m·deg(P).
    pub fn total_degree(&self) -> i64 {
        self.entries.iter().map(|(p, m)| m * p.degree() as i64).sum()
    }

    /// Equality as formal sums of geometric points, independent of how ℚ
    /// orbits are grouped into keys.
    pub fn equivalent(&self, other: &ZeroCycle) -> bool {
        if self.field != other.field || self.ambient != other.ambient {
            return false;
        }
        let split = |c: &ZeroCycle| {
            let mut plain = BTreeMap::new();
            let (mut pos, mut neg) = (QPoly::one(), QPoly::one());
            for (p, &m) in &c.entries {
                match p.as_orbit() {
                    Some(q) if m > 0 => pos = pos.mul(&qpow(&q, m as u32)),
                    Some(q) => neg = neg.mul(&qpow(&q, (-m) as u32)),
                    None => {
                        plain.insert(p.clone(), m);
                    }
                }
            }
            (plain, pos, neg)
        };
        let (pa, a_pos, a_neg) = split(self);
        let (pb, b_pos, b_neg) = split(other);
        pa == pb && a_pos.mul(&b_neg) == b_pos.mul(&a_neg)
    }

    /// Canonical form: ℚ orbits regrouped into one coprime key per
    /// multiplicity, with rational roots split off as points.
    pub fn normalized(&self) -> Result<ZeroCycle> {
        let mut out = ZeroCycle::new(&self.field, self.ambient, self.ext_cap);
        let mut orbits = Vec::new();
        for (p, &m) in &self.entries {
            match p.as_orbit() {
                Some(q) => orbits.push((q, m)),
                None => out.add_point(p.clone(), m),
            }
        }
        let mut by_mult: BTreeMap<i64, QPoly> = BTreeMap::new();
        for (g, m) in coprime_refine(orbits)? {
            let e = by_mult.entry(m).or_insert_with(QPoly::one);
            *e = e.mul(&g);
        }
        for (m, g) in by_mult {
            let mut rest = g;
            if let Some(roots) = rest.rational_roots(ROOT_SEARCH_BITS) {
                for r in roots {
                    rest = rest.exact_div(&QPoly::linear_root(&r))?.expect("root divides");
                    out.add_point(AlgebraicPoint::Rational(vec![r]), m);
                }
            }
            if rest.degree().unwrap_or(0) > 0 {
                out.add_point(AlgebraicPoint::Orbit(rest.monic()), m);
            }
        }
        Ok(out)
    }
}

fn qpow(q: &QPoly, e: u32) -> QPoly {
    (0..e).fold(QPoly::one(), |acc, _| acc.mul(q))
}

/// Disjoint squarefree pieces carrying the summed multiplicities of
/// possibly overlapping squarefree inputs.
fn coprime_refine(keys: Vec<(QPoly, i64)>) -> Result<Vec<(QPoly, i64)>> {
    let mut pieces: Vec<(QPoly, i64)> = Vec::new();
    for (g, m) in keys {
        let mut rest = g.monic();
        let mut next = Vec::with_capacity(pieces.len() + 1);
        for (h, mh) in pieces {
            if rest.degree().unwrap_or(0) == 0 {
                next.push((h, mh));
                continue;
            }
            let c = h.gcd(&rest);
            if c.degree().unwrap_or(0) == 0 {
                next.push((h, mh));
                continue;
            }
            let h_only = h.exact_div(&c)?.expect("gcd divides");
            if h_only.degree().unwrap_or(0) > 0 {
                next.push((h_only, mh));
            }
            rest = rest.exact_div(&c)?.expect("gcd divides");
            next.push((c, mh + m));
        }
        if rest.degree().unwrap_or(0) > 0 {
            next.push((rest, m));
        }
        pieces = next;
    }
    pieces.retain(|(_, m)| *m != 0);
    Ok(pieces)
}

impl fmt::Display for ZeroCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.entries.iter().map(|(p, m)| format!("{m}*[{p}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectivityReport {
    pub effective: bool,
    pub violations: Vec<(AlgebraicPoint, i64)>,
    /// Σ m·deg(P) over the whole cycle.
    pub total: i64,
}

pub fn verify_effectivity(cycle: &ZeroCycle) -> EffectivityReport {
    let violations: Vec<(AlgebraicPoint, i64)> = cycle
        .entries()
        .filter(|(_, m)| *m < 0)
        .map(|(p, m)| (p.clone(), m))
        .collect();
    EffectivityReport {
        effective: violations.is_empty(),
        violations,
        total: cycle.total_degree(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicPoint {
    pub point: AlgebraicPoint,
    pub minimal_period: u64,
}

/// Maps points of F_{p^K} onto their minimal subfield F_{p^j}.
struct Canonicalizer {
    p: u64,
    fields: HashMap<u32, Arc<GaloisField>>,
    inverse: HashMap<(u32, u32), HashMap<u64, u64>>,
}

impl Canonicalizer {
    fn new(p: u64) -> Self {
        Canonicalizer {
            p,
            fields: HashMap::new(),
            inverse: HashMap::new(),
        }
    }

    fn field(&mut self, k: u32) -> Result<Arc<GaloisField>> {
        if let Some(f) = self.fields.get(&k) {
            return Ok(f.clone());
        }
        let f = GaloisField::new(self.p, k)?;
        self.fields.insert(k, f.clone());
        Ok(f)
    }

    fn point(&mut self, big: &Arc<GaloisField>, coords: &[u64]) -> Result<AlgebraicPoint> {
        let j = coords.iter().fold(1u32, |acc, &c| lcm(acc, big.element_degree(c)));
        if j == big.degree() {
            return Ok(AlgebraicPoint::Finite {
                field: self.field(j)?,
                coords: coords.to_vec(),
            });
        }
        let small = self.field(j)?;
        let key = (big.degree(), j);
        if let std::collections::hash_map::Entry::Vacant(e) = self.inverse.entry(key) {
            let image = small.embedding_into(big)?;
            let table = (0..small.size()).map(|a| (small.embed(a, big, image), a)).collect();
            e.insert(table);
        }
        let table = &self.inverse[&key];
        Ok(AlgebraicPoint::Finite {
            field: small,
            coords: coords.iter().map(|c| table[c]).collect(),
        })
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

/// A map over a finite field with coefficients as raw field values.
struct RawMap {
    gf: Arc<GaloisField>,
    coords: Vec<Vec<(Vec<u32>, u64)>>,
}

impl RawMap {
    fn new(map: &PolyMap, gf: &Arc<GaloisField>) -> Result<Self> {
        let target = Field::Finite(gf.clone());
        let e = Embedding::new(map.field(), &target)?;
        let lifted = map.embed(&e)?;
        let coords = lifted
            .coords()
            .iter()
            .map(|c| {
                c.terms()
                    .map(|(m, v)| (m.exponents().to_vec(), v.as_finite().expect("finite").value()))
                    .collect()
            })
            .collect();
        Ok(RawMap { gf: gf.clone(), coords })
    }

    fn eval(&self, x: &[u64]) -> Vec<u64> {
        let gf = &self.gf;
        self.coords
            .iter()
            .map(|terms| {
                terms.iter().fold(0, |acc, (e, c)| {
                    let t = e
                        .iter()
                        .zip(x)
                        .fold(*c, |t, (&k, &xi)| gf.mul(t, gf.pow(xi, u64::from(k))));
                    gf.add(acc, t)
                })
            })
            .collect()
    }

    /// For ℙ¹ maps: the image of (x : y), normalized so the last nonzero
    /// coordinate is 1.
    fn eval_projective(&self, x: &[u64]) -> Vec<u64> {
        normalize_projective(&self.gf, self.eval(x))
    }
}

fn normalize_projective(gf: &GaloisField, v: Vec<u64>) -> Vec<u64> {
    let pivot = if v[1] != 0 { v[1] } else { v[0] };
    let inv = gf.inv(pivot).expect("a morphism never maps to (0 : 0)");
    v.iter().map(|&c| gf.mul(c, inv)).collect()
}

/// Odometer over all vectors in F^b.
fn for_each_point<F: FnMut(&[u64]) -> Result<()>>(size: u64, b: usize, mut f: F) -> Result<()> {
    let mut x = vec![0u64; b];
    loop {
        f(&x)?;
        let mut i = 0;
        loop {
            if i == b {
                return Ok(());
            }
            x[i] += 1;
            if x[i] < size {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn base_galois(map: &PolyMap) -> Result<Arc<GaloisField>> {
    map.field()
        .galois()
        .cloned()
        .ok_or_else(|| Error::Unsupported("enumeration needs a map over a finite field".into()))
}

/// Symbolic check that φ^d − id has no identically vanishing coordinate
/// for d | n (affine), or that the fixed-point form of φ^d is nonzero (ℙ¹).
fn check_nondegenerate(map: &PolyMap, n: u64) -> Result<()> {
    if map.model() == Model::P1 || map.is_univariate() {
        periodic_unipolys(map, n)?;
        return Ok(());
    }
    let its = map.iterates(n)?;
    let b = map.nvars();
    for d in divisors(n)? {
        let it = &its[d as usize - 1];
        for (i, c) in it.coords().iter().enumerate() {
            if c.sub(&crate::poly::Poly::var(map.field(), b, i))?.is_zero() {
                return Err(Error::Degenerate(format!(
                    "coordinate {} of phi^{d} is the identity",
                    i + 1
                )));
            }
        }
        if it
            .coords()
            .iter()
            .enumerate()
            .all(|(i, c)| *c == crate::poly::Poly::var(map.field(), b, i))
        {
            return Err(Error::Degenerate(format!("phi^{d} is the identity")));
        }
    }
    Ok(())
}

/// All points over F_{q^k}, k ≤ k_max, fixed by φⁿ, with minimal periods.
/// For ℙ¹ maps the point at infinity is included.
pub fn enumerate_periodic(map: &PolyMap, n: u64, k_max: u32) -> Result<Vec<PeriodicPoint>> {
    if n == 0 || k_max == 0 {
        return Err(Error::InvalidArgument(
            "period and extension cap must be positive".into(),
        ));
    }
    check_nondegenerate(map, n)?;
    let base = base_galois(map)?;
    let (p, e) = (base.characteristic(), base.degree());
    let mut canon = Canonicalizer::new(p);
    let mut out = Vec::new();
    for k in 1..=k_max {
        let big = canon.field(e * k)?;
        let raw = RawMap::new(map, &big)?;
        let level = |coords: &[u64]| {
            let j = coords.iter().fold(1u32, |acc, &c| lcm(acc, big.element_degree(c)));
            lcm(j, e) / e
        };
        let mut visit = |x: &[u64], projective: bool| -> Result<()> {
            if level(x) != k {
                return Ok(());
            }
            let mut cur = x.to_vec();
            for m in 1..=n {
                cur = if projective {
                    raw.eval_projective(&cur)
                } else {
                    raw.eval(&cur)
                };
                if cur == x {
                    if n.is_multiple_of(m) {
                        let point = if projective {
                            if x[1] == 0 {
                                AlgebraicPoint::Infinity
                            } else {
                                canon.point(&big, &x[..1])?
                            }
                        } else {
                            canon.point(&big, x)?
                        };
                        out.push(PeriodicPoint {
                            point,
                            minimal_period: m,
                        });
                    }
                    break;
                }
            }
            Ok(())
        };
        match map.model() {
            Model::Affine => for_each_point(big.size(), map.nvars(), |x| visit(x, false))?,
            Model::P1 => {
                for z in 0..big.size() {
                    visit(&[z, 1], true)?;
                }
                if k == 1 {
                    visit(&[1, 0], true)?;
                }
            }
        }
    }
    out.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(out)
}

/// Order of vanishing of φⁿ(z) − z at `p`, from φⁿ(p + h) computed as a
/// truncated power series in h.
fn series_order(gf: &GaloisField, phi: &[u64], n: u64, p: u64) -> u32 {
    let mut t = 8usize;
    loop {
        let mut s = vec![0u64; t];
        s[0] = p;
        s[1] = 1;
        for _ in 0..n {
            let mut acc = vec![0u64; t];
            for &c in phi.iter().rev() {
                acc = series_mul(gf, &acc, &s);
                acc[0] = gf.add(acc[0], c);
            }
            s = acc;
        }
        s[0] = gf.sub(s[0], p);
        s[1] = gf.sub(s[1], 1);
        if let Some(v) = s.iter().position(|&c| c != 0) {
            return v as u32;
        }
        t *= 2;
    }
}

fn series_mul(gf: &GaloisField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let t = a.len();
    let mut out = vec![0u64; t];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().take(t - i).enumerate() {
            if y != 0 {
                out[i + j] = gf.add(out[i + j], gf.mul(x, y));
            }
        }
    }
    out
}

fn ambient_of(map: &PolyMap) -> Ambient {
    match map.model() {
        Model::Affine => Ambient::Affine(map.nvars()),
        Model::P1 => Ambient::P1,
    }
}

/// Φₙ. Over ℚ the map must be univariate (or ℙ¹) and points are grouped
/// into orbits; over F_q points are enumerated up to degree `k_max`.
pub fn build_cycle(map: &PolyMap, n: u64, k_max: u32) -> Result<ZeroCycle> {
    match map.field() {
        Field::Finite(_) => finite_cycle(map, n, k_max, false),
        Field::Rational => rational_cycle(map, n, false),
        Field::RationalFunction => Err(Error::Unsupported("cycles over Q(t)".into())),
    }
}

/// Φ*ₙ = Σ_{d|n} μ(n/d) Φ_d.
pub fn build_dynatomic_cycle(map: &PolyMap, n: u64, k_max: u32) -> Result<ZeroCycle> {
    match map.field() {
        Field::Finite(_) => finite_cycle(map, n, k_max, true),
        Field::Rational => rational_cycle(map, n, true),
        Field::RationalFunction => Err(Error::Unsupported("cycles over Q(t)".into())),
    }
}

/// Φₙ restricted to caller-supplied candidate points, for multivariate maps
/// over ℚ where the support cannot be found exhaustively.
pub fn build_cycle_at_points(map: &PolyMap, n: u64, candidates: &[Vec<Rational>]) -> Result<ZeroCycle> {
    let mut out = ZeroCycle::new(map.field(), ambient_of(map), None);
    check_nondegenerate(map, n)?;
    for c in candidates {
        let pt: Vec<FieldElement> = c.iter().cloned().map(FieldElement::Rational).collect();
        let a = crate::local::a_p(map, n, &pt)?;
        out.add_point(AlgebraicPoint::Rational(c.clone()), a as i64);
    }
    Ok(out)
}

fn rational_cycle(map: &PolyMap, n: u64, dynatomic: bool) -> Result<ZeroCycle> {
    if !(map.is_univariate() || map.model() == Model::P1) {
        return Err(Error::Unsupported(
            "over Q, multivariate cycles need candidate points".into(),
        ));
    }
    let ps = periodic_unipolys(map, n)?;
    let mut out = ZeroCycle::new(map.field(), ambient_of(map), None);
    for block in profile_from_periodic(&ps, n)? {
        let m = if dynatomic {
            block.formal
        } else {
            i64::from(block.multiplicity(n).expect("profile covers n"))
        };
        let q = block.factor.to_qpoly().expect("rational");
        out.add_point(AlgebraicPoint::Orbit(q), m);
    }
    if map.model() == Model::P1 {
        let m = if dynatomic {
            crate::dynatomic::formal_multiplicity_at_infinity(map, n)?
        } else {
            i64::from(multiplicity_at_infinity(map, n)?)
        };
        out.add_point(AlgebraicPoint::Infinity, m);
    }
    Ok(out)
}

fn finite_cycle(map: &PolyMap, n: u64, k_max: u32, dynatomic: bool) -> Result<ZeroCycle> {
    let points = enumerate_periodic(map, n, k_max)?;
    let mut out = ZeroCycle::new(map.field(), ambient_of(map), Some(k_max));
    let divs = divisors(n)?;
    let mut cache = MultiplicityCache::new(map);
    for pp in &points {
        let mut total = 0i64;
        for &d in divs.as_slice() {
            let coeff = if dynatomic { mu(n / d) } else { i64::from(d == n) };
            // a_P(d) vanishes unless the minimal period divides d
            if coeff == 0 || d % pp.minimal_period != 0 {
                continue;
            }
            total += coeff * cache.multiplicity(&pp.point, d)? as i64;
        }
        out.add_point(pp.point.clone(), total);
    }
    Ok(out)
}

/// Per-point multiplicities over finite fields, reusing lifted data.
struct MultiplicityCache<'a> {
    map: &'a PolyMap,
    iterates: HashMap<(u32, u64), PolyMap>,
    forms: HashMap<(u32, u64, bool), UniPoly>,
}

impl<'a> MultiplicityCache<'a> {
    fn new(map: &'a PolyMap) -> Self {
        MultiplicityCache {
            map,
            iterates: HashMap::new(),
            forms: HashMap::new(),
        }
    }

    fn multiplicity(&mut self, point: &AlgebraicPoint, d: u64) -> Result<u64> {
        match (self.map.model(), point) {
            (Model::P1, AlgebraicPoint::Infinity) => {
                Ok(u64::from(self.form(d, true, None)?.order_at(&self.map.field().zero())?))
            }
            (Model::P1, AlgebraicPoint::Finite { field, coords }) => {
                let f = Field::Finite(field.clone());
                let x = f.finite_element(coords[0])?;
                Ok(u64::from(self.form(d, false, Some(field))?.order_at(&x)?))
            }
            (Model::Affine, AlgebraicPoint::Finite { field, coords }) if self.map.nvars() == 1 => {
                let raw = RawMap::new(self.map, field)?;
                let mut phi = vec![0u64; self.map.degree() as usize + 1];
                for (e, c) in &raw.coords[0] {
                    phi[e[0] as usize] = *c;
                }
                Ok(u64::from(series_order(field, &phi, d, coords[0])))
            }
            (Model::Affine, AlgebraicPoint::Finite { field, coords }) => {
                let key = (field.degree(), d);
                if !self.iterates.contains_key(&key) {
                    let e = Embedding::new(self.map.field(), &Field::Finite(field.clone()))?;
                    self.iterates.insert(key, self.map.embed(&e)?.iterate(d)?);
                }
                let f = Field::Finite(field.clone());
                let pt: Vec<FieldElement> = coords.iter().map(|&c| f.finite_element(c)).collect::<Result<_>>()?;
                let sys = local_system_from_iterate(&self.iterates[&key], &pt)?;
                let report = colength(&sys, sys.bezout_bound());
                match report.value {
                    ColengthValue::Finite(v) => Ok(v),
                    ColengthValue::Degenerate => Err(Error::Degenerate(format!("phi^{d} - id near {point}"))),
                    ColengthValue::Inconclusive => Err(Error::Inconclusive(format!(
                        "colength at {point} exceeded {} (degree {})",
                        report.bound_used, report.certified_at_degree
                    ))),
                }
            }
            _ => Err(Error::Unsupported(format!("multiplicity at {point}"))),
        }
    }

    fn form(&mut self, d: u64, at_infinity: bool, field: Option<&Arc<GaloisField>>) -> Result<UniPoly> {
        let deg = field.map_or(0, |f| f.degree());
        let key = (deg, d, at_infinity);
        if let Some(f) = self.forms.get(&key) {
            return Ok(f.clone());
        }
        let map = match field {
            Some(f) => self
                .map
                .embed(&Embedding::new(self.map.field(), &Field::Finite(f.clone()))?)?,
            None => self.map.clone(),
        };
        let form = dehomogenize(&map.iterate(d)?.fixed_point_form()?, at_infinity)?;
        if form.is_zero() {
            return Err(Error::Degenerate(format!("phi^{d} is the identity")));
        }
        self.forms.insert(key, form.clone());
        Ok(form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn q(n: i64, d: i64) -> FieldElement {
        FieldElement::Rational(Rational::from((n, d)))
    }

    fn running() -> PolyMap {
        PolyMap::univariate(Poly::from_dense(&Field::Rational, vec![q(-3, 4), q(0, 1), q(1, 1)])).unwrap()
    }

    fn square_map(p: u64) -> PolyMap {
        let f = Field::finite(p, 1).unwrap();
        PolyMap::univariate(Poly::from_dense(&f, vec![f.zero(), f.zero(), f.one()])).unwrap()
    }

    fn rat(n: i64, d: i64) -> AlgebraicPoint {
        AlgebraicPoint::Rational(vec![Rational::from((n, d))])
    }

    #[test]
    fn running_example_cycles() {
        let phi2 = build_cycle(&running(), 2, 1).unwrap().normalized().unwrap();
        assert_eq!(phi2.multiplicity(&rat(-1, 2)), 3);
        assert_eq!(phi2.multiplicity(&rat(3, 2)), 1);
        assert_eq!(phi2.len(), 2);
        let star = build_dynatomic_cycle(&running(), 2, 1).unwrap().normalized().unwrap();
        assert_eq!(star.to_string(), "2*[-1/2]");
        assert!(verify_effectivity(&star).effective);
        let sum = build_dynatomic_cycle(&running(), 1, 1)
            .unwrap()
            .combine(&star, 1)
            .unwrap();
        assert!(sum.equivalent(&build_cycle(&running(), 2, 1).unwrap()));
    }

    #[test]
    fn enumeration_over_f5() {
        let sq = square_map(5);
        let pts = enumerate_periodic(&sq, 1, 1).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|p| p.minimal_period == 1));
        let pts = enumerate_periodic(&sq, 2, 2).unwrap();
        let periods: Vec<u64> = pts.iter().map(|p| p.minimal_period).collect();
        assert_eq!(periods, vec![1, 1, 2, 2]);
        for p in &pts[2..] {
            let AlgebraicPoint::Finite { field, coords } = &p.point else {
                panic!()
            };
            assert_eq!(field.size(), 25);
            // roots of z^2 + z + 1
            let x = coords[0];
            assert_eq!(field.add(field.add(field.mul(x, x), x), 1), 0);
        }
    }

    #[test]
    fn finite_cycles() {
        let sq = square_map(5);
        let c1 = build_cycle(&sq, 1, 1).unwrap();
        assert_eq!(c1.to_string(), "1*[0] + 1*[1]");
        let star = build_dynatomic_cycle(&sq, 2, 2).unwrap();
        assert_eq!(star.len(), 2);
        assert!(star.entries().all(|(p, m)| m == 1 && p.degree() == 1));
        assert!(verify_effectivity(&star).effective);
        assert_eq!(star.ext_cap(), Some(2));
        let whole = build_cycle(&sq, 2, 2).unwrap();
        let sum = build_dynatomic_cycle(&sq, 1, 2).unwrap().combine(&star, 1).unwrap();
        assert_eq!(sum, whole);
    }

    #[test]
    fn swap_map_is_degenerate_at_period_two() {
        let f = Field::finite(3, 1).unwrap();
        let x = Poly::var(&f, 2, 0);
        let y = Poly::var(&f, 2, 1);
        let swap = PolyMap::affine(vec![y, x]).unwrap();
        assert!(enumerate_periodic(&swap, 1, 1).is_ok());
        assert!(matches!(enumerate_periodic(&swap, 2, 1), Err(Error::Degenerate(_))));
        let id = PolyMap::univariate(Poly::var(&Field::Rational, 1, 0)).unwrap();
        assert!(matches!(build_cycle(&id, 3, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn effectivity_reports_violations() {
        let mut c = ZeroCycle::new(&Field::Rational, Ambient::Affine(1), None);
        c.add_point(rat(1, 1), 1);
        c.add_point(rat(2, 1), -1);
        let r = verify_effectivity(&c);
        assert!(!r.effective);
        assert_eq!(r.violations, vec![(rat(2, 1), -1)]);
        assert_eq!(r.total, 0);
    }

    #[test]
    fn multivariate_finite_cycle_uses_colength() {
        // (x + y^2, y + x^2) over F3: the origin has multiplicity 4
        let f = Field::finite(3, 1).unwrap();
        let x = Poly::var(&f, 2, 0);
        let y = Poly::var(&f, 2, 1);
        let m = PolyMap::affine(vec![
            x.add(&y.pow(2).unwrap()).unwrap(),
            y.add(&x.pow(2).unwrap()).unwrap(),
        ])
        .unwrap();
        let c = build_cycle(&m, 1, 1).unwrap();
        let origin = AlgebraicPoint::Finite {
            field: f.galois().unwrap().clone(),
            coords: vec![0, 0],
        };
        assert_eq!(c.multiplicity(&origin), 4);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn projective_cycle_includes_infinity() {
        let f = Field::finite(5, 1).unwrap();
        let x = Poly::var(&f, 2, 0);
        let y = Poly::var(&f, 2, 1);
        // z -> 1/z^2 swaps 0 and infinity
        let m = PolyMap::projective(y.pow(2).unwrap(), x.pow(2).unwrap()).unwrap();
        let star = build_dynatomic_cycle(&m, 2, 2).unwrap();
        assert_eq!(star.multiplicity(&AlgebraicPoint::Infinity), 1);
        assert!(verify_effectivity(&star).effective);
        let rq = PolyMap::projective(
            Poly::var(&Field::Rational, 2, 1).pow(2).unwrap(),
            Poly::var(&Field::Rational, 2, 0).pow(2).unwrap(),
        )
        .unwrap();
        let c = build_dynatomic_cycle(&rq, 2, 1).unwrap().normalized().unwrap();
        assert_eq!(c.multiplicity(&AlgebraicPoint::Infinity), 1);
        assert_eq!(c.multiplicity(&rat(0, 1)), 1);
    }
}
