//! Local intersection multiplicities as colengths of zero-dimensional
//! ideals at the origin.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldElement};
use crate::map::{Model, PolyMap};
use crate::mobius::{divisors, mu};
use crate::poly::Poly;

/// Generators f₁, …, f_b in b variables, all vanishing at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSystem {
    generators: Vec<Poly>,
}

impl LocalSystem {
    pub fn new(generators: Vec<Poly>) -> Result<Self> {
        let b = generators.len();
        let Some(first) = generators.first() else {
            return Err(Error::InvalidArgument("empty local system".into()));
        };
        for g in &generators {
            if g.nvars() != b {
                return Err(Error::DimensionMismatch {
                    expected: b,
                    got: g.nvars(),
                });
            }
            if g.field() != first.field() {
                return Err(Error::FieldMismatch(format!("{} vs {}", g.field(), first.field())));
            }
            if !g.constant_term().is_zero() {
                return Err(Error::InvalidArgument(format!("{g} does not vanish at the origin")));
            }
        }
        Ok(LocalSystem { generators })
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn field(&self) -> &Field {
        self.generators[0].field()
    }

    /// Π deg fᵢ, saturating.
    pub fn bezout_bound(&self) -> u64 {
        self.generators
            .iter()
            .map(|g| g.total_degree().unwrap_or(0).max(1))
            .fold(1u64, |acc, d| acc.saturating_mul(d))
    }

    /// Whether the linear parts of the generators are independent.
    pub fn jacobian_invertible(&self) -> bool {
        let b = self.nvars();
        let rows = self.generators.iter().map(|g| {
            (0..b)
                .filter_map(|j| {
                    let mut e = vec![0; b];
                    e[j] = 1;
                    let c = g.coefficient(&e);
                    (!c.is_zero()).then_some((j, c))
                })
                .collect::<BTreeMap<_, _>>()
        });
        let mut echelon = Echelon::new(self.field());
        rows.filter(|r| echelon.insert(r.clone())).count() == b
    }

    /// Applies a linear change of coordinates x ↦ A·x to every generator.
    pub fn change_coordinates(&self, matrix: &[Vec<FieldElement>]) -> Result<LocalSystem> {
        let b = self.nvars();
        if matrix.len() != b || matrix.iter().any(|r| r.len() != b) {
            return Err(Error::DimensionMismatch {
                expected: b,
                got: matrix.len(),
            });
        }
        let field = self.field().clone();
        let subs = matrix
            .iter()
            .map(|row| {
                row.iter().enumerate().try_fold(Poly::zero(&field, b), |acc, (j, c)| {
                    acc.add(&Poly::var(&field, b, j).scale(c))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LocalSystem::new(
            self.generators
                .iter()
                .map(|g| g.compose(&subs))
                .collect::<Result<_>>()?,
        )
    }
}

impl fmt::Display for LocalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ColengthValue {
    Finite(u64),
    Degenerate,
    Inconclusive,
}

impl fmt::Display for ColengthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColengthValue::Finite(v) => write!(f, "{v}"),
            ColengthValue::Degenerate => f.write_str("degenerate"),
            ColengthValue::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColengthReport {
    pub value: ColengthValue,
    /// The D with d(D) = d(D + 1), or the last degree reached.
    pub certified_at_degree: u32,
    pub bound_used: u64,
}

/// The shifted system φⁿ(x + P) − x − P of a fixed point P of φⁿ. P may
/// have coordinates in an extension of the map's field.
pub fn local_system(map: &PolyMap, n: u64, point: &[FieldElement]) -> Result<LocalSystem> {
    if map.model() != Model::Affine {
        return Err(Error::Unsupported("local systems need an affine map".into()));
    }
    let map = lift_map(map, point)?;
    local_system_from_iterate(&map.iterate(n)?, point)
}

/// Same as [`local_system`] with the iterate already computed over the
/// point's field.
pub(crate) fn local_system_from_iterate(it: &PolyMap, point: &[FieldElement]) -> Result<LocalSystem> {
    if it.eval(point)? != point {
        return Err(Error::NotFixed("the iterate does not fix the point".into()));
    }
    let shifted = it.shift_origin(point)?;
    let b = it.nvars();
    let field = it.field().clone();
    LocalSystem::new(
        shifted
            .coords()
            .iter()
            .enumerate()
            .map(|(i, c)| c.sub(&Poly::var(&field, b, i)))
            .collect::<Result<_>>()?,
    )
}

fn lift_map(map: &PolyMap, point: &[FieldElement]) -> Result<PolyMap> {
    let Some(first) = point.first() else {
        return Err(Error::DimensionMismatch {
            expected: map.nvars(),
            got: 0,
        });
    };
    let target = first.field();
    if *map.field() == target {
        return Ok(map.clone());
    }
    map.embed(&Embedding::new(map.field(), &target)?)
}

/// dim K[x]/((f) + m^D).
pub fn truncated_colength(system: &LocalSystem, degree: u32) -> u64 {
    let b = system.nvars();
    let monos = monomials_below(b, degree);
    let index: HashMap<&[u32], usize> = monos.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let gens: Vec<Vec<(Vec<u32>, FieldElement)>> = system
        .generators
        .iter()
        .map(|g| g.terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect())
        .collect();
    let mut echelon = Echelon::new(system.field());
    let mut rank = 0u64;
    let mut prod = vec![0u32; b];
    for m in &monos {
        let dm: u32 = m.iter().sum();
        if dm + 1 >= degree {
            // every term of m·f has degree ≥ D
            continue;
        }
        for g in &gens {
            let mut row = BTreeMap::new();
            for (e, c) in g {
                let mut total = 0;
                for k in 0..b {
                    prod[k] = m[k] + e[k];
                    total += prod[k];
                }
                if total < degree {
                    row.insert(index[prod.as_slice()], c.clone());
                }
            }
            if echelon.insert(row) {
                rank += 1;
            }
        }
    }
    monos.len() as u64 - rank
}

/// Certified colength by Nakayama stabilization of d(D).
pub fn colength(system: &LocalSystem, bound: u64) -> ColengthReport {
    let report = |value, d| ColengthReport {
        value,
        certified_at_degree: d,
        bound_used: bound,
    };
    if system.generators.iter().any(Poly::is_zero) {
        return report(ColengthValue::Degenerate, 1);
    }
    let mut prev = truncated_colength(system, 1);
    let mut d = 1u32;
    loop {
        if prev > bound {
            return report(ColengthValue::Inconclusive, d);
        }
        let next = truncated_colength(system, d + 1);
        if next == prev {
            return report(ColengthValue::Finite(prev), d);
        }
        prev = next;
        d += 1;
    }
}

fn monomials_below(b: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..degree {
        push_monomials(b, total, &mut vec![0; b], 0, &mut out);
    }
    out
}

fn push_monomials(b: usize, remaining: u32, cur: &mut Vec<u32>, pos: usize, out: &mut Vec<Vec<u32>>) {
    if pos == b - 1 {
        cur[pos] = remaining;
        out.push(cur.clone());
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        push_monomials(b, remaining - e, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

/// Row echelon basis built one sparse row at a time. Rational rows are kept
/// as primitive integer vectors.
struct Echelon {
    rational: bool,
    rows: BTreeMap<usize, BTreeMap<usize, FieldElement>>,
}

impl Echelon {
    fn new(field: &Field) -> Self {
        Echelon {
            rational: *field == Field::Rational,
            rows: BTreeMap::new(),
        }
    }

    /// Reduces `row` against the basis; returns whether it was independent.
    fn insert(&mut self, mut row: BTreeMap<usize, FieldElement>) -> bool {
        row.retain(|_, c| !c.is_zero());
        if self.rational {
            make_primitive(&mut row);
        }
        while let Some((&col, lead)) = row.iter().next() {
            let Some(pivot) = self.rows.get(&col) else {
                break;
            };
            let lead = lead.clone();
            let plead = pivot[&col].clone();
            if self.rational {
                // row ← plead·row − lead·pivot
                for c in row.values_mut() {
                    *c = &*c * &plead;
                }
                for (k, v) in pivot {
                    let e = row.entry(*k).or_insert_with(|| lead.field().zero());
                    *e = &*e - &(&lead * v);
                }
                row.retain(|_, c| !c.is_zero());
                make_primitive(&mut row);
            } else {
                let f = lead.checked_div(&plead).expect("nonzero pivot");
                for (k, v) in pivot {
                    let e = row.entry(*k).or_insert_with(|| f.field().zero());
                    *e = &*e - &(&f * v);
                }
                row.retain(|_, c| !c.is_zero());
            }
        }
        match row.keys().next() {
            Some(&col) => {
                self.rows.insert(col, row);
                true
            }
            None => false,
        }
    }
}

fn make_primitive(row: &mut BTreeMap<usize, FieldElement>) {
    let mut den = Integer::from(1);
    for c in row.values() {
        den.lcm_mut(c.as_rational().expect("rational").denom());
    }
    let mut g = Integer::new();
    for c in row.values() {
        let r = c.as_rational().expect("rational");
        let v = r.numer() * Integer::from(&den / r.denom());
        g.gcd_mut(&v);
    }
    if g == 0 {
        return;
    }
    for c in row.values_mut() {
        let r = c.as_rational().expect("rational");
        let v = (r.numer() * Integer::from(&den / r.denom())) / &g;
        *c = FieldElement::Rational(Rational::from(v));
    }
}

/// a_P(n): 0 if φⁿ does not fix P, else the certified colength.
pub fn a_p(map: &PolyMap, n: u64, point: &[FieldElement]) -> Result<u64> {
    let lifted = lift_map(map, point)?;
    if lifted.iterate(n)?.eval(point)? != point {
        return Ok(0);
    }
    let system = local_system(&lifted, n, point)?;
    let report = colength(&system, system.bezout_bound());
    match report.value {
        ColengthValue::Finite(v) => Ok(v),
        ColengthValue::Degenerate => Err(Error::Degenerate(format!(
            "phi^{n} - id has a vanishing coordinate near the point"
        ))),
        ColengthValue::Inconclusive => Err(Error::Inconclusive(format!(
            "colength exceeded the bound {} at degree {}",
            report.bound_used, report.certified_at_degree
        ))),
    }
}

/// a*_P(n) = Σ_{d|n} μ(n/d) a_P(d).
pub fn a_star_p(map: &PolyMap, n: u64, point: &[FieldElement]) -> Result<i64> {
    let mut total = 0i64;
    for d in divisors(n)? {
        let m = mu(n / d);
        if m != 0 {
            total += m * a_p(map, d, point)? as i64;
        }
    }
    Ok(total)
}

/// The minimal period m of P and n/m, when m divides n.
pub fn period_reduction(map: &PolyMap, n: u64, point: &[FieldElement]) -> Result<(u64, u64)> {
    let lifted = lift_map(map, point)?;
    let mut cur = point.to_vec();
    for m in 1..=n {
        cur = lifted.eval(&cur)?;
        if cur == point {
            if !n.is_multiple_of(m) {
                return Err(Error::InvalidArgument(format!(
                    "minimal period {m} does not divide {n}"
                )));
            }
            return Ok((m, n / m));
        }
    }
    Err(Error::NotPeriodic(n))
}
