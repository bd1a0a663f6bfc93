//! Sparse multivariate polynomials over any supported field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldElement};
use crate::qpoly::QPoly;
use rug::Rational;

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically with the first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

/// A polynomial in `nvars` variables with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl Poly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        Poly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(field: &Field, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    /// The coordinate function x_i.
    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial(e), field.one());
        p
    }

    pub fn from_terms<I>(field: &Field, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, FieldElement)>,
    {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            if c.field() != *field {
                return Err(Error::FieldMismatch(format!(
                    "coefficient in {} for a polynomial over {field}",
                    c.field()
                )));
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn coefficient(&self, exponents: &[u32]) -> FieldElement {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coefficient(&vec![0; self.nvars])
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().next_back()
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        let mut out = Poly::zero(&self.field, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field, self.nvars));
        }
        if self.nvars == 1 {
            return self.mul_univariate(other);
        }
        let mut out = Poly::zero(&self.field, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.checked_mul(mb)?, ca * cb);
            }
        }
        Ok(out)
    }

    fn mul_univariate(&self, other: &Poly) -> Result<Poly> {
        let top = self.total_degree().unwrap_or(0) + other.total_degree().unwrap_or(0);
        if top > u64::from(u32::MAX) {
            return Err(Error::ExponentOverflow);
        }
        if self.field == Field::Rational {
            return Ok(Poly::from_qpoly(&self.to_qpoly()?.mul(&other.to_qpoly()?)));
        }
        let a = self.to_dense()?;
        let b = other.to_dense()?;
        let zero = self.field.zero();
        let mut out = vec![zero; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
        }
        Ok(Poly::from_dense(&self.field, out))
    }

    pub fn pow(&self, mut e: u32) -> Result<Poly> {
        let mut result = Poly::one(&self.field, self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.0.clone();
            m2[var] -= 1;
            out.add_term(Monomial(m2), c * &self.field.from_i64(i64::from(e)));
        }
        out
    }

    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        if self.nvars == 1 {
            return Ok(horner(&self.to_dense()?, &point[0], &self.field));
        }
        let mut powers: Vec<Vec<FieldElement>> = Vec::with_capacity(self.nvars);
        for (i, x) in point.iter().enumerate() {
            let top = self.degree_in(i).unwrap_or(0) as usize;
            let mut row = vec![self.field.one()];
            for k in 1..=top {
                let next = &row[k - 1] * x;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitutes `subs[i]` for variable i. The result lives in the ring of
    /// the substitutes.
    pub fn compose(&self, subs: &[Poly]) -> Result<Poly> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: subs.len(),
            });
        }
        let Some(first) = subs.first() else {
            return Ok(self.clone());
        };
        let (field, nvars) = (first.field.clone(), first.nvars);
        for s in subs {
            if s.field != field || s.nvars != nvars {
                return Err(Error::FieldMismatch("substitutes must share a ring".into()));
            }
        }
        if field != self.field {
            return Err(Error::FieldMismatch(format!(
                "cannot substitute over {field} into a polynomial over {}",
                self.field
            )));
        }
        if self.nvars == 1 {
            if field == Field::Rational && nvars == 1 {
                return Ok(Poly::from_qpoly(&self.to_qpoly()?.compose(&subs[0].to_qpoly()?)));
            }
            let coeffs = self.to_dense()?;
            let mut acc = Poly::zero(&field, nvars);
            for c in coeffs.iter().rev() {
                acc = acc.mul(&subs[0])?.add(&Poly::constant(&field, nvars, c.clone()))?;
            }
            return Ok(acc);
        }
        let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(self.nvars);
        for (i, s) in subs.iter().enumerate() {
            let top = self.degree_in(i).unwrap_or(0) as usize;
            let mut row = vec![Poly::one(&field, nvars)];
            for k in 1..=top {
                let next = row[k - 1].mul(s)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = Poly::zero(&field, nvars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&field, nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize])?;
                }
            }
            for (tm, tc) in t.terms {
                acc.add_term(tm, tc);
            }
        }
        Ok(acc)
    }

    /// Applies `f` to every coefficient, landing in `field`.
    pub fn map_coefficients<F>(&self, field: &Field, mut f: F) -> Result<Poly>
    where
        F: FnMut(&FieldElement) -> Result<FieldElement>,
    {
        let mut out = Poly::zero(field, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn embed(&self, e: &Embedding) -> Result<Poly> {
        self.map_coefficients(e.target(), |c| e.apply(c))
    }

    /// Dense ascending coefficients of a univariate polynomial.
    pub fn to_dense(&self) -> Result<Vec<FieldElement>> {
        if self.nvars != 1 {
            return Err(Error::Unsupported(format!(
                "dense form needs a univariate polynomial, got {} variables",
                self.nvars
            )));
        }
        let len = self.total_degree().map_or(0, |d| d as usize + 1);
        let mut out = vec![self.field.zero(); len];
        for (m, c) in &self.terms {
            out[m.0[0] as usize] = c.clone();
        }
        Ok(out)
    }

    pub fn from_dense(field: &Field, coeffs: Vec<FieldElement>) -> Poly {
        let mut p = Poly::zero(field, 1);
        for (i, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(Monomial(vec![i as u32]), c);
            }
        }
        p
    }

    pub fn to_qpoly(&self) -> Result<QPoly> {
        if self.field != Field::Rational {
            return Err(Error::FieldMismatch(format!("expected Q, got {}", self.field)));
        }
        let dense = self.to_dense()?;
        Ok(QPoly::from_rationals(
            dense
                .into_iter()
                .map(|c| match c {
                    FieldElement::Rational(r) => r,
                    _ => unreachable!(),
                })
                .collect(),
        ))
    }

    pub fn from_qpoly(q: &QPoly) -> Poly {
        Poly::from_dense(
            &Field::Rational,
            q.coeffs().into_iter().map(FieldElement::Rational).collect(),
        )
    }

    /// Prints with the given variable names in descending graded-lex order.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = monomial_string(m, names);
            if mono.is_empty() {
                out.push_str(&coefficient_string(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&coefficient_string(&abs));
                    out.push('*');
                }
                out.push_str(&mono);
            }
        }
        out
    }

    pub fn default_names(nvars: usize) -> Vec<String> {
        match nvars {
            1 => vec!["z".into()],
            2 => vec!["x".into(), "y".into()],
            3 => vec!["x".into(), "y".into(), "w".into()],
            n => (1..=n).map(|i| format!("x{i}")).collect(),
        }
    }
}

/// Evaluates every ℚ(t) coefficient at t = t0.
pub fn specialize_parameter(f: &Poly, t0: &Rational) -> Result<Poly> {
    if *f.field() != Field::RationalFunction {
        return Err(Error::FieldMismatch(format!("expected Q(t), got {}", f.field())));
    }
    f.map_coefficients(&Field::Rational, |c| {
        let r = c.as_ratfunc().expect("Q(t) coefficient");
        Ok(FieldElement::Rational(r.eval(t0)?))
    })
}

fn coefficient_string(c: &FieldElement) -> String {
    if c.is_compound() {
        format!("({c})")
    } else {
        c.to_string()
    }
}

fn monomial_string(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{e}", names[i])),
        }
    }
    parts.join("*")
}

pub(crate) fn horner(coeffs: &[FieldElement], x: &FieldElement, field: &Field) -> FieldElement {
    let mut acc = field.zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Poly::default_names(self.nvars)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> FieldElement {
        FieldElement::Rational(Rational::from((n, d)))
    }

    fn qpoly2(terms: &[((u32, u32), i64)]) -> Poly {
        Poly::from_terms(
            &Field::Rational,
            2,
            terms.iter().map(|&((a, b), c)| (vec![a, b], q(c, 1))),
        )
        .unwrap()
    }

    #[test]
    fn printing_is_canonical() {
        let p = qpoly2(&[((2, 0), 1), ((0, 1), -3), ((1, 1), 2), ((0, 0), 1)]);
        assert_eq!(p.to_string(), "x^2 + 2*x*y - 3*y + 1");
        let u = Poly::from_terms(&Field::Rational, 1, [(vec![2], q(1, 1)), (vec![0], q(-3, 4))]).unwrap();
        assert_eq!(u.to_string(), "z^2 - 3/4");
        let f = Field::finite(5, 2).unwrap();
        let g = f.generator().unwrap();
        let c = &g + &f.one();
        let p = Poly::from_terms(&f, 1, [(vec![1], c), (vec![0], f.from_i64(3))]).unwrap();
        assert_eq!(p.to_string(), "(u + 1)*z + 3");
    }

    #[test]
    fn eval_and_compose() {
        let p = qpoly2(&[((2, 0), 1), ((0, 1), 1)]);
        assert_eq!(p.eval(&[q(2, 1), q(3, 1)]).unwrap(), q(7, 1));
        let x = Poly::var(&Field::Rational, 2, 0);
        let y = Poly::var(&Field::Rational, 2, 1);
        // p(y, x) = y^2 + x
        let swapped = p.compose(&[y.clone(), x.clone()]).unwrap();
        assert_eq!(swapped, qpoly2(&[((0, 2), 1), ((1, 0), 1)]));
        assert!(p.eval(&[q(1, 1)]).is_err());
    }

    #[test]
    fn mismatches_are_errors() {
        let a = Poly::var(&Field::Rational, 2, 0);
        let b = Poly::var(&Field::Rational, 1, 0);
        assert!(a.add(&b).is_err());
        let c = Poly::var(&Field::finite(3, 1).unwrap(), 2, 0);
        assert!(a.mul(&c).is_err());
    }

    #[test]
    fn exponent_overflow_is_reported() {
        let big = Poly::from_terms(&Field::Rational, 2, [(vec![u32::MAX, 0], q(1, 1))]).unwrap();
        let x = Poly::var(&Field::Rational, 2, 0);
        assert_eq!(big.mul(&x), Err(Error::ExponentOverflow));
    }

    #[test]
    fn specialization() {
        let f = Field::RationalFunction;
        let t = f.parameter().unwrap();
        // x^2 - x - 3/4 + t
        let p = Poly::from_terms(
            &f,
            1,
            [
                (vec![2], f.one()),
                (vec![1], f.from_i64(-1)),
                (vec![0], &t + &f.from_rational(&Rational::from((-3, 4))).unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(
            specialize_parameter(&p, &Rational::new()).unwrap().to_string(),
            "z^2 - z - 3/4"
        );
        assert_eq!(
            specialize_parameter(&p, &Rational::from(1)).unwrap().to_string(),
            "z^2 - z + 1/4"
        );
        let tx = Poly::from_terms(&f, 1, [(vec![1], t.clone())]).unwrap();
        assert!(specialize_parameter(&tx, &Rational::new()).unwrap().is_zero());
        let pole = Poly::constant(&f, 1, t.inv().unwrap());
        assert!(matches!(
            specialize_parameter(&pole, &Rational::new()),
            Err(Error::Pole(_))
        ));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(((0u32..4, 0u32..4), -5i64..5), 0..6)
            .prop_map(|t| qpoly2(&t.iter().map(|&(e, c)| (e, c)).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert!(a.sub(&a).unwrap().is_zero());
        }

        #[test]
        fn eval_is_a_ring_map(a in arb_poly(), b in arb_poly(), x in -5i64..5, y in -5i64..5) {
            let pt = [q(x, 1), q(y, 1)];
            let lhs = a.mul(&b).unwrap().eval(&pt).unwrap();
            let rhs = &a.eval(&pt).unwrap() * &b.eval(&pt).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn finite_field_ring_axioms(a in prop::collection::vec(0i64..7, 1..6), b in prop::collection::vec(0i64..7, 1..6)) {
            let f = Field::finite(7, 1).unwrap();
            let pa = Poly::from_dense(&f, a.iter().map(|&c| f.from_i64(c)).collect());
            let pb = Poly::from_dense(&f, b.iter().map(|&c| f.from_i64(c)).collect());
            prop_assert_eq!(pa.mul(&pb).unwrap(), pb.mul(&pa).unwrap());
            let x = f.from_i64(3);
            prop_assert_eq!(pa.mul(&pb).unwrap().eval(std::slice::from_ref(&x)).unwrap(), &pa.eval(std::slice::from_ref(&x)).unwrap() * &pb.eval(&[x]).unwrap());
        }
    }
}
