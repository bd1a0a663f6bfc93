//! Dense univariate polynomials over any supported field.
//!
//! Rational coefficients go through [`QPoly`] for the heavy operations;
//! other fields use plain Euclidean algorithms.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::{horner, Poly};
use crate::qpoly::QPoly;

/// Ascending coefficients, trimmed so the last one is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn constant(field: &Field, c: FieldElement) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, field.one())
    }

    pub fn x(field: &Field) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// `x - a`.
    pub fn linear(a: &FieldElement) -> Self {
        let field = a.field();
        Self::new(&field, vec![-a, field.one()])
    }

    pub fn from_poly(p: &Poly) -> Result<Self> {
        Ok(Self::new(p.field(), p.to_dense()?))
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_dense(&self.field, self.coeffs.clone())
    }

    pub fn from_qpoly(q: &QPoly) -> Self {
        Self::new(
            &Field::Rational,
            q.coeffs().into_iter().map(FieldElement::Rational).collect(),
        )
    }

    pub fn to_qpoly(&self) -> Option<QPoly> {
        let rs = self
            .coeffs
            .iter()
            .map(|c| c.as_rational().cloned())
            .collect::<Option<Vec<_>>>()?;
        Some(QPoly::from_rationals(rs))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> FieldElement {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    fn is_rational(&self) -> bool {
        self.field == Field::Rational
    }

    fn q(&self) -> QPoly {
        self.to_qpoly().expect("rational coefficients")
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Self::new(&self.field, c)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        if self.is_rational() {
            return Self::from_qpoly(&self.q().mul(&other.q()));
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(&self.field, out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        horner(&self.coeffs, x, &self.field)
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        if self.is_rational() {
            return Self::from_qpoly(&self.q().compose(&inner.q()));
        }
        let mut acc = Self::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(&self.field, c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a * &self.field.from_i64(i as i64))
            .collect();
        Self::new(&self.field, c)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().expect("nonzero lead");
        self.scale(&inv)
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            let (q, r) = self.q().div_rem(&divisor.q())?;
            return Ok((Self::from_qpoly(&q), Self::from_qpoly(&r)));
        }
        let dn = divisor.deg0();
        let inv = divisor.lead().inv().expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dn {
            return Ok((Self::zero(&self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dn];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dn] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * d);
            }
            quot[i] = c;
        }
        rem.truncate(dn);
        Ok((Self::new(&self.field, quot), Self::new(&self.field, rem)))
    }

    /// Quotient if `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &Self) -> Result<Option<Self>> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(self.q().exact_div(&divisor.q())?.map(|q| Self::from_qpoly(&q)));
        }
        let (q, r) = self.div_rem(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Monic gcd; zero only if both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_rational() {
            return Self::from_qpoly(&self.q().gcd(&other.q()));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of `a` as a root.
    pub fn order_at(&self, a: &FieldElement) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::Degenerate("order of vanishing of the zero polynomial".into()));
        }
        if a.field() != self.field {
            return Err(Error::FieldMismatch(format!(
                "point in {} for a polynomial over {}",
                a.field(),
                self.field
            )));
        }
        if let (true, Some(r)) = (self.is_rational(), a.as_rational()) {
            return self.q().order_at(r);
        }
        let mut cur = self.coeffs.clone();
        let mut k = 0;
        loop {
            // synthetic division by (x - a)
            let mut carry = self.field.zero();
            let mut quot = vec![self.field.zero(); cur.len().saturating_sub(1)];
            for i in (0..cur.len()).rev() {
                let v = &cur[i] + &(&carry * a);
                if i == 0 {
                    carry = v;
                } else {
                    quot[i - 1] = v.clone();
                    carry = v;
                }
            }
            if !carry.is_zero() {
                return Ok(k);
            }
            k += 1;
            cur = quot;
        }
    }

    /// Pairwise coprime monic squarefree factors with their multiplicities,
    /// ascending by multiplicity, and the leading constant.
    pub fn squarefree_decomposition(&self) -> Result<(FieldElement, Vec<(Self, u32)>)> {
        if self.is_zero() {
            return Err(Error::InvalidArgument(
                "squarefree decomposition of the zero polynomial".into(),
            ));
        }
        if self.is_rational() {
            let d = self.q().squarefree_decomposition()?;
            return Ok((
                FieldElement::Rational(d.constant),
                d.factors.iter().map(|(g, m)| (Self::from_qpoly(g), *m)).collect(),
            ));
        }
        let mut factors = self.monic().sqf_monic();
        factors.sort_by_key(|(_, m)| *m);
        Ok((self.lead(), factors))
    }

    fn sqf_monic(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.deg0() == 0 {
            return out;
        }
        let mut c = self.gcd(&self.derivative());
        let mut w = self.exact_div(&c).unwrap().expect("gcd divides");
        let mut i = 1;
        while w.deg0() > 0 {
            let y = w.gcd(&c);
            let fac = w.exact_div(&y).unwrap().expect("gcd divides");
            if fac.deg0() > 0 {
                out.push((fac, i));
            }
            i += 1;
            c = c.exact_div(&y).unwrap().expect("gcd divides");
            w = y;
        }
        if c.deg0() > 0 {
            let p = self.field.characteristic() as u32;
            for (g, m) in c.pth_root().sqf_monic() {
                out.push((g, m * p));
            }
        }
        out
    }

    /// For a polynomial in x^p over a perfect field of characteristic p.
    fn pth_root(&self) -> Self {
        let p = self.field.characteristic() as usize;
        let g = self.field.galois().expect("positive characteristic").clone();
        let k = g.degree();
        let c = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|a| {
                let v = a.as_finite().expect("finite").value();
                self.field.finite_element(g.frobenius(v, k - 1)).unwrap()
            })
            .collect();
        Self::new(&self.field, c)
    }

    /// Squarefree part: product of the distinct monic factors.
    pub fn squarefree_part(&self) -> Result<Self> {
        let (_, fs) = self.squarefree_decomposition()?;
        Ok(fs.iter().fold(Self::one(&self.field), |acc, (g, _)| acc.mul(g)))
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).deg0() == 0
    }

    /// Res(self, other) by the Euclidean recurrence.
    pub fn resultant(&self, other: &Self) -> FieldElement {
        if self.is_zero() || other.is_zero() {
            return self.field.zero();
        }
        let (m, n) = (self.deg0(), other.deg0());
        if n == 0 {
            return other.lead().pow(m as u64);
        }
        if m == 0 {
            return self.lead().pow(n as u64);
        }
        if m < n {
            let r = other.resultant(self);
            return if (m * n) % 2 == 1 { -r } else { r };
        }
        let r = self.div_rem(other).expect("nonzero").1;
        if r.is_zero() {
            return self.field.zero();
        }
        let k = r.deg0();
        let mut res = other.lead().pow((m - k) as u64) * other.resultant(&r);
        if (m * n) % 2 == 1 {
            res = -res;
        }
        res
    }

    /// (-1)^{m(m-1)/2} Res(f, f') / lc(f).
    pub fn discriminant(&self) -> Result<FieldElement> {
        let m = match self.degree() {
            None | Some(0) => return Err(Error::InvalidArgument("discriminant needs positive degree".into())),
            Some(m) => m,
        };
        let r = self.resultant(&self.derivative());
        let r = r.checked_div(&self.lead()).expect("nonzero lead");
        Ok(if (m * (m - 1) / 2) % 2 == 1 { -r } else { r })
    }

    /// Degrees (over the coefficient field) of the irreducible factors of a
    /// polynomial over a finite field, by distinct-degree factorization.
    pub fn irreducible_factor_degrees(&self) -> Result<Vec<u32>> {
        let g = self
            .field
            .galois()
            .ok_or_else(|| Error::Unsupported("distinct-degree factorization needs a finite field".into()))?
            .clone();
        let q = rug::Integer::from(g.size());
        let mut f = self.squarefree_part()?;
        let x = Self::x(&self.field);
        let mut w = x.clone();
        let mut degrees = Vec::new();
        let mut i = 1u32;
        while f.deg0() >= 2 * i as usize {
            w = w.powmod_q(&q, &f)?;
            let h = f.gcd(&w.sub(&x));
            if h.deg0() > 0 {
                for _ in 0..h.deg0() / i as usize {
                    degrees.push(i);
                }
                f = f.exact_div(&h)?.expect("gcd divides");
                w = w.div_rem(&f)?.1;
            }
            i += 1;
        }
        if f.deg0() > 0 {
            degrees.push(f.deg0() as u32);
        }
        degrees.sort_unstable();
        Ok(degrees)
    }

    fn powmod_q(&self, q: &rug::Integer, modulus: &Self) -> Result<Self> {
        let mut result = Self::one(&self.field);
        let base = self.div_rem(modulus)?.1;
        for i in (0..q.significant_bits()).rev() {
            result = result.mul(&result).div_rem(modulus)?.1;
            if q.get_bit(i) {
                result = result.mul(&base).div_rem(modulus)?.1;
            }
        }
        Ok(result)
    }

    pub fn to_string_with(&self, var: &str) -> String {
        self.to_poly().display_with(&[var.to_string()])
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("z"))
    }
}
