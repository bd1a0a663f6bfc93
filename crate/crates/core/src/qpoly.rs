//! Dense univariate polynomials over ℚ.
//!
//! Iterates of a degree-k map reach degree k^n with coefficients of many
//! thousands of bits, so this type keeps an integer coefficient vector over
//! a single denominator. Large products go through Kronecker substitution
//! into one GMP multiplication, and gcds are computed modulo word-size primes
//! and then certified by exact trial division over ℤ.

use std::cmp::Ordering;
use std::fmt;

use rug::integer::Order;
use rug::{Complete, Integer, Rational};

use crate::error::{Error, Result};
use crate::modular::{PrimeStream, Zp};

/// Below this length schoolbook multiplication beats packing.
const SCHOOLBOOK_LEN: usize = 12;

/// `Σ num[i]·z^i / den`.
///
/// Invariants: `num` has no trailing zeros, `den > 0`, and the content of
/// `num` is coprime to `den`. The zero polynomial has empty `num` and `den = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    num: Vec<Integer>,
    den: Integer,
}

/// `f = constant · Π factorᵢ^{multᵢ}` with monic, squarefree, pairwise coprime factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSquarefree {
    pub constant: Rational,
    pub factors: Vec<(QPoly, u32)>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly {
            num: Vec::new(),
            den: Integer::from(1),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    /// The identity polynomial `z`.
    pub fn x() -> Self {
        QPoly {
            num: vec![Integer::new(), Integer::from(1)],
            den: Integer::from(1),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_rationals(vec![c])
    }

    /// `z - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::from_rationals(vec![-r.clone(), Rational::from(1)])
    }

    pub fn from_integers(num: Vec<Integer>) -> Self {
        let mut p = QPoly {
            num,
            den: Integer::from(1),
        };
        p.normalize();
        p
    }

    /// Coefficients in ascending degree order.
    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        let mut den = Integer::from(1);
        for c in &coeffs {
            den.lcm_mut(c.denom());
        }
        let num = coeffs
            .into_iter()
            .map(|c| {
                let (n, d) = c.into_numer_denom();
                n * (&den / d)
            })
            .collect();
        let mut p = QPoly { num, den };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.num.last().is_some_and(is0) {
            self.num.pop();
        }
        if self.num.is_empty() {
            self.den = Integer::from(1);
            return;
        }
        if self.den < 0 {
            self.den = -std::mem::take(&mut self.den);
            for c in self.num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        if self.den == 1 {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            g.gcd_mut(c);
            if g == 1 {
                return;
            }
        }
        for c in self.num.iter_mut() {
            c.div_exact_mut(&g);
        }
        self.den.div_exact_mut(&g);
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.num.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        match self.num.get(i) {
            Some(c) => Rational::from((c.clone(), self.den.clone())),
            None => Rational::new(),
        }
    }

    pub fn coeffs(&self) -> Vec<Rational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn lead(&self) -> Rational {
        self.num.len().checked_sub(1).map(|i| self.coeff(i)).unwrap_or_default()
    }

    pub fn numerators(&self) -> &[Integer] {
        &self.num
    }

    pub fn denominator(&self) -> &Integer {
        &self.den
    }

    /// Largest coefficient numerator size in bits.
    pub fn height_bits(&self) -> u32 {
        max_bits(&self.num)
    }

    pub fn neg(&self) -> Self {
        QPoly {
            num: self.num.iter().map(|c| (-c).complete()).collect(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, true)
    }

    fn add_scaled(&self, other: &Self, negate: bool) -> Self {
        let den = self.den.clone().lcm(&other.den);
        let sa = (&den / &self.den).complete();
        let sb = (&den / &other.den).complete();
        let len = self.num.len().max(other.num.len());
        let mut num = Vec::with_capacity(len);
        for i in 0..len {
            let mut c = match self.num.get(i) {
                Some(a) => (a * &sa).complete(),
                None => Integer::new(),
            };
            if let Some(b) = other.num.get(i) {
                if negate {
                    c -= b * &sb;
                } else {
                    c += b * &sb;
                }
            }
            num.push(c);
        }
        let mut p = QPoly { num, den };
        p.normalize();
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = QPoly {
            num: zmul(&self.num, &other.num),
            den: (&self.den * &other.den).complete(),
        };
        p.normalize();
        p
    }

    pub fn square(&self) -> Self {
        let mut p = QPoly {
            num: zsquare(&self.num),
            den: self.den.clone().square(),
        };
        p.normalize();
        p
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = QPoly {
            num: self.num.iter().map(|x| (x * c.numer()).complete()).collect(),
            den: (&self.den * c.denom()).complete(),
        };
        p.normalize();
        p
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        // Horner on integers: Σ num[i] a^i b^(d-i) / (den b^d)
        let (a, b) = (x.numer(), x.denom());
        let Some(d) = self.degree() else {
            return Rational::new();
        };
        let mut acc = self.num[d].clone();
        let mut bpow = Integer::from(1);
        for i in (0..d).rev() {
            bpow *= b;
            acc *= a;
            acc += &self.num[i] * &bpow;
        }
        bpow *= &self.den;
        Rational::from((acc, bpow))
    }

    /// `self(inner)`.
    pub fn compose(&self, inner: &QPoly) -> QPoly {
        let Some(k) = self.degree() else {
            return QPoly::zero();
        };
        // Σ O_j (I/di)^j = (Σ O_j I^j di^(k-j)) / di^k, evaluated by Horner.
        let di = &inner.den;
        let mut acc: Vec<Integer> = vec![self.num[k].clone()];
        let mut dpow = Integer::from(1);
        for j in (0..k).rev() {
            dpow *= di;
            acc = zmul(&acc, &inner.num);
            let add = (&self.num[j] * &dpow).complete();
            if acc.is_empty() {
                acc.push(add);
            } else {
                acc[0] += add;
            }
        }
        let mut p = QPoly {
            num: acc,
            den: (&self.den * &dpow).complete(),
        };
        p.normalize();
        p
    }

    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * Integer::from(i))
            .collect();
        let mut p = QPoly {
            num,
            den: self.den.clone(),
        };
        p.normalize();
        p
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.num.last().unwrap().clone();
        let mut p = QPoly {
            num: self.num.clone(),
            den: lead,
        };
        p.normalize();
        p
    }

    /// Primitive integer coefficient vector with positive leading coefficient.
    pub fn primitive(&self) -> Vec<Integer> {
        zprimitive(&self.num)
    }

    /// `self = content · primitive()`, with the sign carried by the content.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::new();
        }
        let mut g = zcontent(&self.num);
        if self.num.last().unwrap() < &0 {
            g = -g;
        }
        Rational::from((g, self.den.clone()))
    }

    pub fn div_rem(&self, divisor: &QPoly) -> Result<(QPoly, QPoly)> {
        let Some(db) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        let Some(da) = self.degree() else {
            return Ok((QPoly::zero(), QPoly::zero()));
        };
        if da < db {
            return Ok((QPoly::zero(), self.clone()));
        }
        let b = divisor.coeffs();
        let inv_lead = Rational::from(1) / &b[db];
        let mut rem = self.coeffs();
        let mut quo = vec![Rational::new(); da - db + 1];
        for k in (0..=da - db).rev() {
            let q = (&rem[k + db] * &inv_lead).complete();
            if q != 0 {
                for i in 0..=db {
                    rem[k + i] -= (&q * &b[i]).complete();
                }
            }
            quo[k] = q;
        }
        rem.truncate(db);
        Ok((QPoly::from_rationals(quo), QPoly::from_rationals(rem)))
    }

    /// `Some(q)` with `self = divisor · q`, or `None` if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &QPoly) -> Result<Option<QPoly>> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Some(QPoly::zero()));
        }
        let b = divisor.primitive();
        let a = self.primitive();
        let Some(q) = zdiv_exact(&a, &b) else {
            return Ok(None);
        };
        let scale = self.content() / divisor.content();
        Ok(Some(QPoly::from_integers(q).scale(&scale)))
    }

    /// Monic greatest common divisor; zero only if both inputs are zero.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => QPoly::zero(),
            (true, false) => other.monic(),
            (false, true) => self.monic(),
            (false, false) => QPoly::from_integers(zgcd(&self.primitive(), &other.primitive())).monic(),
        }
    }

    /// Yun's algorithm over ℚ.
    pub fn squarefree_decomposition(&self) -> Result<QSquarefree> {
        if self.is_zero() {
            return Err(Error::InvalidArgument(
                "squarefree decomposition of the zero polynomial".into(),
            ));
        }
        let constant = self.lead();
        let f = self.monic();
        let mut factors = Vec::new();
        if f.degree() == Some(0) {
            return Ok(QSquarefree { constant, factors });
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0)?.expect("gcd divides f");
        let mut c = df.exact_div(&a0)?.expect("gcd divides f'");
        let mut d = c.sub(&b.derivative());
        let mut i = 1u32;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                factors.push((a.clone(), i));
            }
            b = b.exact_div(&a)?.expect("gcd divides b");
            c = d.exact_div(&a)?.expect("gcd divides d");
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(QSquarefree { constant, factors })
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Splits a squarefree `g` into pieces whose roots all have the same
    /// multiplicity `j` as roots of `f`. Pieces are monic; multiplicity 0
    /// collects the roots of `g` that are not roots of `f`.
    pub fn split_by_multiplicity(g: &QPoly, f: &QPoly) -> Result<Vec<(QPoly, u32)>> {
        if f.is_zero() {
            return Err(Error::Degenerate(
                "multiplicity in the zero polynomial is infinite".into(),
            ));
        }
        let mut out = Vec::new();
        let mut h = g.monic();
        let mut cur = f.clone();
        let mut j = 0u32;
        loop {
            let common = h.gcd(&cur);
            let piece = h.exact_div(&common)?.expect("gcd divides h");
            if piece.degree().unwrap_or(0) > 0 {
                out.push((piece, j));
            }
            if common.degree().unwrap_or(0) == 0 {
                break;
            }
            cur = cur.exact_div(&common)?.expect("squarefree gcd divides f");
            h = common;
            j += 1;
        }
        Ok(out)
    }

    /// Order of vanishing at the rational point `r`.
    pub fn order_at(&self, r: &Rational) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::Degenerate("order of vanishing of the zero polynomial".into()));
        }
        let lin = vec![-r.numer().clone(), r.denom().clone()];
        let mut a = self.primitive();
        let mut k = 0;
        while let Some(q) = zdiv_exact(&a, &lin) {
            a = q;
            k += 1;
        }
        Ok(k)
    }

    /// All rational roots, or `None` if the constant or leading coefficient
    /// is too large to enumerate divisor candidates.
    pub fn rational_roots(&self, max_bits: u32) -> Option<Vec<Rational>> {
        let mut a = self.primitive();
        if a.is_empty() {
            return None;
        }
        let mut roots = Vec::new();
        let zeros = a.iter().take_while(|c| is0(c)).count();
        if zeros > 0 {
            roots.push(Rational::new());
            a.drain(..zeros);
        }
        if a.len() <= 1 {
            return Some(roots);
        }
        let c0 = a[0].clone().abs();
        let cl = a.last().unwrap().clone().abs();
        if c0.significant_bits() > max_bits || cl.significant_bits() > max_bits {
            return None;
        }
        let num_divs = integer_divisors(c0.to_u64()?);
        let den_divs = integer_divisors(cl.to_u64()?);
        let poly = QPoly::from_integers(a);
        let mut found: Vec<Rational> = Vec::new();
        for q in &den_divs {
            for p in &num_divs {
                for sign in [1i64, -1] {
                    let r = Rational::from((Integer::from(*p) * sign, Integer::from(*q)));
                    if !found.contains(&r) && poly.eval(&r) == 0 {
                        found.push(r);
                    }
                }
            }
        }
        roots.extend(found);
        roots.sort();
        Some(roots)
    }
}

impl Default for QPoly {
    fn default() -> Self {
        QPoly::zero()
    }
}

impl PartialOrd for QPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num
            .len()
            .cmp(&other.num.len())
            .then_with(|| self.coeffs().iter().rev().cmp(other.coeffs().iter().rev()))
    }
}

impl QPoly {
    /// Canonical descending rendering in the variable `var`.
    pub fn to_string_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for i in (0..self.num.len()).rev() {
            let c = self.coeff(i);
            if c == 0 {
                continue;
            }
            let neg = c < 0;
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (i, abs == 1) {
                (0, _) => out.push_str(&abs.to_string()),
                (_, true) => {}
                (_, false) => out.push_str(&format!("{abs}*")),
            }
            match i {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{i}")),
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("z"))
    }
}

fn integer_divisors(n: u64) -> Vec<u64> {
    crate::mobius::divisors(n.max(1))
        .map(|d| d.as_slice().to_vec())
        .unwrap_or_default()
}

#[inline]
pub(crate) fn is0(c: &Integer) -> bool {
    c.cmp0() == Ordering::Equal
}

pub(crate) fn max_bits(v: &[Integer]) -> u32 {
    v.iter().map(|c| c.significant_bits()).max().unwrap_or(0)
}

fn trim_z(v: &mut Vec<Integer>) {
    while v.last().is_some_and(is0) {
        v.pop();
    }
}

pub(crate) fn zcontent(v: &[Integer]) -> Integer {
    let mut g = Integer::new();
    for c in v {
        g.gcd_mut(c);
        if g == 1 {
            break;
        }
    }
    g
}

pub(crate) fn zprimitive(v: &[Integer]) -> Vec<Integer> {
    let mut out = v.to_vec();
    trim_z(&mut out);
    if out.is_empty() {
        return out;
    }
    let mut g = zcontent(&out);
    if out.last().unwrap() < &0 {
        g = -g;
    }
    for c in out.iter_mut() {
        c.div_exact_mut(&g);
    }
    out
}

pub(crate) fn zmul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= SCHOOLBOOK_LEN {
        let mut out = vec![Integer::new(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if is0(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim_z(&mut out);
        return out;
    }
    kronecker(a, Some(b))
}

fn zsquare(a: &[Integer]) -> Vec<Integer> {
    if a.len() <= SCHOOLBOOK_LEN {
        return zmul(a, a);
    }
    kronecker(a, None)
}

/// Multiplies by packing each polynomial into one integer at a limb-aligned
/// slot width wide enough for every product coefficient, then reading the
/// product back as balanced digits.
fn kronecker(a: &[Integer], b: Option<&[Integer]>) -> Vec<Integer> {
    let bb = b.unwrap_or(a);
    let shortest = a.len().min(bb.len()) as u64;
    let bits = max_bits(a) + max_bits(bb) + (64 - shortest.leading_zeros()) + 2;
    let limbs = bits.div_ceil(64) as usize;
    let pa = pack(a, limbs);
    let product = match b {
        Some(b) => pa * pack(b, limbs),
        None => pa.square(),
    };
    let mut out = unpack(&product, limbs, a.len() + bb.len() - 1);
    trim_z(&mut out);
    out
}

fn pack(coeffs: &[Integer], limbs: usize) -> Integer {
    let mut pos = vec![0u64; coeffs.len() * limbs];
    let mut neg = vec![0u64; coeffs.len() * limbs];
    let mut any_neg = false;
    for (i, c) in coeffs.iter().enumerate() {
        let slot = i * limbs..(i + 1) * limbs;
        match c.cmp0() {
            Ordering::Equal => {}
            Ordering::Greater => c.write_digits(&mut pos[slot], Order::Lsf),
            Ordering::Less => {
                any_neg = true;
                c.write_digits(&mut neg[slot], Order::Lsf)
            }
        }
    }
    let p = Integer::from_digits(&pos, Order::Lsf);
    if any_neg {
        p - Integer::from_digits(&neg, Order::Lsf)
    } else {
        p
    }
}

fn unpack(w: &Integer, limbs: usize, count: usize) -> Vec<Integer> {
    let negative = w.cmp0() == Ordering::Less;
    let digits: Vec<u64> = w.to_digits(Order::Lsf);
    let width = (64 * limbs) as u32;
    let full = Integer::from(1) << width;
    let mut carry = false;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let lo = (i * limbs).min(digits.len());
        let hi = ((i + 1) * limbs).min(digits.len());
        let mut v = Integer::from_digits(&digits[lo..hi], Order::Lsf);
        if carry {
            v += 1;
        }
        carry = v.get_bit(width - 1) || v.significant_bits() > width;
        if carry {
            v -= &full;
        }
        if negative {
            v = -v;
        }
        out.push(v);
    }
    out
}

/// Exact division over ℤ. Returns `None` when `b` does not divide `a` with
/// an integral quotient; for primitive `b` this is the same as not dividing
/// over ℚ.
pub(crate) fn zdiv_exact(a: &[Integer], b: &[Integer]) -> Option<Vec<Integer>> {
    let mut b = b.to_vec();
    trim_z(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = a.to_vec();
    trim_z(&mut rem);
    if rem.is_empty() {
        return Some(Vec::new());
    }
    if rem.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let lead = b[db].clone();
    if !modular_divides(&rem, &b) {
        return None;
    }
    let mut quo = vec![Integer::new(); rem.len() - db];
    for k in (0..quo.len()).rev() {
        let top = std::mem::take(&mut rem[k + db]);
        if is0(&top) {
            continue;
        }
        if !top.is_divisible(&lead) {
            return None;
        }
        let q = top.div_exact(&lead);
        for i in 0..db {
            rem[k + i] -= &q * &b[i];
        }
        quo[k] = q;
    }
    if rem[..db].iter().any(|c| !is0(c)) {
        return None;
    }
    Some(quo)
}

/// Necessary condition for exact division, checked modulo one prime.
fn modular_divides(a: &[Integer], b: &[Integer]) -> bool {
    let Some(p) = PrimeStream::new().find(|&p| !b.last().unwrap().is_divisible_u(p as u32)) else {
        return true;
    };
    let zp = Zp { p };
    let mut ra = zp.reduce_poly(a);
    let rb = zp.reduce_poly(b);
    let db = rb.len() - 1;
    let inv = zp.inv(rb[db]);
    while ra.len() > db {
        let top = ra.len() - 1;
        let q = zp.mul(ra[top], inv);
        if q != 0 {
            for i in 0..db {
                let t = zp.mul(q, rb[i]);
                ra[top - db + i] = zp.sub(ra[top - db + i], t);
            }
        }
        ra.pop();
    }
    ra.iter().all(|&c| c == 0)
}

/// Primitive gcd with positive leading coefficient, by the small-primes
/// modular algorithm with exact-division certification.
pub(crate) fn zgcd(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let a = zprimitive(a);
    let b = zprimitive(b);
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    if a.len() == 1 || b.len() == 1 {
        return vec![Integer::from(1)];
    }
    let (la, lb) = (a.last().unwrap(), b.last().unwrap());
    let gamma = la.clone().gcd(lb);
    let mut best_deg = usize::MAX;
    let mut modulus = Integer::from(1);
    let mut residues: Vec<Integer> = Vec::new();
    let mut previous: Option<Vec<Integer>> = None;
    for p in PrimeStream::new() {
        let pu = p as u32;
        if la.is_divisible_u(pu) || lb.is_divisible_u(pu) {
            continue;
        }
        let zp = Zp { p };
        let g = zp.gcd(&zp.reduce_poly(&a), &zp.reduce_poly(&b));
        let d = g.len() - 1;
        if d == 0 {
            return vec![Integer::from(1)];
        }
        match d.cmp(&best_deg) {
            Ordering::Greater => continue,
            Ordering::Less => {
                best_deg = d;
                modulus = Integer::from(1);
                residues = vec![Integer::new(); d + 1];
                previous = None;
            }
            Ordering::Equal => {}
        }
        let gm = zp.reduce(&gamma);
        let image: Vec<u64> = g.iter().map(|&c| zp.mul(c, gm)).collect();
        crt_combine(&mut residues, &mut modulus, &image, p);
        let candidate = zprimitive(&symmetric(&residues, &modulus));
        if previous.as_ref() == Some(&candidate)
            && zdiv_exact(&a, &candidate).is_some()
            && zdiv_exact(&b, &candidate).is_some()
        {
            return candidate;
        }
        previous = Some(candidate);
    }
    unreachable!("ran out of word-size primes in modular gcd")
}

fn crt_combine(residues: &mut [Integer], modulus: &mut Integer, image: &[u64], p: u64) {
    let zp = Zp { p };
    // x ≡ r (mod M), x ≡ s (mod p): x = r + M·((s - r)·M⁻¹ mod p)
    let m_mod_p = zp.reduce(modulus);
    let m_inv = zp.inv(m_mod_p);
    for (r, &s) in residues.iter_mut().zip(image) {
        let r_mod_p = zp.reduce(r);
        let t = zp.mul(zp.sub(s, r_mod_p), m_inv);
        *r += &*modulus * Integer::from(t);
    }
    *modulus *= p;
}

fn symmetric(residues: &[Integer], modulus: &Integer) -> Vec<Integer> {
    let half = (modulus / 2u32).complete();
    residues
        .iter()
        .map(|r| if r > &half { (r - modulus).complete() } else { r.clone() })
        .collect()
}
