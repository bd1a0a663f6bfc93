//! Finite fields F_{p^k} = F_p[u]/(m(u)).
//!
//! Elements are encoded as integers `Σ cᵢ pⁱ` over the coefficient vector in
//! the basis 1, u, …, u^{k-1}. The modulus is the smallest monic irreducible
//! polynomial of degree k when coefficient vectors are read as base-p
//! integers, so the same field always gets the same basis.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mobius::factorize;

/// Fields up to this size get exp/log tables for multiplication.
const TABLE_LIMIT: u64 = 1 << 16;

pub struct GaloisField {
    p: u64,
    degree: u32,
    /// Monic, ascending, length `degree + 1`.
    modulus: Vec<u64>,
    size: u64,
    tables: Option<Tables>,
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for GaloisField {}

impl std::hash::Hash for GaloisField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.modulus.hash(state);
    }
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisField")
            .field("p", &self.p)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            write!(f, "F{}", self.p)
        } else {
            write!(f, "F{}^{}", self.p, self.degree)
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && factorize(p).len() == 1 && factorize(p)[0].1 == 1
}

impl GaloisField {
    /// F_{p^k} with the canonical modulus.
    pub fn new(p: u64, degree: u32) -> Result<Arc<Self>> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::InvalidArgument(format!("{p} is not a supported prime")));
        }
        if degree == 0 {
            return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
        }
        let size = p
            .checked_pow(degree)
            .filter(|&s| s < 1 << 62)
            .ok_or_else(|| Error::InvalidArgument(format!("field F{p}^{degree} is too large")))?;
        let modulus = smallest_irreducible(p, degree as usize);
        let mut field = GaloisField {
            p,
            degree,
            modulus,
            size,
            tables: None,
        };
        if size <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(Arc::new(field))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Ascending coefficients of the monic modulus m(u).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn digits(&self, mut x: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            out.push(x % self.p);
            x /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u64]) -> u64 {
        debug_assert!(digits.len() <= self.degree as usize);
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p)
    }

    pub fn from_i64(&self, c: i64) -> u64 {
        c.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.degree == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.degree == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.degree == 1 {
            return a * b % self.p;
        }
        if let Some(t) = &self.tables {
            let n = self.size - 1;
            let l = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % n;
            return t.exp[l as usize] as u64;
        }
        self.mul_poly(a, b)
    }

    fn mul_poly(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        let k = self.degree as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate().take(k) {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - c) * m) % p;
            }
            prod[top] = 0;
        }
        self.from_digits(&prod[..k])
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            let n = self.size - 1;
            let l = (n - t.log[a as usize] as u64) % n;
            return Some(t.exp[l as usize] as u64);
        }
        Some(self.pow(a, self.size - 2))
    }

    /// The generator u of the basis (for k = 1 this is 0·u + … i.e. not meaningful).
    pub fn generator(&self) -> u64 {
        if self.degree == 1 {
            0
        } else {
            self.p
        }
    }

    pub fn frobenius(&self, a: u64, times: u32) -> u64 {
        let mut x = a;
        for _ in 0..times {
            x = self.pow(x, self.p);
        }
        x
    }

    /// Degree over F_p of the smallest subfield containing `a`.
    pub fn element_degree(&self, a: u64) -> u32 {
        let mut x = a;
        for d in 1..=self.degree {
            x = self.pow(x, self.p);
            if x == a && self.degree.is_multiple_of(d) {
                return d;
            }
        }
        self.degree
    }

    fn build_tables(&self) -> Tables {
        let n = self.size - 1;
        let prime_factors: Vec<u64> = factorize(n).into_iter().map(|(r, _)| r).collect();
        let generator = (2..self.size.max(3))
            .chain(std::iter::once(1))
            .find(|&g| g < self.size && prime_factors.iter().all(|&r| self.pow_poly(g, n / r) != 1))
            .unwrap_or(1);
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![0u32; self.size as usize];
        let mut x = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x as u32;
            log[x as usize] = i as u32;
            x = self.mul_poly(x, generator);
        }
        Tables { exp, log }
    }

    fn pow_poly(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_poly(r, a);
            }
            a = self.mul_poly(a, a);
            e >>= 1;
        }
        r
    }

    /// Image of this field's generator u inside `target`: the smallest root
    /// of our modulus there. Fails if this field does not embed.
    pub fn embedding_into(&self, target: &GaloisField) -> Result<u64> {
        if self.p != target.p || !target.degree.is_multiple_of(self.degree) {
            return Err(Error::FieldMismatch(format!("{self} does not embed in {target}")));
        }
        if self.degree == 1 {
            return Ok(0);
        }
        (0..target.size)
            .find(|&a| {
                let v = self
                    .modulus
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| target.add(target.mul(acc, a), c));
                v == 0
            })
            .ok_or_else(|| Error::FieldMismatch(format!("no root of the modulus of {self} in {target}")))
    }

    /// Maps `a` from this field into `target` given the generator image.
    pub fn embed(&self, a: u64, target: &GaloisField, generator_image: u64) -> u64 {
        if self.degree == 1 {
            return a;
        }
        self.digits(a)
            .iter()
            .rev()
            .fold(0, |acc, &c| target.add(target.mul(acc, generator_image), c))
    }
}

/// Irreducibility over F_p by Ben-Or: gcd(f, x^{p^i} - x) = 1 for i ≤ k/2.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    let zp = crate::modular::Zp { p };
    let mut xp = vec![0, 1];
    for _ in 0..k / 2 {
        xp = powmod(&xp, p, f, p);
        let mut h = xp.clone();
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        crate::modular::trim(&mut h);
        if zp.gcd(f, &h).len() != 1 {
            return false;
        }
    }
    true
}

fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let k = m.len() - 1;
    while prod.len() > k {
        let top = prod.len() - 1;
        let c = prod[top];
        if c != 0 {
            for (slot, &mi) in prod[top - k..top].iter_mut().zip(&m[..k]) {
                *slot = (*slot + (p - c) * mi) % p;
            }
        }
        prod.pop();
    }
    crate::modular::trim(&mut prod);
    prod
}

fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(&r, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    r
}

fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    let mut code = 0u64;
    loop {
        let mut f = Vec::with_capacity(k + 1);
        let mut c = code;
        for _ in 0..k {
            f.push(c % p);
            c /= p;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
        code += 1;
    }
}
