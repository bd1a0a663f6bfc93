//! Word-size prime field arithmetic used by the modular gcd.

use rug::Integer;

/// Primes just above 2^30, so that products of residues fit in a `u64`.
pub(crate) struct PrimeStream {
    next: Integer,
}

impl PrimeStream {
    pub(crate) fn new() -> Self {
        PrimeStream {
            next: Integer::from(1u64 << 30),
        }
    }
}

impl Iterator for PrimeStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.next.next_prime_mut();
        let p = self.next.to_u64()?;
        if p >= 1 << 31 {
            return None;
        }
        Some(p)
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Zp {
    pub p: u64,
}

impl Zp {
    pub(crate) fn reduce(&self, x: &Integer) -> u64 {
        u64::from(x.mod_u(self.p as u32))
    }

    #[inline]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub(crate) fn pow(&self, mut a: u64, mut e: u64) -> u64 {
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

    pub(crate) fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    pub(crate) fn reduce_poly(&self, coeffs: &[Integer]) -> Vec<u64> {
        let mut out: Vec<u64> = coeffs.iter().map(|c| self.reduce(c)).collect();
        trim(&mut out);
        out
    }

    /// `a mod b` in place; `b` must have a nonzero leading coefficient.
    fn rem_assign(&self, a: &mut Vec<u64>, b: &[u64]) {
        let db = b.len() - 1;
        let inv_lead = self.inv(b[db]);
        while a.len() > db {
            let top = a.len() - 1;
            let q = self.mul(a[top], inv_lead);
            if q != 0 {
                let shift = top - db;
                for (i, &bi) in b.iter().enumerate().take(db) {
                    let t = self.mul(q, bi);
                    a[shift + i] = self.sub(a[shift + i], t);
                }
            }
            a.pop();
            trim(a);
        }
    }

    /// Monic gcd; the zero polynomial is the empty vector.
    pub(crate) fn gcd(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            self.rem_assign(&mut x, &y);
            std::mem::swap(&mut x, &mut y);
        }
        if let Some(&lead) = x.last() {
            let inv = self.inv(lead);
            for c in x.iter_mut() {
                *c = self.mul(*c, inv);
            }
        }
        x
    }
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime_and_increasing() {
        let ps: Vec<u64> = PrimeStream::new().take(5).collect();
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
        for p in ps {
            assert!(p > 1 << 30 && p < 1 << 31);
            assert!((2..50_000u64).all(|d| p % d != 0));
        }
    }

    #[test]
    fn gcd_mod_p() {
        let f = Zp { p: 101 };
        // (x+1)(x+2) and (x+1)(x+3)
        let a = vec![2, 3, 1];
        let b = vec![3, 4, 1];
        assert_eq!(f.gcd(&a, &b), vec![1, 1]);
        assert_eq!(f.gcd(&a, &[]), a);
        assert_eq!(f.inv(7) * 7 % 101, 1);
    }
}
