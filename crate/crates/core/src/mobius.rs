//! Möbius function and divisor enumeration.

use crate::error::{Error, Result};

/// Sorted positive divisors of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorList {
    n: u64,
    divisors: Vec<u64>,
}

impl DivisorList {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.divisors
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.divisors.iter().copied()
    }

    /// Proper divisors, i.e. every divisor except `n` itself.
    pub fn proper(&self) -> &[u64] {
        &self.divisors[..self.divisors.len() - 1]
    }
}

impl IntoIterator for DivisorList {
    type Item = u64;
    type IntoIter = std::vec::IntoIter<u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.divisors.into_iter()
    }
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The Möbius function μ(n).
pub fn mobius(n: i64) -> Result<i8> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("mobius is defined for n >= 1, got {n}")));
    }
    let factors = factorize(n as u64);
    if factors.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if factors.len().is_multiple_of(2) { 1 } else { -1 })
}

/// μ(n) for an argument already known to be positive.
pub(crate) fn mu(n: u64) -> i64 {
    debug_assert!(n >= 1);
    mobius(n as i64).map(i64::from).unwrap_or(0)
}

pub fn divisors(n: u64) -> Result<DivisorList> {
    if n == 0 {
        return Err(Error::InvalidArgument("divisors of 0 are undefined".into()));
    }
    let mut divisors = vec![1u64];
    for (p, e) in factorize(n) {
        let current = divisors.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..current {
                divisors.push(divisors[i] * pk);
            }
        }
    }
    divisors.sort_unstable();
    Ok(DivisorList { n, divisors })
}

/// Σ_{d | n} μ(n/d)·f(d), the Möbius inversion of `f` at `n`.
pub fn mobius_combine<F>(n: u64, mut f: F) -> Result<i64>
where
    F: FnMut(u64) -> Result<i64>,
{
    let mut total = 0i64;
    for d in divisors(n)? {
        let m = mu(n / d);
        if m != 0 {
            total += m * f(d)?;
        }
    }
    Ok(total)
}
