//! Rational functions in one parameter t over ℚ.

use std::cmp::Ordering;
use std::fmt;

use rug::Rational;

use crate::error::{Error, Result};
use crate::qpoly::QPoly;

/// `num / den` with coprime parts and a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("rational function with zero denominator".into()));
        }
        let mut r = RatFunc { num, den };
        r.reduce();
        Ok(r)
    }

    pub fn from_poly(num: QPoly) -> Self {
        RatFunc { num, den: QPoly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(QPoly::constant(c))
    }

    /// The parameter t itself.
    pub fn t() -> Self {
        Self::from_poly(QPoly::x())
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = QPoly::one();
            return;
        }
        if self.den.degree() != Some(0) {
            let g = self.num.gcd(&self.den);
            if g.degree() != Some(0) {
                self.num = self.num.exact_div(&g).unwrap().unwrap();
                self.den = self.den.exact_div(&g).unwrap().unwrap();
            }
        }
        let lead = self.den.lead();
        if lead != 1 {
            let inv = Rational::from(1) / lead;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_polynomial() && other.is_polynomial() {
            return Self::from_poly(self.num.add(&other.num));
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(num, self.den.mul(&other.den)).unwrap()
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_polynomial() && other.is_polynomial() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::new(self.den.clone(), self.num.clone()).unwrap())
    }

    /// Value at t = t0; a vanishing denominator is a pole.
    pub fn eval(&self, t0: &Rational) -> Result<Rational> {
        let d = self.den.eval(t0);
        if d == 0 {
            return Err(Error::Pole(t0.to_string()));
        }
        Ok(self.num.eval(t0) / d)
    }

    /// Degree in t of a polynomial value; `None` for zero or non-polynomials.
    pub fn t_degree(&self) -> Option<usize> {
        if self.is_polynomial() {
            self.num.degree()
        } else {
            None
        }
    }
}

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatFunc {
    fn cmp(&self, other: &Self) -> Ordering {
        self.den.cmp(&other.den).then_with(|| self.num.cmp(&other.num))
    }
}

pub(crate) fn fmt_tpoly(p: &QPoly) -> String {
    p.to_string_with("t")
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            let c = self.den.lead();
            let num = if c == 1 {
                self.num.clone()
            } else {
                self.num.scale(&(Rational::from(1) / c))
            };
            write!(f, "{}", fmt_tpoly(&num))
        } else {
            write!(f, "({})/({})", fmt_tpoly(&self.num), fmt_tpoly(&self.den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn arithmetic_reduces() {
        let t = RatFunc::t();
        let one = RatFunc::constant(q(1, 1));
        let tm1 = t.sub(&one);
        // (t^2 - 1)/(t - 1) = t + 1
        let f = RatFunc::new(t.mul(&t).sub(&one).numer().clone(), tm1.numer().clone()).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f, t.add(&one));
        let g = one.mul(&tm1.inv().unwrap());
        assert_eq!(g.eval(&q(3, 1)).unwrap(), q(1, 2));
        assert!(matches!(g.eval(&q(1, 1)), Err(Error::Pole(_))));
        assert_eq!(g.mul(&tm1), one);
        assert_eq!(g.to_string(), "(1)/(t - 1)");
    }
}
