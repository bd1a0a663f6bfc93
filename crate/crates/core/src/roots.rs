//! All complex roots of a univariate polynomial by Aberth iteration on
//! arbitrary-precision floats.

use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Mantissa bits used for `digits` significant decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 64
}

#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::new(Float::new(prec), Float::new(prec))
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        Complex::new(Float::with_val(prec, r), Float::new(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn add(&self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re + &o.re),
            Float::with_val(p, &self.im + &o.im),
        )
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex::new(
            Float::with_val(p, &self.re - &o.re),
            Float::with_val(p, &self.im - &o.im),
        )
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        Complex::new(re, im)
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn recip(&self) -> Option<Complex> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        let p = self.prec();
        Some(Complex::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        ))
    }

    pub fn dist(&self, o: &Complex) -> Float {
        self.sub(o).abs()
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = self.re.to_f64();
        let im = self.im.to_f64();
        if im == 0.0 {
            write!(f, "{re}")
        } else if im < 0.0 {
            write!(f, "{re} - {}i", -im)
        } else {
            write!(f, "{re} + {im}i")
        }
    }
}

/// Value and derivative of the polynomial with coefficients `c` (low to
/// high) at `z`.
pub fn eval_with_derivative(c: &[Complex], z: &Complex) -> (Complex, Complex) {
    let prec = z.prec();
    let mut v = Complex::zero(prec);
    let mut d = Complex::zero(prec);
    for a in c.iter().rev() {
        d = d.mul(z).add(&v);
        v = v.mul(z).add(a);
    }
    (v, d)
}

pub fn eval(c: &[Complex], z: &Complex) -> Complex {
    c.iter().rev().fold(Complex::zero(z.prec()), |v, a| v.mul(z).add(a))
}

/// All roots, with multiplicity, of the rational polynomial `coeffs` (low
/// to high, nonzero leading coefficient), refined until every correction
/// is below 10^-digits.
pub fn aberth(coeffs: &[Rational], digits: u32) -> Result<Vec<Complex>> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 || coeffs[deg].cmp0().is_eq() {
        return Err(Error::InvalidArgument(
            "root finding needs a nonconstant polynomial".into(),
        ));
    }
    let prec = bits_for_digits(digits);
    let lead = Float::with_val(prec, &coeffs[deg]);
    let c: Vec<Complex> = coeffs
        .iter()
        .map(|a| Complex::new(Float::with_val(prec, a) / &lead, Float::new(prec)))
        .collect();
    // Cauchy bound on root size
    let radius = c[..deg]
        .iter()
        .map(|a| a.abs())
        .fold(Float::with_val(prec, 0), |m, a| if a > m { a } else { m })
        + 1u32;
    let pi = Float::with_val(prec, Constant::Pi);
    let mut z: Vec<Complex> = (0..deg)
        .map(|k| {
            let theta = Float::with_val(prec, &pi * 2u32) * k as u32 / deg as u32 + 0.4f64;
            let r = Float::with_val(prec, &radius * (1.0 + 0.1 * (k % 3) as f64)) / 2u32;
            Complex::new(
                Float::with_val(prec, &r * theta.clone().cos()),
                Float::with_val(prec, &r * theta.sin()),
            )
        })
        .collect();
    let tol = Float::with_val(prec, 10u32).pow(-(digits as i32));
    let max_iter = 400 + 40 * deg;
    for _ in 0..max_iter {
        let mut worst = Float::with_val(prec, 0);
        for k in 0..deg {
            let (v, d) = eval_with_derivative(&c, &z[k]);
            if v.norm_sqr().is_zero() {
                continue;
            }
            let Some(newton) = d.recip().map(|r| v.mul(&r)) else {
                continue;
            };
            let mut s = Complex::zero(prec);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    if let Some(r) = z[k].sub(zj).recip() {
                        s = s.add(&r);
                    }
                }
            }
            let denom = Complex::new(Float::with_val(prec, 1), Float::new(prec)).sub(&newton.mul(&s));
            let step = match denom.recip() {
                Some(r) => newton.mul(&r),
                None => newton,
            };
            let size = step.abs();
            if size > worst {
                worst = size;
            }
            z[k] = z[k].sub(&step);
        }
        if worst < tol {
            return Ok(z);
        }
    }
    Err(Error::Inconclusive(format!(
        "root refinement did not reach 1e-{digits}"
    )))
}
