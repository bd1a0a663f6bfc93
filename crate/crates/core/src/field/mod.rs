//! Exact coefficient fields: ℚ, F_{p^k}, and ℚ(t).

mod galois;
mod ratfunc;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rug::Rational;

use crate::error::{Error, Result};
use crate::qpoly::QPoly;

pub use galois::GaloisField;
pub use ratfunc::RatFunc;

/// Which field a value lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Finite(Arc<GaloisField>),
    /// ℚ(t), the field of the deformation parameter.
    RationalFunction,
}

impl Field {
    pub fn finite(p: u64, degree: u32) -> Result<Field> {
        Ok(Field::Finite(GaloisField::new(p, degree)?))
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, c: i64) -> FieldElement {
        match self {
            Field::Rational => FieldElement::Rational(Rational::from(c)),
            Field::Finite(gf) => FieldElement::Finite(FiniteElement {
                value: gf.from_i64(c),
                field: gf.clone(),
            }),
            Field::RationalFunction => FieldElement::RationalFunction(RatFunc::constant(Rational::from(c))),
        }
    }

    /// Image of a rational number; fails in characteristic p when p divides
    /// the denominator.
    pub fn from_rational(&self, r: &Rational) -> Result<FieldElement> {
        match self {
            Field::Rational => Ok(FieldElement::Rational(r.clone())),
            Field::RationalFunction => Ok(FieldElement::RationalFunction(RatFunc::constant(r.clone()))),
            Field::Finite(gf) => {
                let p = gf.characteristic() as u32;
                let n = u64::from(r.numer().mod_u(p));
                let d = u64::from(r.denom().mod_u(p));
                let inv = gf
                    .inv(d)
                    .ok_or_else(|| Error::InvalidArgument(format!("{r} has no image in characteristic {p}")))?;
                Ok(FieldElement::Finite(FiniteElement {
                    value: gf.mul(n, inv),
                    field: gf.clone(),
                }))
            }
        }
    }

    pub fn finite_element(&self, value: u64) -> Result<FieldElement> {
        match self {
            Field::Finite(gf) if value < gf.size() => Ok(FieldElement::Finite(FiniteElement {
                value,
                field: gf.clone(),
            })),
            _ => Err(Error::FieldMismatch(format!("{value} is not an element of {self}"))),
        }
    }

    /// 0 for characteristic zero.
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Finite(gf) => gf.characteristic(),
            _ => 0,
        }
    }

    pub fn galois(&self) -> Option<&Arc<GaloisField>> {
        match self {
            Field::Finite(gf) => Some(gf),
            _ => None,
        }
    }

    /// The parameter t of ℚ(t).
    pub fn parameter(&self) -> Option<FieldElement> {
        match self {
            Field::RationalFunction => Some(FieldElement::RationalFunction(RatFunc::t())),
            _ => None,
        }
    }

    /// The basis generator u of a proper extension F_p[u]/(m).
    pub fn generator(&self) -> Option<FieldElement> {
        match self {
            Field::Finite(gf) if gf.degree() > 1 => Some(FieldElement::Finite(FiniteElement {
                value: gf.generator(),
                field: gf.clone(),
            })),
            _ => None,
        }
    }

    /// Every element, for finite fields.
    pub fn elements(&self) -> Option<impl Iterator<Item = FieldElement> + '_> {
        let gf = self.galois()?;
        Some((0..gf.size()).map(move |value| {
            FieldElement::Finite(FiniteElement {
                value,
                field: gf.clone(),
            })
        }))
    }

    pub fn descriptor(&self) -> String {
        match self {
            Field::Rational => "Q".into(),
            Field::Finite(gf) => gf.to_string(),
            Field::RationalFunction => "Q(t)".into(),
        }
    }
}

/// Structure map from one field into another: F_{p^j} into F_{p^k} with
/// j | k, or ℚ into ℚ(t).
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    generator_image: u64,
}

impl Embedding {
    pub fn new(source: &Field, target: &Field) -> Result<Self> {
        let generator_image = match (source, target) {
            (a, b) if a == b => 0,
            (Field::Finite(a), Field::Finite(b)) => a.embedding_into(b)?,
            (Field::Rational, Field::RationalFunction) => 0,
            _ => return Err(Error::FieldMismatch(format!("{source} does not embed in {target}"))),
        };
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            generator_image,
        })
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field() != self.source {
            return Err(Error::FieldMismatch(format!("{} is not in {}", x, self.source)));
        }
        if self.source == self.target {
            return Ok(x.clone());
        }
        match (x, &self.target) {
            (FieldElement::Finite(a), Field::Finite(b)) => {
                self.target
                    .finite_element(a.field.embed(a.value, b, self.generator_image))
            }
            (FieldElement::Rational(r), Field::RationalFunction) => self.target.from_rational(r),
            _ => unreachable!("checked in Embedding::new"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

#[derive(Clone, Debug)]
pub struct FiniteElement {
    field: Arc<GaloisField>,
    value: u64,
}

impl FiniteElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn galois(&self) -> &Arc<GaloisField> {
        &self.field
    }

    /// Coefficients in the basis 1, u, …, u^{k-1}.
    pub fn coefficients(&self) -> Vec<u64> {
        self.field.digits(self.value)
    }

    fn with(&self, value: u64) -> FiniteElement {
        FiniteElement {
            field: self.field.clone(),
            value,
        }
    }

    fn check(&self, other: &FiniteElement) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "mixed finite fields {} and {}",
            self.field,
            other.field
        );
    }
}

impl PartialEq for FiniteElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl Eq for FiniteElement {}

impl Hash for FiniteElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.characteristic().hash(state);
        self.field.degree().hash(state);
        self.value.hash(state);
    }
}

impl PartialOrd for FiniteElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.degree(), self.value).cmp(&(other.field.degree(), other.value))
    }
}

/// An exact scalar from one of the supported fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Rational(Rational),
    Finite(FiniteElement),
    RationalFunction(RatFunc),
}

impl FieldElement {
    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rational,
            FieldElement::Finite(x) => Field::Finite(x.field.clone()),
            FieldElement::RationalFunction(_) => Field::RationalFunction,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.cmp0() == Ordering::Equal,
            FieldElement::Finite(x) => x.value == 0,
            FieldElement::RationalFunction(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => *r == 1,
            FieldElement::Finite(x) => x.value == 1,
            FieldElement::RationalFunction(f) => f.is_polynomial() && f.numer() == &QPoly::one(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            FieldElement::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteElement> {
        match self {
            FieldElement::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_ratfunc(&self) -> Option<&RatFunc> {
        match self {
            FieldElement::RationalFunction(f) => Some(f),
            _ => None,
        }
    }

    pub fn inv(&self) -> Option<FieldElement> {
        match self {
            FieldElement::Rational(r) => {
                if r.cmp0() == Ordering::Equal {
                    None
                } else {
                    Some(FieldElement::Rational(r.clone().recip()))
                }
            }
            FieldElement::Finite(x) => x.field.inv(x.value).map(|v| FieldElement::Finite(x.with(v))),
            FieldElement::RationalFunction(f) => f.inv().map(FieldElement::RationalFunction),
        }
    }

    pub fn checked_div(&self, other: &FieldElement) -> Option<FieldElement> {
        Some(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        if let FieldElement::Finite(x) = self {
            return FieldElement::Finite(x.with(x.field.pow(x.value, e)));
        }
        let mut result = self.field().one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn from_i64_like(&self, c: i64) -> FieldElement {
        self.field().from_i64(c)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $rat:expr, $fin:expr, $rf:expr) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: &FieldElement) -> FieldElement {
                match (self, rhs) {
                    (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational($rat(a, b)),
                    (FieldElement::Finite(a), FieldElement::Finite(b)) => {
                        a.check(b);
                        FieldElement::Finite(a.with($fin(&a.field, a.value, b.value)))
                    }
                    (FieldElement::RationalFunction(a), FieldElement::RationalFunction(b)) => {
                        FieldElement::RationalFunction($rf(a, b))
                    }
                    (a, b) => panic!("arithmetic across fields {} and {}", a.field(), b.field()),
                }
            }
        }

        impl $trait for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(
    Add,
    add,
    |a: &Rational, b: &Rational| Rational::from(a + b),
    |f: &Arc<GaloisField>, a, b| f.add(a, b),
    |a: &RatFunc, b: &RatFunc| a.add(b)
);
binop!(
    Sub,
    sub,
    |a: &Rational, b: &Rational| Rational::from(a - b),
    |f: &Arc<GaloisField>, a, b| f.sub(a, b),
    |a: &RatFunc, b: &RatFunc| a.sub(b)
);
binop!(
    Mul,
    mul,
    |a: &Rational, b: &Rational| Rational::from(a * b),
    |f: &Arc<GaloisField>, a, b| f.mul(a, b),
    |a: &RatFunc, b: &RatFunc| a.mul(b)
);

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(Rational::from(-a)),
            FieldElement::Finite(a) => FieldElement::Finite(a.with(a.field.neg(a.value))),
            FieldElement::RationalFunction(a) => FieldElement::RationalFunction(a.neg()),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

impl FieldElement {
    /// True when the printed form needs parentheses as a coefficient.
    pub(crate) fn is_compound(&self) -> bool {
        match self {
            FieldElement::Rational(_) => false,
            FieldElement::Finite(x) => x.coefficients().iter().filter(|&&c| c != 0).count() > 1,
            FieldElement::RationalFunction(f) => {
                !f.is_polynomial()
                    || f.numer()
                        .numerators()
                        .iter()
                        .filter(|c| c.cmp0() != Ordering::Equal)
                        .count()
                        > 1
            }
        }
    }

    /// Sign used when printing a polynomial term: only rationals carry one.
    pub(crate) fn is_negative(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.cmp0() == Ordering::Less,
            FieldElement::RationalFunction(f) => {
                f.is_polynomial() && f.numer().degree() == Some(0) && f.numer().lead() < 0
            }
            FieldElement::Finite(_) => false,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => write!(f, "{r}"),
            FieldElement::RationalFunction(r) => write!(f, "{r}"),
            FieldElement::Finite(x) => {
                if x.field.degree() == 1 {
                    return write!(f, "{}", x.value);
                }
                let digits = x.coefficients();
                let mut first = true;
                for (i, &c) in digits.iter().enumerate().rev() {
                    if c == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match (i, c) {
                        (0, _) => write!(f, "{c}")?,
                        (1, 1) => write!(f, "u")?,
                        (1, _) => write!(f, "{c}*u")?,
                        (_, 1) => write!(f, "u^{i}")?,
                        (_, _) => write!(f, "{c}*u^{i}")?,
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}
