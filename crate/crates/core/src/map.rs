//! Polynomial self-maps of affine space and homogeneous maps of ℙ¹.

use std::fmt;

use rug::Rational;

use crate::error::{Error, Result};
use crate::field::{Embedding, Field, FieldElement};
use crate::poly::{specialize_parameter, Poly};
use crate::univariate::UniPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Affine,
    /// A pair of binary forms [F(X, Y) : G(X, Y)].
    P1,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Affine => "affine",
            Model::P1 => "P1",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMap {
    model: Model,
    coords: Vec<Poly>,
}

impl PolyMap {
    /// A self-map of 𝔸ᵇ given by b polynomials in b variables.
    pub fn affine(coords: Vec<Poly>) -> Result<Self> {
        let Some(first) = coords.first() else {
            return Err(Error::InvalidArgument("a map needs at least one coordinate".into()));
        };
        let b = coords.len();
        for c in &coords {
            if c.nvars() != b {
                return Err(Error::DimensionMismatch {
                    expected: b,
                    got: c.nvars(),
                });
            }
            if c.field() != first.field() {
                return Err(Error::FieldMismatch(format!("{} vs {}", c.field(), first.field())));
            }
        }
        Ok(PolyMap {
            model: Model::Affine,
            coords,
        })
    }

    pub fn univariate(p: Poly) -> Result<Self> {
        Self::affine(vec![p])
    }

    /// A morphism of ℙ¹: equal-degree forms without a common zero.
    pub fn projective(f: Poly, g: Poly) -> Result<Self> {
        for h in [&f, &g] {
            if h.nvars() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    got: h.nvars(),
                });
            }
            if !h.is_homogeneous() || h.is_zero() {
                return Err(Error::InvalidArgument(format!("{h} is not a nonzero binary form")));
            }
        }
        if f.field() != g.field() {
            return Err(Error::FieldMismatch(format!("{} vs {}", f.field(), g.field())));
        }
        let d = f.total_degree().unwrap_or(0);
        if d == 0 || g.total_degree() != Some(d) {
            return Err(Error::InvalidArgument("both forms must share a positive degree".into()));
        }
        if !forms_coprime(&f, &g)? {
            return Err(Error::Degenerate(
                "the forms share a zero on P1 (vanishing resultant)".into(),
            ));
        }
        Ok(PolyMap {
            model: Model::P1,
            coords: vec![f, g],
        })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn field(&self) -> &Field {
        self.coords[0].field()
    }

    /// Number of variables the coordinates are written in.
    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    pub fn is_univariate(&self) -> bool {
        self.model == Model::Affine && self.coords.len() == 1
    }

    /// Largest total degree among the coordinates.
    pub fn degree(&self) -> u64 {
        self.coords.iter().filter_map(Poly::total_degree).max().unwrap_or(0)
    }

    /// The single coordinate of a univariate map.
    pub fn univariate_poly(&self) -> Result<&Poly> {
        if self.is_univariate() {
            Ok(&self.coords[0])
        } else {
            Err(Error::Unsupported("expected a single-variable affine map".into()))
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        if self.model != inner.model || self.nvars() != inner.nvars() {
            return Err(Error::InvalidArgument("maps on different spaces".into()));
        }
        let coords = self
            .coords
            .iter()
            .map(|c| c.compose(&inner.coords))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap {
            model: self.model,
            coords,
        })
    }

    pub fn iterate(&self, n: u64) -> Result<PolyMap> {
        Ok(self.iterates(n)?.pop().expect("n >= 1"))
    }

    /// `[φ, φ², …, φⁿ]`.
    pub fn iterates(&self, n: u64) -> Result<Vec<PolyMap>> {
        if n == 0 {
            return Err(Error::InvalidArgument("iterate count must be positive".into()));
        }
        let mut out = vec![self.clone()];
        for _ in 1..n {
            let next = self.compose(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.coords.iter().map(|c| c.eval(point)).collect()
    }

    /// ψ(x) = φ(x + P) − P, so that P becomes the origin.
    pub fn shift_origin(&self, point: &[FieldElement]) -> Result<PolyMap> {
        if self.model != Model::Affine {
            return Err(Error::Unsupported("origin shifts need an affine map".into()));
        }
        let b = self.nvars();
        if point.len() != b {
            return Err(Error::DimensionMismatch {
                expected: b,
                got: point.len(),
            });
        }
        let field = self.field().clone();
        for c in point {
            if c.field() != field {
                return Err(Error::FieldMismatch(format!("{c} is not in {field}")));
            }
        }
        let shifted: Vec<Poly> = (0..b)
            .map(|i| Poly::var(&field, b, i).add(&Poly::constant(&field, b, point[i].clone())))
            .collect::<Result<_>>()?;
        let coords = self
            .coords
            .iter()
            .zip(point)
            .map(|(c, p)| c.compose(&shifted)?.sub(&Poly::constant(&field, b, p.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap {
            model: Model::Affine,
            coords,
        })
    }

    pub fn embed(&self, e: &Embedding) -> Result<PolyMap> {
        Ok(PolyMap {
            model: self.model,
            coords: self.coords.iter().map(|c| c.embed(e)).collect::<Result<_>>()?,
        })
    }

    /// Coefficientwise t = t0 for a map over ℚ(t).
    pub fn specialize_parameter(&self, t0: &Rational) -> Result<PolyMap> {
        Ok(PolyMap {
            model: self.model,
            coords: self
                .coords
                .iter()
                .map(|c| specialize_parameter(c, t0))
                .collect::<Result<_>>()?,
        })
    }

    /// The ℙ¹ extension [Y^d φ(X/Y) : Y^d] of a univariate map of degree d ≥ 1.
    pub fn homogenize(&self) -> Result<PolyMap> {
        if self.model == Model::P1 {
            return Ok(self.clone());
        }
        let phi = self.univariate_poly()?;
        let d = phi.total_degree().unwrap_or(0);
        if d == 0 {
            return Err(Error::InvalidArgument("constant maps do not extend to P1".into()));
        }
        let d32 = u32::try_from(d).map_err(|_| Error::ExponentOverflow)?;
        let field = phi.field().clone();
        let f = Poly::from_terms(
            &field,
            2,
            phi.terms().map(|(m, c)| {
                let i = m.exponents()[0];
                (vec![i, d32 - i], c.clone())
            }),
        )?;
        let g = Poly::from_terms(&field, 2, [(vec![0, d32], field.one())])?;
        PolyMap::projective(f, g)
    }

    /// H(X, Y) = Y·F − X·G for a ℙ¹ map: its zeros are the fixed points.
    pub fn fixed_point_form(&self) -> Result<Poly> {
        if self.model != Model::P1 {
            return Err(Error::Unsupported("fixed-point forms need a P1 map".into()));
        }
        let field = self.field().clone();
        let x = Poly::var(&field, 2, 0);
        let y = Poly::var(&field, 2, 1);
        y.mul(&self.coords[0])?.sub(&x.mul(&self.coords[1])?)
    }
}

/// Dehomogenizes a binary form on the chart Y = 1 (`at_infinity` false) or
/// X = 1 (`at_infinity` true).
pub fn dehomogenize(form: &Poly, at_infinity: bool) -> Result<UniPoly> {
    let field = form.field().clone();
    let keep = usize::from(at_infinity);
    let p = Poly::from_terms(
        &field,
        1,
        form.terms().map(|(m, c)| (vec![m.exponents()[keep]], c.clone())),
    )?;
    UniPoly::from_poly(&p)
}

fn forms_coprime(f: &Poly, g: &Poly) -> Result<bool> {
    let (a, b) = (dehomogenize(f, false)?, dehomogenize(g, false)?);
    let d = f.total_degree().unwrap_or(0) as usize;
    // both forms vanish at ∞ = (1 : 0) when both lose their X^d term
    if a.degree() < Some(d) && b.degree() < Some(d) {
        return Ok(false);
    }
    Ok(a.gcd(&b).degree() == Some(0))
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = match self.model {
            Model::P1 => vec!["X".to_string(), "Y".to_string()],
            Model::Affine => Poly::default_names(self.nvars()),
        };
        let parts: Vec<String> = self.coords.iter().map(|c| c.display_with(&names)).collect();
        match self.model {
            Model::Affine => write!(f, "({})", parts.join(", ")),
            Model::P1 => write!(f, "[{}]", parts.join(" : ")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> FieldElement {
        FieldElement::Rational(Rational::from((n, d)))
    }

    pub(crate) fn uni(coeffs: &[(i64, i64)]) -> PolyMap {
        let f = Field::Rational;
        PolyMap::univariate(Poly::from_dense(&f, coeffs.iter().map(|&(n, d)| q(n, d)).collect())).unwrap()
    }

    #[test]
    fn iterate_examples() {
        let phi = uni(&[(-3, 4), (0, 1), (1, 1)]);
        assert_eq!(phi.iterate(2).unwrap().coords()[0].to_string(), "z^4 - 3/2*z^2 - 3/16");
        let sq = uni(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(sq.iterate(3).unwrap().coords()[0].to_string(), "z^8");
        let f = Field::Rational;
        let x = Poly::var(&f, 2, 0);
        let y = Poly::var(&f, 2, 1);
        let m = PolyMap::affine(vec![x.pow(2).unwrap(), y.pow(2).unwrap()]).unwrap();
        assert_eq!(m.iterate(2).unwrap().to_string(), "(x^4, y^4)");
        assert!(phi.iterate(0).is_err());
    }

    #[test]
    fn shift_examples() {
        let phi = uni(&[(-3, 4), (0, 1), (1, 1)]);
        assert_eq!(
            phi.shift_origin(&[q(-1, 2)]).unwrap().coords()[0].to_string(),
            "z^2 - z"
        );
        assert_eq!(
            phi.shift_origin(&[q(3, 2)]).unwrap().coords()[0].to_string(),
            "z^2 + 3*z"
        );
        let sq = uni(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(sq.shift_origin(&[q(0, 1)]).unwrap(), sq);
        assert!(matches!(
            phi.shift_origin(&[q(0, 1), q(0, 1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn projective_validation() {
        let f = Field::Rational;
        let x = Poly::var(&f, 2, 0);
        let y = Poly::var(&f, 2, 1);
        // [X^2 : XY] has the common zero X = 0
        let bad = PolyMap::projective(x.pow(2).unwrap(), x.mul(&y).unwrap());
        assert!(matches!(bad, Err(Error::Degenerate(_))));
        let bad = PolyMap::projective(x.pow(2).unwrap(), y.clone());
        assert!(bad.is_err());
        let h = uni(&[(-3, 4), (0, 1), (1, 1)]).homogenize().unwrap();
        assert_eq!(h.to_string(), "[X^2 - 3/4*Y^2 : Y^2]");
    }

    fn arb_map() -> impl Strategy<Value = PolyMap> {
        prop::collection::vec(-3i64..4, 2..4).prop_map(|mut c| {
            c.push(1);
            uni(&c.iter().map(|&v| (v, 1)).collect::<Vec<_>>())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn iterates_compose(phi in arb_map(), m in 1u64..3, n in 1u64..3) {
            let lhs = phi.iterate(m + n).unwrap();
            let rhs = phi.iterate(m).unwrap().compose(&phi.iterate(n).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn degrees_multiply(phi in arb_map(), n in 1u64..4) {
            let k = phi.degree();
            prop_assert_eq!(phi.iterate(n).unwrap().degree(), k.pow(n as u32));
        }
    }
}
