//! Periodic points of polynomial self-maps: exact periodic and dynatomic
//! cycles, local intersection multiplicities, and deformation checks.
//!
//! Over ℚ univariate maps are handled exactly through dense polynomial
//! arithmetic and Galois orbits; over finite fields points are enumerated in
//! extensions; multivariate multiplicities come from a colength computation
//! in the local ring at the point.

pub mod cycle;
pub mod deformation;
pub mod dynatomic;
pub mod error;
pub mod field;
pub mod local;
pub mod map;
pub mod mobius;
mod modular;
pub mod poly;
pub mod qpoly;
pub mod roots;
pub mod univariate;

pub use cycle::{
    build_cycle, build_cycle_at_points, build_dynatomic_cycle, enumerate_periodic, verify_effectivity, AlgebraicPoint,
    Ambient, EffectivityReport, PeriodicPoint, ZeroCycle,
};
pub use deformation::{
    deform, deformed_periodic_poly, degenerate_parameter_locus, degree_conservation_check, flat_limit_clusters,
    generic_simplicity_check, simplicity_at, Cluster, ClusterReport, DeformedMap, ParameterLocus, SimplicityReport,
    SimplicitySample,
};
pub use dynatomic::{
    dynatomic_poly, formal_multiplicity_at, formal_multiplicity_at_infinity, multiplicity_at, multiplicity_at_infinity,
    orbit_profile, periodic_poly, DynatomicResult, OrbitBlock,
};
pub use error::{Error, Result};
pub use field::{Embedding, Field, FieldElement, FiniteElement, GaloisField, RatFunc};
pub use local::{
    a_p, a_star_p, colength, local_system, period_reduction, truncated_colength, ColengthReport, ColengthValue,
    LocalSystem,
};
pub use map::{dehomogenize, Model, PolyMap};
pub use mobius::{divisors, mobius, mobius_combine, DivisorList};
pub use poly::{specialize_parameter, Monomial, Poly};
pub use qpoly::QPoly;
pub use univariate::UniPoly;
