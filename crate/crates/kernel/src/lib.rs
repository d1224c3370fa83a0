//! Exact commutative algebra over prime fields: polynomials, Groebner bases
//! for ideals and submodules of free modules, colengths, syzygies, minimal
//! free resolutions, and finite-dimensional linear algebra for modules of
//! finite length.

pub mod error;
pub mod field;
pub mod finite;
pub mod groebner;
pub mod linalg;
pub mod ideal;
pub mod module;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod resolution;
pub mod ring;

pub use error::KernelError;
pub use ideal::{Colength, Ideal};
pub use finite::{
    intersect_finite, FiniteModule, Homology, LinearMap, ModuleQuotient, QuotientAlgebra, SparseVec,
};
pub use groebner::{groebner_basis, normal_form, PolyReducer};
pub use module::{lift_polynomial, subquotient_length, FreeElement, Submodule};
pub use monomial::Monomial;
pub use poly::Polynomial;
pub use resolution::{resolve_cokernel, resolve_quotient, BettiTable};
pub use ring::{MonomialOrder, PolyRing, RingRef};
