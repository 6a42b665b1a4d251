//! Euclidean distance degrees of projective varieties.
//!
//! Two independent counting engines are provided: an exact one built on
//! Gröbner bases over a prime field ([`ed`]) and a numerical one built on
//! total-degree homotopy continuation ([`homotopy`]). Around them sit the
//! supporting pieces: polynomial arithmetic ([`poly`]), global and local
//! standard bases ([`groebner`]), Newton polytopes and mixed volumes
//! ([`polytope`]), and the topological defect assemblers ([`defect`]).

pub mod defect;
pub mod ed;
pub mod error;
pub mod field;
pub mod groebner;
pub mod homotopy;
pub mod poly;
pub mod polytope;
pub mod seed;

pub use error::{Error, Result};
pub use field::{
    ComplexDouble, Field, FieldKind, Gaussian, GaussianRationals, PrimeField, Rationals,
    DEFAULT_PRIME, SECONDARY_PRIME,
};
pub use poly::{Monomial, MonomialOrder, Polynomial, Ring};
