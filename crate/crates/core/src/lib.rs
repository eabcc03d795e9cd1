//! Exact direct images of split vector bundles under superelliptic Belyi
//! covers `y^N = x^a (x-1)^b`, their parabolic structures, and descent of
//! the source bundle to a number field.
//!
//! All arithmetic is exact. The algebraic layer ([`field`]) is generic over
//! the [`Scalar`] trait; the geometric layer works over the coefficient tower
//! [`FieldElem`] of `K = F(t)(u)`.

pub mod acceptance;
pub mod curve;
pub mod descent;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod pushpar;
pub mod rr;
pub mod series;
pub mod stats;

pub use error::{Error, Result};
pub use field::factor::Nf;
pub use field::tower::{FieldElem, FieldTower, Ft};
pub use field::{AlgExt, Matrix, Poly, Rat, RatFunc, Scalar};
