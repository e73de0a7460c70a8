//! Exact computation of GKM-style presentations of equivariant K-theory for
//! smooth projective spherical varieties.

pub mod charlat;
pub mod cli;
pub mod error;
pub mod fan;
pub mod gkm;
pub mod grr;
pub mod linalg;
pub mod rankone;
pub mod report;
pub mod rootdata;
pub mod toric;
pub mod wonderful;
pub mod scalar;
pub mod schubert;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use charlat::{Character, CharacterLattice, LaurentPoly};
pub use error::{Error, Result};

/// Integer Laurent polynomials, the ring `Z[M]`.
pub type IntPoly = LaurentPoly<BigInt>;
/// Rational Laurent polynomials.
pub type RatPoly = LaurentPoly<BigRational>;
