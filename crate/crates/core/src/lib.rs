//! Explicit Cremona equivalences between birational embeddings of a
//! parametrized variety, with randomized, re-checkable certificates.
//!
//! The pipeline, bottom-up:
//!
//! - [`field`], [`poly`], [`grammar`], [`linalg`]: exact arithmetic over `F_p` or `Q`;
//! - [`projective`]: rational maps as tuples of forms and randomized map equality;
//! - [`system`]: linear systems on the parameter space;
//! - [`bimonoid`]: hypersurfaces with two points of multiplicity `k - 1`, by interpolation;
//! - [`monoid`]: the Cremona transformation such a hypersurface induces;
//! - [`chain`]: the step-by-step construction and its certificate;
//! - [`obstruction`]: the discrepancy test for divisorial embeddings.

pub mod error;
pub mod field;
pub mod grammar;
pub mod linalg;
pub mod monoid;
pub mod obstruction;
pub mod poly;
pub mod projective;
pub mod sample;
pub mod system;
pub mod bimonoid;
pub mod certificate;
pub mod chain;
pub mod config;
pub mod univariate;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals, DEFAULT_PRIME};
pub use poly::MultiPoly;
