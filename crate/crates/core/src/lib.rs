//! Blueprints and blue schemes over finite coefficient tables.
//!
//! The crate computes prime spectra, point counts over finite fields,
//! counting polynomials, Coxeter and building complexes, quiver
//! Grassmannian counts, congruence spectra and Grothendieck groups of
//! blue modules.

pub mod arith;
pub mod blueprint;
pub mod catalog;
pub mod complexes;
pub mod congruence;
pub mod counting;
pub mod error;
pub mod field;
pub mod kzero;
pub mod lattice;
pub mod linear;
pub mod poset;
pub mod quiver;
pub mod schemes;
pub mod spectra;

pub use blueprint::{Blueprint, Budget, Coefficients, Elem, FormalSum, Relation, Verdict};
pub use error::{Error, Result};

/// Integer scalar used by the lattice routines at the crate boundary.
pub type Int = i64;
/// Exact rationals used by interpolation.
pub type Rational = num_rational::Ratio<Int>;
