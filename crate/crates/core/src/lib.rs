//! Twisted Alexander invariants and non-acyclic Reidemeister torsion of knot
//! exteriors for `SL(2,C)` / `SU(2)` representations.
//!
//! The pipeline is
//!
//! 1. a deficiency-one knot group presentation ([`presentation`]),
//! 2. Fox derivatives of its relators ([`foxcalc`]),
//! 3. a representation, usually Riley's parametrization of a 2-bridge knot
//!    group ([`reps`]),
//! 4. the boundary matrices twisted by `t^α ⊗ Ad∘ρ`, their determinants as
//!    Laurent polynomials ([`laurent`]), and the torsion itself ([`torsion`]).
//!
//! [`analysis`] sweeps the SU(2) character variety and locates critical
//! points of the torsion; [`catalog`] holds the built-in knots.

pub mod analysis;
pub mod catalog;
pub mod foxcalc;
pub mod laurent;
pub mod presentation;
pub mod reps;
mod tolerances;
pub mod torsion;

pub use num_complex::Complex64;

pub use foxcalc::GroupRingElt;
pub use laurent::{IntLaurent, LaurentMatrix, LaurentPoly, RationalFunction};
pub use presentation::{Letter, Presentation, Word};
pub use reps::{AdjointImage, Mat2, Rep, RileyPoly};
pub use tolerances::Tolerances;
pub use torsion::TorsionResult;
