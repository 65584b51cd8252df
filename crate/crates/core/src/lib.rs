//! Graded-module models of ring spectrum quotients.
//!
//! The crate computes homotopy groups of quotients `M/(x_1, x_2, ...)` of
//! ring spectra at the level of graded modules over a presented graded ring,
//! and certifies that no such quotient of the p-local homotopy of `MO<8>`
//! (for `p > 3`) is module-isomorphic to the homotopy of `tmf`.
//!
//! Layers, bottom up:
//! - [`coeffs`]: exact arithmetic and PID linear algebra over Q, Z_(p), F_p.
//! - [`graded`]: presented graded rings, elements, degree pieces, ideals.
//! - [`models`]: the specific rings being compared.
//! - [`quotient`]: quotient towers with regular / zero-split / ambiguous stages.
//! - [`obstruction`]: sequence classification, witnesses and certificates.
//! - [`cli`]: the document-driven batch front end behind the `mo8q` binary.

pub mod coeffs;
pub mod graded;
pub mod models;
pub mod quotient;
pub mod obstruction;
pub mod cli;
mod error;

pub use error::{Error, Result};
