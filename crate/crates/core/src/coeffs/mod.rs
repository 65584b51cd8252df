//! Exact scalars and linear algebra over Q, Z_(p) and F_p.

mod lattice;
mod matrix;
mod profile;
mod scalar;

pub use lattice::{Lattice, SparseVec};
pub use matrix::{Matrix, SmithForm, cokernel_profile, membership, smith_normal_form};
pub use profile::InvariantFactorProfile;
pub use scalar::{BaseRing, Scalar};
