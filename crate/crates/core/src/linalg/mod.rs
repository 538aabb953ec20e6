//! Exact sparse linear algebra over Z2, Z4 and Z.

pub mod gf2;
pub mod matrix;
pub mod smith;

pub use gf2::{nullspace_z2, rank_z2, solve_affine_z2, AffineSolution, Gf2Vec};
pub use matrix::{ExactMatrix, Ring};
pub use smith::{smith_normal_form, smith_normal_form_with_transforms, SmithForm};
