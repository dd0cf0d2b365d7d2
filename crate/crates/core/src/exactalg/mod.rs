//! Exact arithmetic over ℤ_p and ℚ.

mod matrix;
mod scalar;
mod subspace;

pub use matrix::{Matrix, Rref, Vector};
pub use scalar::{Field, Scalar};
pub use subspace::{
    all_subspaces, all_vectors, subspaces_of_dim, vector_count, vector_from_index, AffineSubspace, Subspace,
};
