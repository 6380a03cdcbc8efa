//! Exact linear algebra over a [`Field`](crate::field::Field): dense matrices with
//! Gauss-Jordan elimination, subspaces in canonical (rref) form, weight-graded spaces
//! and integer-indexed filtrations.

mod filtration;
mod matrix;
mod subspace;
mod weighted;

pub use filtration::{Direction, Filtration};
pub(crate) use matrix::gauss_jordan;
pub use matrix::Matrix;
pub use subspace::{Subquotient, Subspace};
pub use weighted::WeightedSpace;
