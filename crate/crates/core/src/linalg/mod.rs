//! Exact rational and floating-point linear algebra kernels.

pub mod echelon;
pub mod eigen;
pub mod matrix;

pub use echelon::{Echelon, Insert, SparseRow};
pub use eigen::{eigen_decomposition, polynomial_roots, schur, CMatrix, EigenDecomposition, SchurForm};
pub use matrix::{exact_determinant, RatMatrix};
