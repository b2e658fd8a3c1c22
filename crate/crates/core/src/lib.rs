//! Sparse polynomial system solving over the algebraic torus `(C*)^n`.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`]: exact sparse Laurent polynomials and systems.
//! * [`polytope`]: Newton polytopes, Minkowski sums, lattice points, mixed
//!   volumes and regular mixed subdivisions.
//! * [`resultant`]: Sylvester, Macaulay, Canny–Emiris and bilinear Koszul
//!   matrices with exact determinants.
//! * [`solver`]: Schur-complement multiplication matrices and numerical root
//!   extraction.
//! * [`toric`]: Groebner bases over semigroup algebras, multiplication maps
//!   and FGLM.

pub mod error;
pub mod linalg;
pub mod poly;
pub mod polytope;
pub mod resultant;
pub mod solver;
pub mod toric;

pub use error::{Error, Result};
pub use poly::{Coefficient, Exponent, PolySystem, Rat, Scalar, SparsePoly};
