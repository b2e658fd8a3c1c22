//! Groebner bases over graded semigroup algebras and the toric
//! multiplication maps they yield.

mod algebra;
mod f5;
mod fglm;
mod homogenize;
mod maps;
mod order;

pub use algebra::{build_algebra, GradedSemigroupAlgebra};
pub use f5::{
    dehomogenize_gb, macaulay_matrix_graded, truncated_gb, DegreeStats, F5Options, GbElement, GradedMacaulay,
    GradedRow, TruncatedGB,
};
pub use fglm::{fglm_lex, fglm_lex_numeric};
pub use homogenize::{default_setup, dense_setup, homogenize_system, HomogenizedPoly, HomogenizedSystem};
pub use maps::{multiplication_maps, saturate, QuotientMaps, ToricMaps};
pub use order::{cmp_degree, degrees_below, Degree, GradedMonomialOrder, MonomialOrder};
