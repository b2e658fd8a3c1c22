use crate::error::{Error, Result};
use crate::poly::{Exponent, SparsePoly};

use super::{MacaulayMatrix, Provenance, RowLabel};

fn univariate_degree(f: &SparsePoly, name: &str) -> Result<usize> {
    if f.nvars() != 1 {
        return Err(Error::InvalidInput(format!("{name} is not univariate")));
    }
    if f.terms().any(|(e, _)| e.0[0] < 0) {
        return Err(Error::InvalidInput(format!("{name} has a negative exponent")));
    }
    match f.total_degree() {
        Some(d) if d >= 1 => Ok(d as usize),
        _ => Err(Error::InvalidInput(format!("{name} is constant"))),
    }
}

/// Sylvester matrix of two univariate polynomials of degrees `d0, d1 >= 1`.
///
/// Rows are `x^{d1-1} f, ..., f, x^{d0-1} g, ..., g`; columns are the monomials
/// `x^{d0+d1-1}, ..., 1`. The determinant is `Res(f, g)`.
pub fn sylvester_matrix(f: &SparsePoly, g: &SparsePoly) -> Result<MacaulayMatrix> {
    let d0 = univariate_degree(f, "f")?;
    let d1 = univariate_degree(g, "g")?;
    let mut rows = Vec::with_capacity(d0 + d1);
    for k in (0..d1).rev() {
        rows.push(RowLabel {
            poly: 0,
            shift: Exponent(vec![k as i64]),
        });
    }
    for k in (0..d0).rev() {
        rows.push(RowLabel {
            poly: 1,
            shift: Exponent(vec![k as i64]),
        });
    }
    let cols = (0..d0 + d1).rev().map(|k| Exponent(vec![k as i64])).collect();
    MacaulayMatrix::build(&[f.clone(), g.clone()], rows, cols, Provenance::Sylvester)
}
