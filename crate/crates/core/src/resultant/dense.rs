use crate::error::{Error, Result};
use crate::poly::{Exponent, SparsePoly};

use super::{MacaulayMatrix, Provenance, RowLabel};

/// All exponents in `N^n` of total degree at most `d`, highest degree first and
/// lexicographically decreasing within a degree.
pub(crate) fn monomials_up_to(n: usize, d: i64) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(k: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Exponent>) {
        if k == cur.len() {
            out.push(Exponent(cur.clone()));
            return;
        }
        for v in 0..=left {
            cur[k] = v;
            rec(k + 1, left - v, cur, out);
        }
        cur[k] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out.sort_by(|a, b| b.degree().cmp(&a.degree()).then_with(|| b.cmp(a)));
    out
}

/// Macaulay's partition of the degree-`D` monomials of `x_0..x_n`: the
/// homogeneous monomial `gamma` goes to the smallest `i` with
/// `gamma_i >= d_i`, with shift `gamma - d_i e_i`. Returned shifts are affine
/// (the `x_0` coordinate dropped), grouped by `i`, each list in column order.
pub fn dense_row_partition(n: usize, degrees: &[i64]) -> Result<Vec<Vec<Exponent>>> {
    if n == 0 || degrees.len() != n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "dense Macaulay matrix needs n + 1 degrees for n >= 1 variables, got {} for n = {n}",
            degrees.len()
        )));
    }
    if degrees.iter().any(|&d| d < 1) {
        return Err(Error::InvalidInput("degrees must be positive".into()));
    }
    let big_d: i64 = degrees.iter().sum::<i64>() - n as i64;
    if big_d < *degrees.iter().max().expect("nonempty") {
        return Err(Error::InvalidInput(format!("target degree {big_d} is below the largest degree")));
    }
    let mut parts = vec![Vec::new(); n + 1];
    for alpha in monomials_up_to(n, big_d) {
        let mut gamma = vec![big_d - alpha.degree()];
        gamma.extend_from_slice(&alpha.0);
        let i = (0..=n).find(|&i| gamma[i] >= degrees[i]).expect("pigeonhole");
        gamma[i] -= degrees[i];
        parts[i].push(Exponent(gamma[1..].to_vec()));
    }
    Ok(parts)
}

/// Classical Macaulay matrix of `n + 1` polynomials in `n` variables with
/// degree bounds `d_0..d_n`. The determinant vanishes when the homogenized
/// system has a common projective root.
pub fn macaulay_matrix_dense(fs: &[SparsePoly], degrees: &[i64]) -> Result<MacaulayMatrix> {
    let n = fs.first().map_or(0, SparsePoly::nvars);
    if fs.len() != n + 1 || fs.iter().any(|f| f.nvars() != n) {
        return Err(Error::DimensionMismatch(format!(
            "dense Macaulay matrix needs n + 1 polynomials in n variables, got {} in {n}",
            fs.len()
        )));
    }
    let parts = dense_row_partition(n, degrees)?;
    for (i, (f, &d)) in fs.iter().zip(degrees).enumerate() {
        if f.terms().any(|(e, _)| !e.is_nonnegative() || e.degree() > d) {
            return Err(Error::InvalidInput(format!("polynomial {i} exceeds degree {d} or has negative exponents")));
        }
    }
    let big_d: i64 = degrees.iter().sum::<i64>() - n as i64;
    let cols = monomials_up_to(n, big_d);
    let rows = parts
        .into_iter()
        .enumerate()
        .flat_map(|(i, shifts)| shifts.into_iter().map(move |shift| RowLabel { poly: i, shift }))
        .collect();
    MacaulayMatrix::build(fs, rows, cols, Provenance::DenseMacaulay)
}
