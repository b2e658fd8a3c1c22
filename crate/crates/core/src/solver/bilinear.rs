//! Two bilinear equations on `P^1 x P^1` through the Koszul matrix.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigen_decomposition, CMatrix, RatMatrix};
use crate::poly::{rat_to_f64, Exponent, PolySystem, Rat, SparsePoly};
use crate::resultant::{koszul_bilinear_matrix, KoszulMatrix};

use super::{residual, RejectedPoint, SolutionSet};

const VARS: [&str; 4] = ["x0", "x1", "y0", "y1"];

#[derive(Debug, Clone)]
pub struct BilinearSolve {
    /// Points `(x0, x1, y0, y1) = (1, X, 1, Y)`.
    pub solutions: SolutionSet,
    /// Koszul matrix for `f_0 = x1 y0`.
    pub koszul: KoszulMatrix,
    /// `M22 - M21 M11^{-1} M12`; its eigenvalues are the ratios `x1 / x0`.
    pub schur: RatMatrix,
    /// Eigenvalues of the Schur complement for `f_0 = x0 y1`, used to confirm the `Y` values.
    pub y_check: Vec<Complex64>,
}

fn monomial_form(i: usize, j: usize) -> SparsePoly {
    let mut e = vec![0; 4];
    e[i] = 1;
    e[2 + j] = 1;
    SparsePoly::monomial(4, Exponent(e), Rat::from_integer(1.into()))
}

fn schur_of(k: &KoszulMatrix) -> Result<RatMatrix> {
    let (m11, m12, m21, m22) = k.blocks();
    let inv = m11.inverse().ok_or(Error::SingularM11)?;
    let prod = m21.mul(&inv)?.mul(&m12)?;
    Ok(m22.add_scaled(&prod, &Rat::from_integer((-1).into())))
}

fn eigenvalues(m: &RatMatrix) -> Result<Vec<Complex64>> {
    Ok(eigen_decomposition(&CMatrix::from_real(&m.to_f64())?)?.values)
}

/// Solves `f1 = f2 = 0` for bilinear forms in `(x0, x1, y0, y1)`, reporting
/// the roots in the affine chart `x0 = y0 = 1`.
pub fn solve_bilinear_koszul(f1: &SparsePoly, f2: &SparsePoly, tol: f64) -> Result<BilinearSolve> {
    let koszul = koszul_bilinear_matrix(&monomial_form(1, 0), f1, f2)?;
    let schur = schur_of(&koszul)?;
    let xs = eigenvalues(&schur)?;
    let y_check = eigenvalues(&schur_of(&koszul_bilinear_matrix(&monomial_form(0, 1), f1, f2)?)?)?;

    let g = &koszul.coefficients;
    let c = |m: &[[Rat; 2]; 2], i: usize, j: usize| Complex64::new(rat_to_f64(&m[i][j]), 0.0);
    let sys = PolySystem::new(VARS.iter().map(|s| s.to_string()).collect(), vec![f1.clone(), f2.clone()])?;
    let mut set = SolutionSet {
        points: Vec::new(),
        residuals: Vec::new(),
        multiplicities: Vec::new(),
        rejected: Vec::new(),
        warnings: Vec::new(),
        mv: 2,
        seed: 0,
    };
    for x in xs {
        // Pick whichever form gives the better conditioned division for Y.
        let cand = [&g.b, &g.c].map(|m| (-(c(m, 0, 0) + c(m, 1, 0) * x), c(m, 0, 1) + c(m, 1, 1) * x));
        let (num, den) = if cand[0].1.norm() >= cand[1].1.norm() { cand[0] } else { cand[1] };
        let y = num / den;
        let one = Complex64::new(1.0, 0.0);
        let p = vec![one, x, one, y];
        let r = residual(&sys, &p)?;
        let gap = y_check.iter().map(|v| (v - y).norm() / y.norm().max(1.0)).fold(f64::INFINITY, f64::min);
        if gap > tol.sqrt() {
            set.warnings.push(format!("Y = {y} not confirmed by the swapped Schur complement (gap {gap:.2e})"));
        }
        if r <= tol && p.iter().all(|z| z.is_finite()) {
            set.points.push(p);
            set.residuals.push(r);
            set.multiplicities.push(1);
        } else {
            set.rejected.push(RejectedPoint { point: p, residual: r });
        }
    }
    Ok(BilinearSolve {
        solutions: set,
        koszul,
        schur,
        y_check,
    })
}
