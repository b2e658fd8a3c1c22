use num_complex::Complex64;
use num_traits::Zero;

use crate::poly::{PolySystem, SparsePoly};

use super::residual;

/// Gaussian elimination with partial pivoting; `None` if numerically singular.
fn solve_linear(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))?;
        if a[p][k].norm() < 1e-300 {
            return None;
        }
        a.swap(p, k);
        b.swap(p, k);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = a[k][j];
                a[i][j] -= f * v;
            }
            let v = b[k];
            b[i] -= f * v;
        }
    }
    let mut x = vec![Complex64::zero(); n];
    for k in (0..n).rev() {
        let s: Complex64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    Some(x)
}

/// Newton iterations on a square system, keeping only steps that lower the
/// residual. Returns the improved point and its residual.
pub fn newton_polish(sys: &PolySystem, p: &[Complex64], iterations: usize) -> (Vec<Complex64>, f64) {
    let mut best = p.to_vec();
    let mut best_r = residual(sys, p).unwrap_or(f64::INFINITY);
    if !sys.is_square() {
        return (best, best_r);
    }
    let n = sys.nvars();
    let jac: Vec<Vec<SparsePoly>> = sys
        .polys()
        .iter()
        .map(|f| (0..n).map(|j| f.derivative(j)).collect())
        .collect();
    for _ in 0..iterations {
        let Ok(fx) = sys.polys().iter().map(|f| f.evaluate(&best)).collect::<crate::Result<Vec<_>>>() else {
            break;
        };
        let Ok(jx) = jac
            .iter()
            .map(|row| row.iter().map(|d| d.evaluate(&best)).collect::<crate::Result<Vec<_>>>())
            .collect::<crate::Result<Vec<_>>>()
        else {
            break;
        };
        let Some(step) = solve_linear(jx, fx) else {
            break;
        };
        let cand: Vec<Complex64> = best.iter().zip(&step).map(|(x, s)| x - s).collect();
        let r = residual(sys, &cand).unwrap_or(f64::INFINITY);
        if r < best_r {
            best = cand;
            best_r = r;
        } else {
            break;
        }
        if best_r == 0.0 {
            break;
        }
    }
    (best, best_r)
}
