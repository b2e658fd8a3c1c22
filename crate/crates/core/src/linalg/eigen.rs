//! Dense complex eigensolver: Householder reduction to Hessenberg form,
//! single-shift QR with Wilkinson shifts to a Schur form `A = Z T Z^*`, and
//! eigenvectors by back-substitution on `T`.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

pub const MAX_EIGEN_DIM: usize = 500;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        Ok(CMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// `A = Z T Z^*` with `T` upper triangular and `Z` unitary.
#[derive(Clone, Debug)]
pub struct SchurForm {
    pub t: CMatrix,
    pub z: CMatrix,
}

impl SchurForm {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.n).map(|i| self.t[(i, i)]).collect()
    }
}

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    /// Unit-norm right eigenvectors, `vectors[k]` pairs with `values[k]`.
    pub vectors: Vec<Vec<Complex64>>,
    /// True when some eigenvalue cluster has fewer independent eigenvectors than its size.
    pub defective: bool,
    pub schur: SchurForm,
}

impl EigenDecomposition {
    /// Groups eigenvalues closer than `tol` into `(representative, multiplicity)`.
    pub fn clusters(&self, tol: f64) -> Vec<(Complex64, usize)> {
        cluster_values(&self.values, tol)
            .into_iter()
            .map(|idx| {
                let mean = idx.iter().map(|&k| self.values[k]).sum::<Complex64>() / idx.len() as f64;
                (mean, idx.len())
            })
            .collect()
    }
}

pub(crate) fn cluster_values(values: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    'outer: for (k, v) in values.iter().enumerate() {
        for g in &mut groups {
            if g.iter().any(|&j| (values[j] - v).norm() <= tol) {
                g.push(k);
                continue 'outer;
            }
        }
        groups.push(vec![k]);
    }
    groups
}

/// Reduces to upper Hessenberg form in place, returning the accumulated unitary factor.
fn hessenberg(a: &mut CMatrix) -> CMatrix {
    let n = a.n;
    let mut q = CMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // A <- H A with H = I - 2 v v^*
        for j in 0..n {
            let s: Complex64 = v.iter().enumerate().map(|(r, vr)| vr.conj() * a[(k + 1 + r, j)]).sum();
            for (r, vr) in v.iter().enumerate() {
                a[(k + 1 + r, j)] -= *vr * s * 2.0;
            }
        }
        // A <- A H, Q <- Q H
        for m in [&mut *a, &mut q] {
            for i in 0..n {
                let s: Complex64 = v.iter().enumerate().map(|(r, vr)| m[(i, k + 1 + r)] * vr).sum();
                for (r, vr) in v.iter().enumerate() {
                    m[(i, k + 1 + r)] -= s * vr.conj() * 2.0;
                }
            }
        }
        for i in k + 2..n {
            a[(i, k)] = Complex64::zero();
        }
    }
    q
}

/// Givens rotation `[c, s; -conj(s), c]` with real `c` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::zero());
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition by shifted QR iteration.
pub fn schur(m: &CMatrix) -> Result<SchurForm> {
    let n = m.n;
    let mut h = m.clone();
    let mut z = hessenberg(&mut h);
    if n <= 1 {
        return Ok(SchurForm { t: h, z });
    }
    let scale = h.norm().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let max_iter = 100 * n.max(10);
    let mut iter = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        // Deflate negligible subdiagonal entries.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= eps * diag.max(scale * 1e-3) || sub <= eps * eps * scale {
                h[(lo, lo - 1)] = Complex64::zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        iter += 1;
        since_deflation += 1;
        if iter > max_iter {
            let partial = (hi + 1..n).map(|i| h[(i, i)]).collect();
            return Err(Error::NoConvergence {
                iterations: iter - 1,
                partial,
            });
        }
        let mu = if since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].norm() * 0.75, h[(hi, hi - 1)].norm() * 0.5)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        for i in lo..=hi {
            h[(i, i)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = Complex64::zero();
            rots.push((c, s));
        }
        for (off, &(c, s)) in rots.iter().enumerate() {
            let k = lo + off;
            let top = (k + 2).min(hi);
            for i in 0..=top {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
            for i in 0..n {
                let x = z[(i, k)];
                let y = z[(i, k + 1)];
                z[(i, k)] = x * c + y * s.conj();
                z[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += mu;
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = Complex64::zero();
        }
    }
    Ok(SchurForm { t: h, z })
}

/// All eigenvalues with right eigenvectors.
pub fn eigen_decomposition(m: &CMatrix) -> Result<EigenDecomposition> {
    let n = m.n;
    if n == 0 || n > MAX_EIGEN_DIM {
        return Err(Error::InvalidInput(format!(
            "eigenproblem of size {n} outside 1..={MAX_EIGEN_DIM}"
        )));
    }
    let sf = schur(m)?;
    let t = &sf.t;
    let norm = t.norm().max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * norm;
    let values = sf.eigenvalues();
    let mut vectors = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = values[k];
        let mut y = vec![Complex64::zero(); n];
        y[k] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let s: Complex64 = (j + 1..=k).map(|l| t[(j, l)] * y[l]).sum();
            let mut d = t[(j, j)] - lambda;
            if d.norm() < small {
                d = Complex64::new(small, 0.0);
            }
            y[j] = -s / d;
        }
        let mut v = sf.z.mul_vec(&y);
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= vn;
        }
        vectors.push(v);
    }
    let defective = cluster_values(&values, 1e-6 * norm.max(1.0))
        .into_iter()
        .filter(|g| g.len() > 1)
        .any(|g| !independent(&g.iter().map(|&k| vectors[k].clone()).collect::<Vec<_>>(), 1e-6));
    Ok(EigenDecomposition {
        values,
        vectors,
        defective,
        schur: sf,
    })
}

/// Modified Gram-Schmidt rank test.
fn independent(vs: &[Vec<Complex64>], tol: f64) -> bool {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for b in &basis {
            let dot: Complex64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= dot * bi;
            }
        }
        let nrm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm < tol {
            return false;
        }
        basis.push(w.into_iter().map(|z| z / nrm).collect());
    }
    true
}

/// Roots of a univariate polynomial given by coefficients `c[0] + c[1] x + ...`.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs
        .iter()
        .rposition(|c| !c.is_zero())
        .ok_or_else(|| Error::InvalidInput("zero polynomial has no roots".into()))?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let mut comp = CMatrix::zeros(deg);
    for i in 1..deg {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    Ok(schur(&comp)?.eigenvalues())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        v
    }

    fn check_pairs(m: &CMatrix, ed: &EigenDecomposition) {
        let tol = 1e-8 * m.norm().max(1.0);
        for (l, v) in ed.values.iter().zip(&ed.vectors) {
            let mv = m.mul_vec(v);
            let r: f64 = mv.iter().zip(v).map(|(a, b)| (a - l * b).norm_sqr()).sum::<f64>().sqrt();
            assert!(r <= tol, "residual {r}");
        }
    }

    #[test]
    fn diagonal() {
        let m = CMatrix::from_real(&[vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 3.0]]).unwrap();
        let ed = eigen_decomposition(&m).unwrap();
        let v = sorted(ed.values.clone());
        for (a, b) in v.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - c(b, 0.0)).norm() < 1e-12);
        }
        assert!(!ed.defective);
        check_pairs(&m, &ed);
    }

    #[test]
    fn companion_of_x2_plus_half() {
        // x^2 + 1/2 has roots ±i/sqrt(2).
        let m = CMatrix::from_real(&[vec![0.0, -0.5], vec![1.0, 0.0]]).unwrap();
        let ed = eigen_decomposition(&m).unwrap();
        let v = sorted(ed.values.clone());
        let r = 0.5f64.sqrt();
        assert!((v[0] - c(0.0, -r)).norm() < 1e-12);
        assert!((v[1] - c(0.0, r)).norm() < 1e-12);
        check_pairs(&m, &ed);
    }

    #[test]
    fn jordan_block_is_flagged() {
        let m = CMatrix::from_real(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let ed = eigen_decomposition(&m).unwrap();
        assert!(ed.values.iter().all(|l| (l - c(1.0, 0.0)).norm() < 1e-8));
        assert!(ed.defective);
        assert_eq!(ed.clusters(1e-6), vec![(c(1.0, 0.0), 2)]);
    }

    #[test]
    fn random_matrices_satisfy_eigen_equation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [1usize, 2, 3, 5, 8, 13, 30] {
            let rows: Vec<Vec<Complex64>> = (0..n)
                .map(|_| (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
                .collect();
            let m = CMatrix::from_rows(&rows).unwrap();
            let ed = eigen_decomposition(&m).unwrap();
            check_pairs(&m, &ed);
            let back = ed.schur.z.mul(&ed.schur.t).mul(&ed.schur.z.adjoint());
            assert!(back.sub(&m).norm() < 1e-10 * m.norm().max(1.0));
        }
    }

    #[test]
    fn real_matrix_with_complex_pair() {
        let m = CMatrix::from_real(&[vec![0.0, -1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 2.0]]).unwrap();
        let ed = eigen_decomposition(&m).unwrap();
        let v = sorted(ed.values.clone());
        assert!((v[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((v[1] - c(0.0, 1.0)).norm() < 1e-12);
        assert!((v[2] - c(2.0, 0.0)).norm() < 1e-12);
        check_pairs(&m, &ed);
    }

    #[test]
    fn roots_of_cubic() {
        // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
        let roots = sorted(polynomial_roots(&[c(6.0, 0.0), c(-7.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap());
        for (r, e) in roots.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((r - c(e, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_empty() {
        assert!(eigen_decomposition(&CMatrix::zeros(0)).is_err());
    }
}
