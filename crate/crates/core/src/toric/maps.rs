//! Multiplication maps of the dehomogenized quotient.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, RatMatrix, SparseRow};
use crate::poly::{Exponent, Rat, SparsePoly};

use super::f5::{DegreeData, Eliminator, F5Options};
use super::homogenize::HomogenizedSystem;
use super::order::{cmp_degree, degree_add, degrees_below, Degree, MonomialOrder};

/// Multiplication maps on a finite-dimensional quotient, in the row
/// convention: row `p` of `maps[i]` expresses `x_i` times basis element `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientMaps {
    pub maps: Vec<RatMatrix>,
    /// Coordinates of `1`.
    pub one: Vec<Rat>,
}

impl QuotientMaps {
    pub fn dim(&self) -> usize {
        self.one.len()
    }

    /// Coordinates of `x^e * v`.
    pub fn apply_monomial(&self, v: &[Rat], e: &Exponent) -> Vec<Rat> {
        let mut out = v.to_vec();
        for (i, &k) in e.coords().iter().enumerate() {
            for _ in 0..k {
                out = self.maps[i].left_mul_vec(&out);
            }
        }
        out
    }

    pub fn commute(&self) -> bool {
        for i in 0..self.maps.len() {
            for j in i + 1..self.maps.len() {
                let (a, b) = (&self.maps[i], &self.maps[j]);
                if a.mul(b).ok() != b.mul(a).ok() {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToricMaps {
    /// `b = sum_i d_i`.
    pub b: Degree,
    /// Degree whose piece contains `1, x_1, .., x_n`.
    pub d0: Degree,
    /// Whether `Delta_n` had to be appended to the summands to find `d0`.
    pub augmented: bool,
    /// Dehomogenized standard monomials `pi(B_0)`.
    pub basis: Vec<Exponent>,
    /// Maps of `x_1, .., x_n` on `R / pi(I)`.
    pub quotient: QuotientMaps,
    /// Map of `f_0`, if one was given.
    pub m_f0: Option<RatMatrix>,
}

/// Largest total degree tried for `d0` before appending `Delta_n`.
const D0_SEARCH: u32 = 2;

fn find_d0(h: &HomogenizedSystem) -> Result<Option<Degree>> {
    let n = h.nvars();
    let r = h.algebra.rank();
    let mut cands: Vec<Degree> = degrees_below(&vec![D0_SEARCH; r])
        .into_iter()
        .filter(|d| {
            let t: u32 = d.iter().sum();
            t > 0 && t <= D0_SEARCH
        })
        .collect();
    cands.sort_by(|a, b| cmp_degree(a, b));
    for d in cands {
        let piece = h.algebra.piece(&d)?;
        if (0..n).all(|j| piece.contains(Exponent::unit(n, j).coords())) {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Normal forms of the degree-`b` monomials in terms of the non-pivot columns.
struct NormalForms<'d> {
    data: &'d DegreeData,
    /// Position in the basis of each non-pivot column.
    basis_pos: HashMap<usize, usize>,
}

impl<'d> NormalForms<'d> {
    fn new(data: &'d DegreeData, basis_cols: &[usize]) -> Self {
        NormalForms {
            data,
            basis_pos: basis_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect(),
        }
    }

    fn of(&self, e: &Exponent) -> Result<Vec<Rat>> {
        let j = *self
            .data
            .col_index
            .get(e)
            .ok_or_else(|| Error::InvalidInput(format!("monomial {:?} is outside the graded piece", e.0)))?;
        let mut out = vec![Rat::zero(); self.basis_pos.len()];
        if let Some(&k) = self.basis_pos.get(&j) {
            out[k] = Rat::one();
            return Ok(out);
        }
        let row = self
            .data
            .echelon
            .pivot_row(j)
            .ok_or_else(|| Error::DimensionUnstable(format!("column {:?} is neither pivot nor basis", e.0)))?;
        for (c, v) in row.iter().skip(1) {
            let k = self.basis_pos.get(c).ok_or_else(|| {
                Error::DimensionUnstable("reduced row reaches a pivot column outside the basis".into())
            })?;
            out[*k] = -v.clone();
        }
        Ok(out)
    }
}

/// Standard monomials `B_0` at `b = sum d_i`, then normal forms at `b + d0`
/// with the columns `B_0 * x^(0, d0)` ordered last. The quotient dimension must
/// agree in both degrees, else `DimensionUnstable`.
pub fn multiplication_maps(h: &HomogenizedSystem, order: MonomialOrder, f0: Option<&SparsePoly>) -> Result<ToricMaps> {
    let n = h.nvars();
    let (h, d0, augmented) = match find_d0(h)? {
        Some(d0) => (h.clone(), d0, false),
        None => {
            let aug = h.with_simplex()?;
            let mut d0 = vec![0; aug.algebra.rank()];
            *d0.last_mut().expect("rank >= 1") = 1;
            (aug, d0, true)
        }
    };
    let b = h.total_degree();
    let top = degree_add(&b, &d0);
    let mut el = Eliminator::new(&h, order, F5Options::default());
    for c in degrees_below(&top) {
        if c.iter().zip(&top).all(|(x, y)| x <= y) && c != top {
            el.process(&c)?;
        }
    }

    let at_b = &el.done[&b];
    let basis_cols: Vec<usize> = (0..at_b.cols.len()).filter(|&j| !at_b.echelon.has_pivot(j)).collect();
    let basis: Vec<Exponent> = basis_cols.iter().map(|&j| at_b.cols[j].clone()).collect();
    let delta = basis.len();
    if delta == 0 {
        return Err(Error::InvalidInput("the quotient is zero: the system has no solutions".into()));
    }
    let one = NormalForms::new(at_b, &basis_cols).of(&Exponent::zero(n))?;

    // Degree b + d0 with the shifted basis columns last.
    let mut cols: Vec<Exponent> = el.sorted_columns(&top)?;
    let in_basis: std::collections::HashSet<&Exponent> = basis.iter().collect();
    cols.retain(|c| !in_basis.contains(c));
    let lead = cols.len();
    cols.extend(basis.iter().cloned());
    if cols.len() != el.cache.monomials(&top)?.len() {
        return Err(Error::DimensionUnstable("B0 does not embed in the degree b + d0".into()));
    }
    let data = el.eliminate(&top, Some(cols))?;
    let expected = data.cols.len() - delta;
    if let Some(j) = (0..lead).find(|&j| !data.echelon.has_pivot(j)) {
        return Err(Error::DimensionUnstable(format!(
            "monomial {:?} of degree {:?} is not reduced onto the shifted basis",
            data.cols[j].0, top
        )));
    }
    if data.echelon.rank() != expected {
        return Err(Error::DimensionUnstable(format!(
            "rank {} at degree {:?}, expected {} for a quotient of dimension {delta}",
            data.echelon.rank(),
            top,
            expected
        )));
    }
    let tail: Vec<usize> = (lead..data.cols.len()).collect();
    let nf = NormalForms::new(&data, &tail);

    let mut maps = Vec::with_capacity(n);
    for i in 0..n {
        let rows = basis
            .iter()
            .map(|beta| nf.of(&(beta + &Exponent::unit(n, i))))
            .collect::<Result<Vec<_>>>()?;
        maps.push(RatMatrix::from_rows(rows)?);
    }
    let m_f0 = match f0 {
        None => None,
        Some(f) => {
            let mut rows = Vec::with_capacity(delta);
            for beta in &basis {
                let mut acc = vec![Rat::zero(); delta];
                for (a, c) in f.terms() {
                    for (x, y) in acc.iter_mut().zip(nf.of(&(beta + a))?) {
                        *x += c * y;
                    }
                }
                rows.push(acc);
            }
            Some(RatMatrix::from_rows(rows)?)
        }
    };
    Ok(ToricMaps {
        b,
        d0,
        augmented,
        basis,
        quotient: QuotientMaps { maps, one },
        m_f0,
    })
}

/// Restricts the maps to the part of the quotient where `x_1 ... x_n` acts
/// invertibly, discarding roots with a vanishing coordinate.
pub fn saturate(q: &QuotientMaps) -> Result<QuotientMaps> {
    let delta = q.dim();
    if delta == 0 || q.maps.is_empty() {
        return Ok(q.clone());
    }
    let mut prod = RatMatrix::identity(delta);
    for m in &q.maps {
        prod = prod.mul(m)?;
    }
    let mut power = RatMatrix::identity(delta);
    for _ in 0..delta {
        power = power.mul(&prod)?;
    }
    // Row space of power, as a reduced echelon basis W.
    let mut ech = Echelon::new();
    for i in 0..delta {
        ech.insert(power.sparse_row(i));
    }
    if ech.rank() == delta {
        return Ok(q.clone());
    }
    ech.interreduce();
    let w: Vec<(usize, SparseRow)> = ech.pivot_rows().map(|(c, r)| (c, r.clone())).collect();
    let coords = |v: &[Rat]| -> Vec<Rat> { w.iter().map(|(c, _)| v[*c].clone()).collect() };
    let dense = |r: &SparseRow| {
        let mut v = vec![Rat::zero(); delta];
        for (j, x) in r {
            v[*j] = x.clone();
        }
        v
    };
    let mut maps = Vec::with_capacity(q.maps.len());
    for m in &q.maps {
        let rows: Vec<Vec<Rat>> = w.iter().map(|(_, r)| coords(&m.left_mul_vec(&dense(r)))).collect();
        maps.push(RatMatrix::from_rows(rows)?);
    }
    let one = coords(&power.left_mul_vec(&q.one));
    Ok(QuotientMaps { maps, one })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigen_decomposition;
    use crate::poly::PolySystem;
    use crate::toric::{default_setup, dense_setup};

    fn sys(texts: &[&str], vars: &[&str]) -> PolySystem {
        PolySystem::parse(texts, vars.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn eigs(m: &RatMatrix) -> Vec<num_complex::Complex64> {
        let mut v = eigen_decomposition(&crate::linalg::CMatrix::from_real(&m.to_f64()).unwrap())
            .unwrap()
            .values;
        v.sort_by(|a, b| (a.re + a.im).total_cmp(&(b.re + b.im)));
        v
    }

    #[test]
    fn univariate_quadratic() {
        let h = dense_setup(&sys(&["x^2 - 3*x + 2"], &["x"])).unwrap();
        let t = multiplication_maps(&h, MonomialOrder::GRevLex, None).unwrap();
        assert_eq!(t.basis.len(), 2);
        let e = eigs(&t.quotient.maps[0]);
        assert!((e[0].re - 1.0).abs() < 1e-12 && (e[1].re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pencil_maps() {
        let s = sys(&["1 + 3*l + 2*w + 4*l*w", "3 - 2*l + 4*w - 4*l*w"], &["l", "w"]);
        let h = default_setup(&s).unwrap();
        let t = multiplication_maps(&h, MonomialOrder::GRevLex, None).unwrap();
        assert_eq!(t.basis.len(), 2);
        assert!(t.quotient.commute());
        let e = eigs(&t.quotient.maps[0]);
        let r = 1.0 / 2f64.sqrt();
        assert!(e[0].re.abs() < 1e-10 && (e[0].im + r).abs() < 1e-10);
        assert!(e[1].re.abs() < 1e-10 && (e[1].im - r).abs() < 1e-10);
    }

    #[test]
    fn saturation_drops_the_root_on_a_coordinate_axis() {
        let s = sys(&["x^2 - x + y - 1", "y - 1"], &["x", "y"]);
        let h = default_setup(&s).unwrap();
        let t = multiplication_maps(&h, MonomialOrder::GRevLex, None).unwrap();
        assert_eq!(t.quotient.dim(), 2);
        let sat = saturate(&t.quotient).unwrap();
        assert_eq!(sat.dim(), 1);
        assert_eq!(sat.maps[0].get(0, 0), &Rat::one());
        assert_eq!(sat.maps[1].get(0, 0), &Rat::one());
    }
}
