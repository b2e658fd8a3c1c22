//! Block split of a Canny–Emiris matrix and exact Schur complements.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Echelon, RatMatrix, SparseRow};
use crate::poly::{Exponent, Rat, SparsePoly};
use crate::resultant::{CannyEmirisData, RowLabel};

/// `[[M11, M12], [M21, M22]]` with the `f_0` rows last and the `B_0` columns last.
#[derive(Debug, Clone)]
pub struct BlockSplit {
    pub m11: RatMatrix,
    pub m12: RatMatrix,
    pub m21: RatMatrix,
    pub m22: RatMatrix,
    pub top_rows: Vec<RowLabel>,
    pub bottom_rows: Vec<RowLabel>,
    /// Columns `E \ B_0`.
    pub left_cols: Vec<Exponent>,
    /// Columns `B_0`, in the order of the `f_0` rows.
    pub right_cols: Vec<Exponent>,
    /// Original row index of each reordered row.
    pub row_perm: Vec<usize>,
    /// Original column index of each reordered column.
    pub col_perm: Vec<usize>,
}

/// Reorders the matrix so that the `f_0` rows come last and the columns of
/// their shifts come last, in matching order. Every `f_0` row must use the
/// same vertex of `A_0`; the `B_0` columns are the shifts themselves.
pub fn split_canny_emiris(ce: &CannyEmirisData) -> Result<BlockSplit> {
    let m = &ce.matrix;
    let index: HashMap<&Exponent, usize> = m.cols().iter().enumerate().map(|(j, c)| (c, j)).collect();
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    let mut anchor: Option<Exponent> = None;
    for (r, label) in m.rows().iter().enumerate() {
        if label.poly == 0 {
            let a0 = &ce.points[r] - &label.shift;
            match &anchor {
                None => anchor = Some(a0),
                Some(a) if *a == a0 => {}
                Some(_) => {
                    return Err(Error::InvalidInput(
                        "f0 rows use different vertices of A0; the Schur complement is not a multiplication map".into(),
                    ))
                }
            }
            bottom.push(r);
        } else {
            top.push(r);
        }
    }
    if bottom.is_empty() {
        return Err(Error::ZeroMixedVolume);
    }
    let right: Vec<usize> = bottom
        .iter()
        .map(|&r| {
            index
                .get(&m.rows()[r].shift)
                .copied()
                .ok_or_else(|| Error::InvalidInput("a B0 shift is not a column".into()))
        })
        .collect::<Result<_>>()?;
    let left: Vec<usize> = (0..m.ncols()).filter(|j| !right.contains(j)).collect();
    let e = m.entries();
    let row_perm: Vec<usize> = top.iter().chain(&bottom).copied().collect();
    let col_perm: Vec<usize> = left.iter().chain(&right).copied().collect();
    Ok(BlockSplit {
        m11: e.select(&top, &left),
        m12: e.select(&top, &right),
        m21: e.select(&bottom, &left),
        m22: e.select(&bottom, &right),
        top_rows: top.iter().map(|&r| m.rows()[r].clone()).collect(),
        bottom_rows: bottom.iter().map(|&r| m.rows()[r].clone()).collect(),
        left_cols: left.iter().map(|&j| m.cols()[j].clone()).collect(),
        right_cols: right.iter().map(|&j| m.cols()[j].clone()).collect(),
        row_perm,
        col_perm,
    })
}

/// Matrix of multiplication by `label` on the span of `basis`: row `p` gives
/// `x^p * g = sum_q M[p][q] x^q` modulo the ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicationMatrix {
    pub basis: Vec<Exponent>,
    pub entries: RatMatrix,
    pub label: String,
}

impl MultiplicationMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_complex(&self) -> CMatrix {
        CMatrix::from_real(&self.entries.to_f64()).expect("square")
    }
}

/// Elimination of the `[M11 | M12]` rows, reusable for several multipliers.
#[derive(Debug, Clone)]
pub struct SchurEngine {
    echelon: Echelon,
    col_index: HashMap<Exponent, usize>,
    split_at: usize,
    basis: Vec<Exponent>,
}

impl SchurEngine {
    /// Fails with `SingularM11` when `M11` is not invertible.
    pub fn new(split: &BlockSplit) -> Result<Self> {
        let k = split.left_cols.len();
        if split.m11.rows() != k {
            return Err(Error::SingularM11);
        }
        let mut echelon = Echelon::new();
        for i in 0..split.m11.rows() {
            let mut row: SparseRow = split.m11.sparse_row(i);
            row.extend(split.m12.sparse_row(i).into_iter().map(|(j, v)| (j + k, v)));
            echelon.insert(row);
        }
        if (0..k).any(|j| !echelon.has_pivot(j)) {
            return Err(Error::SingularM11);
        }
        let col_index = split
            .left_cols
            .iter()
            .chain(&split.right_cols)
            .enumerate()
            .map(|(j, c)| (c.clone(), j))
            .collect();
        Ok(SchurEngine {
            echelon,
            col_index,
            split_at: k,
            basis: split.right_cols.clone(),
        })
    }

    pub fn basis(&self) -> &[Exponent] {
        &self.basis
    }

    fn reduce_to_basis(&self, row: SparseRow) -> Vec<Rat> {
        let reduced = self.echelon.reduce(row, false);
        let mut out = vec![Rat::zero(); self.basis.len()];
        for (j, v) in reduced {
            debug_assert!(j >= self.split_at, "M11 columns must be eliminated");
            out[j - self.split_at] = v;
        }
        out
    }

    /// Multiplication matrix of `g` from the rows `x^p g`, `p` in the basis.
    /// `g` times a basis monomial must stay inside the column set.
    pub fn multiplication_matrix(&self, g: &SparsePoly, label: &str) -> Result<MultiplicationMatrix> {
        let mut rows = Vec::with_capacity(self.basis.len());
        for p in &self.basis {
            let mut row: SparseRow = Vec::new();
            for (e, c) in g.terms() {
                let m = e + p;
                let j = *self
                    .col_index
                    .get(&m)
                    .ok_or_else(|| Error::InvalidInput(format!("{label} times x^{:?} leaves the matrix columns", p.0)))?;
                row.push((j, c.clone()));
            }
            row.sort_by_key(|(j, _)| *j);
            rows.push(self.reduce_to_basis(row));
        }
        Ok(MultiplicationMatrix {
            basis: self.basis.clone(),
            entries: RatMatrix::from_rows(rows)?,
            label: label.to_string(),
        })
    }

    /// `M22 - M21 M11^{-1} M12` from the split's own bottom rows.
    pub fn schur_complement(&self, split: &BlockSplit, label: &str) -> Result<MultiplicationMatrix> {
        let k = self.split_at;
        let rows = (0..split.m21.rows())
            .map(|i| {
                let mut row = split.m21.sparse_row(i);
                row.extend(split.m22.sparse_row(i).into_iter().map(|(j, v)| (j + k, v)));
                self.reduce_to_basis(row)
            })
            .collect();
        Ok(MultiplicationMatrix {
            basis: self.basis.clone(),
            entries: RatMatrix::from_rows(rows)?,
            label: label.to_string(),
        })
    }
}

/// Exact Schur complement `M22 - M21 M11^{-1} M12` of the split.
pub fn schur_multiplication_matrix(split: &BlockSplit) -> Result<MultiplicationMatrix> {
    SchurEngine::new(split)?.schur_complement(split, "f0")
}
