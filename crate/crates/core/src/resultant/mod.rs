//! Resultant matrices: Sylvester, classical Macaulay, Canny–Emiris and the
//! bilinear Koszul formula.

mod canny_emiris;
mod dense;
mod koszul;
mod sylvester;

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{exact_determinant, RatMatrix};
use crate::poly::{format_rational, Exponent, Rat, SparsePoly};

pub use canny_emiris::{canny_emiris_matrix, canny_emiris_with_retry, random_delta, CannyEmirisData};
pub use dense::{dense_row_partition, macaulay_matrix_dense};
pub use koszul::{koszul_bilinear_matrix, BilinearCoefficients, KoszulMatrix, KOSZUL_COLUMNS, KOSZUL_PATTERN, KOSZUL_ROWS};
pub use sylvester::sylvester_matrix;

/// Row `(i, beta)`: the polynomial `x^beta * f_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RowLabel {
    pub poly: usize,
    pub shift: Exponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Sylvester,
    DenseMacaulay,
    CannyEmiris,
    Graded,
}

/// Matrix whose row `(i, beta)` holds the coefficients of `x^beta * f_i` on
/// the monomial columns.
#[derive(Debug, Clone, PartialEq)]
pub struct MacaulayMatrix {
    rows: Vec<RowLabel>,
    cols: Vec<Exponent>,
    entries: RatMatrix,
    provenance: Provenance,
}

impl MacaulayMatrix {
    /// Fills the rows from `polys`. Fails if a shifted polynomial has a monomial
    /// outside `cols`.
    pub fn build(
        polys: &[SparsePoly],
        rows: Vec<RowLabel>,
        cols: Vec<Exponent>,
        provenance: Provenance,
    ) -> Result<Self> {
        let index: HashMap<&Exponent, usize> = cols.iter().enumerate().map(|(j, c)| (c, j)).collect();
        let mut entries = RatMatrix::zeros(rows.len(), cols.len());
        for (r, label) in rows.iter().enumerate() {
            let f = polys
                .get(label.poly)
                .ok_or_else(|| Error::InvalidInput(format!("row refers to missing polynomial {}", label.poly)))?;
            for (e, c) in f.terms() {
                let m = e + &label.shift;
                let j = *index.get(&m).ok_or(Error::SupportEscapes { index: label.poly })?;
                entries.set(r, j, c.clone());
            }
        }
        Ok(MacaulayMatrix {
            rows,
            cols,
            entries,
            provenance,
        })
    }

    pub fn rows(&self) -> &[RowLabel] {
        &self.rows
    }

    pub fn cols(&self) -> &[Exponent] {
        &self.cols
    }

    pub fn entries(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        self.entries.get(i, j)
    }

    pub fn determinant(&self) -> Result<Rat> {
        exact_determinant(&self.entries)
    }

    /// Checks every entry against the coefficient of `x^col` in `x^beta f_i`.
    pub fn audit(&self, polys: &[SparsePoly]) -> bool {
        self.rows.iter().enumerate().all(|(r, label)| {
            self.cols.iter().enumerate().all(|(j, col)| {
                let e = col - &label.shift;
                polys[label.poly].coeff(&e) == *self.entry(r, j)
            })
        }) && self.rows.iter().all(|label| {
            polys[label.poly]
                .terms()
                .all(|(e, _)| self.cols.contains(&(e + &label.shift)))
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "provenance": self.provenance,
            "rows": self.rows.iter().map(|r| serde_json::json!({"poly": r.poly, "shift": r.shift.0})).collect::<Vec<_>>(),
            "cols": self.cols.iter().map(|c| c.0.clone()).collect::<Vec<_>>(),
            "entries": (0..self.nrows())
                .map(|i| self.entries.row(i).iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// Grid with row and column labels.
    pub fn to_grid(&self) -> String {
        let label = |e: &Exponent| format!("{:?}", e.0);
        let mut cells: Vec<Vec<String>> = Vec::with_capacity(self.nrows() + 1);
        let mut head = vec![String::new()];
        head.extend(self.cols.iter().map(label));
        cells.push(head);
        for (i, r) in self.rows.iter().enumerate() {
            let mut line = vec![format!("f{} {}", r.poly, label(&r.shift))];
            line.extend(self.entries.row(i).iter().map(|q| {
                if q.is_zero() {
                    ".".to_string()
                } else {
                    format_rational(q)
                }
            }));
            cells.push(line);
        }
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        cells
            .iter()
            .map(|r| r.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}
