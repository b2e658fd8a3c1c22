//! Koszul-type determinantal formula for three bilinear forms on `P^1 x P^1`.
//!
//! The forms are `f_k = sum_{i,j} coef_k[i][j] x_i y_j` in the variables
//! `(x0, x1, y0, y1)`, with coefficient grids named `a` (for `f_0`), `b` and
//! `c`. The 6x6 layout below is fixed; its determinant is the resultant.

use crate::error::{Error, Result};
use crate::linalg::{exact_determinant, RatMatrix};
use crate::poly::{Exponent, Rat, SparsePoly};

pub const KOSZUL_ROWS: [&str; 6] = ["y0e0", "y1e0", "y1e1", "y1e2", "y0e1", "y0e2"];
pub const KOSZUL_COLUMNS: [&str; 6] = ["x0e0", "x1e0", "x1e2", "x1e1", "x0e2", "x0e1"];

/// Entry `s_ij` means the coefficient of `x_i y_j` in the form named `s`.
pub const KOSZUL_PATTERN: [[&str; 6]; 6] = [
    ["0", "0", "b10", "-c10", "b00", "-c00"],
    ["0", "0", "b11", "-c11", "b01", "-c01"],
    ["-c01", "-c11", "a11", "0", "a01", "0"],
    ["-b01", "-b11", "0", "a11", "0", "a01"],
    ["-c00", "-c10", "a10", "0", "a00", "0"],
    ["-b00", "-b10", "0", "a10", "0", "a00"],
];

/// Coefficient grids `[i][j]` of `x_i y_j` for the three forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearCoefficients {
    pub a: [[Rat; 2]; 2],
    pub b: [[Rat; 2]; 2],
    pub c: [[Rat; 2]; 2],
}

fn grid(f: &SparsePoly, k: usize) -> Result<[[Rat; 2]; 2]> {
    if f.nvars() != 4 {
        return Err(Error::InvalidInput(format!(
            "form {k} must be in the four variables x0, x1, y0, y1"
        )));
    }
    for (e, _) in f.terms() {
        let c = e.coords();
        let ok = c.iter().all(|&v| v == 0 || v == 1) && c[0] + c[1] == 1 && c[2] + c[3] == 1;
        if !ok {
            return Err(Error::InvalidInput(format!("form {k} is not bilinear in (x0, x1) x (y0, y1)")));
        }
    }
    let at = |i: usize, j: usize| {
        let mut e = vec![0; 4];
        e[i] = 1;
        e[2 + j] = 1;
        f.coeff(&Exponent(e))
    };
    Ok([[at(0, 0), at(0, 1)], [at(1, 0), at(1, 1)]])
}

impl BilinearCoefficients {
    pub fn from_forms(f0: &SparsePoly, f1: &SparsePoly, f2: &SparsePoly) -> Result<Self> {
        Ok(BilinearCoefficients {
            a: grid(f0, 0)?,
            b: grid(f1, 1)?,
            c: grid(f2, 2)?,
        })
    }

    fn lookup(&self, symbol: &str) -> Rat {
        if symbol == "0" {
            return Rat::from_integer(0.into());
        }
        let (neg, s) = match symbol.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, symbol),
        };
        let bytes = s.as_bytes();
        let g = match bytes[0] {
            b'a' => &self.a,
            b'b' => &self.b,
            _ => &self.c,
        };
        let v = g[(bytes[1] - b'0') as usize][(bytes[2] - b'0') as usize].clone();
        if neg {
            -v
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KoszulMatrix {
    pub coefficients: BilinearCoefficients,
    pub matrix: RatMatrix,
}

impl KoszulMatrix {
    pub fn row_labels(&self) -> [&'static str; 6] {
        KOSZUL_ROWS
    }

    pub fn col_labels(&self) -> [&'static str; 6] {
        KOSZUL_COLUMNS
    }

    pub fn determinant(&self) -> Rat {
        exact_determinant(&self.matrix).expect("6x6")
    }

    /// Blocks `(M11, M12, M21, M22)` of the 4 + 2 split.
    pub fn blocks(&self) -> (RatMatrix, RatMatrix, RatMatrix, RatMatrix) {
        let top: Vec<usize> = (0..4).collect();
        let bottom: Vec<usize> = (4..6).collect();
        (
            self.matrix.select(&top, &top),
            self.matrix.select(&top, &bottom),
            self.matrix.select(&bottom, &top),
            self.matrix.select(&bottom, &bottom),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": KOSZUL_ROWS,
            "cols": KOSZUL_COLUMNS,
            "pattern": KOSZUL_PATTERN,
            "entries": (0..6)
                .map(|i| self.matrix.row(i).iter().map(crate::poly::format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// The 6x6 Koszul matrix of three bilinear forms in `(x0, x1, y0, y1)`.
pub fn koszul_bilinear_matrix(f0: &SparsePoly, f1: &SparsePoly, f2: &SparsePoly) -> Result<KoszulMatrix> {
    let coefficients = BilinearCoefficients::from_forms(f0, f1, f2)?;
    let rows = KOSZUL_PATTERN
        .iter()
        .map(|r| r.iter().map(|s| coefficients.lookup(s)).collect())
        .collect();
    let matrix = RatMatrix::from_rows(rows)?;
    Ok(KoszulMatrix { coefficients, matrix })
}
