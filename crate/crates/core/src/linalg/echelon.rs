//! Sparse row echelon form over the rationals.
//!
//! Columns are identified by position; column 0 is the leftmost, and the
//! leading entry of a row is its smallest column index. Rows are inserted one
//! at a time and never swapped, which is the elimination discipline the
//! Macaulay-matrix algorithms rely on.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::Rat;

/// `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow = Vec<(usize, Rat)>;

/// Outcome of inserting a row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insert {
    /// The row reduced to zero against the existing pivots.
    Zero,
    /// The row became a new pivot row with this leading column.
    Pivot(usize),
}

#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn pivot_row(&self, col: usize) -> Option<&SparseRow> {
        self.pivots.get(&col)
    }

    pub fn pivot_rows(&self) -> impl Iterator<Item = (usize, &SparseRow)> {
        self.pivots.iter().map(|(c, r)| (*c, r))
    }

    /// Eliminates pivot columns from `row`. With `head_only`, stops at the first
    /// entry whose column has no pivot.
    pub fn reduce(&self, row: SparseRow, head_only: bool) -> SparseRow {
        let mut work: BTreeMap<usize, Rat> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut cursor = 0usize;
        while let Some((&col, _)) = work.range(cursor..).next() {
            match self.pivots.get(&col) {
                Some(prow) => {
                    let c = work.remove(&col).expect("present");
                    for (j, v) in prow.iter().skip(1) {
                        let e = work.entry(*j).or_insert_with(Rat::zero);
                        *e -= &c * v;
                        if e.is_zero() {
                            work.remove(j);
                        }
                    }
                    cursor = col + 1;
                }
                None if head_only => break,
                None => cursor = col + 1,
            }
        }
        work.into_iter().collect()
    }

    /// Reduces the head of `row` and stores it as a monic pivot row if nonzero.
    pub fn insert(&mut self, row: SparseRow) -> Insert {
        let reduced = self.reduce(row, true);
        match reduced.first() {
            None => Insert::Zero,
            Some((col, lead)) => {
                let col = *col;
                let inv = Rat::one() / lead;
                let monic = reduced.into_iter().map(|(j, v)| (j, v * &inv)).collect();
                self.pivots.insert(col, monic);
                Insert::Pivot(col)
            }
        }
    }

    /// Brings the pivot rows to reduced row echelon form.
    pub fn interreduce(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for col in cols {
            let row = self.pivots.remove(&col).expect("pivot");
            let (head, tail) = row.split_first().expect("nonempty pivot row");
            let mut reduced = vec![head.clone()];
            reduced.extend(self.reduce(tail.to_vec(), false));
            self.pivots.insert(col, reduced);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn row(v: &[i64]) -> SparseRow {
        v.iter()
            .enumerate()
            .filter(|(_, x)| **x != 0)
            .map(|(j, x)| (j, int(*x)))
            .collect()
    }

    #[test]
    fn insert_and_detect_dependency() {
        let mut e = Echelon::new();
        assert_eq!(e.insert(row(&[1, 2, 3])), Insert::Pivot(0));
        assert_eq!(e.insert(row(&[2, 4, 7])), Insert::Pivot(2));
        assert_eq!(e.insert(row(&[3, 6, 10])), Insert::Zero);
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn interreduce_gives_rref() {
        let mut e = Echelon::new();
        e.insert(row(&[1, 1, 0]));
        e.insert(row(&[0, 1, 1]));
        e.interreduce();
        assert_eq!(e.pivot_row(0).unwrap(), &vec![(0, int(1)), (2, int(-1))]);
        assert_eq!(e.pivot_row(1).unwrap(), &vec![(1, int(1)), (2, int(1))]);
    }

    #[test]
    fn full_reduction_clears_pivot_columns() {
        let mut e = Echelon::new();
        e.insert(row(&[1, 0, 2, 0]));
        e.insert(row(&[0, 1, 0, 3]));
        let r = e.reduce(row(&[1, 1, 1, 1]), false);
        assert_eq!(r, vec![(2, int(-1)), (3, int(-2))]);
    }
}
