//! Small exact linear-algebra helpers on integer vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::linalg::{Echelon, Insert, RatMatrix};
use crate::poly::Rat;

fn to_rat_row(v: &[i64]) -> Vec<(usize, Rat)> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| **x != 0)
        .map(|(j, &x)| (j, Rat::from_integer(x.into())))
        .collect()
}

pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(to_rat_row(r));
    }
    e.rank()
}

/// Leading columns of a row echelon form of `rows`.
pub(crate) fn pivot_columns(rows: &[Vec<i64>]) -> Vec<usize> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(to_rat_row(r));
    }
    e.pivot_columns().collect()
}

/// Indices `0` followed by a greedy choice of rows that raise the rank: for
/// direction vectors taken relative to point 0 these are affinely
/// independent points.
pub(crate) fn independent_subset(dirs: &[Vec<i64>]) -> Vec<usize> {
    let mut e = Echelon::new();
    let mut out = vec![0];
    for (i, r) in dirs.iter().enumerate().skip(1) {
        if let Insert::Pivot(_) = e.insert(to_rat_row(r)) {
            out.push(i);
        }
    }
    out
}

/// Primitive integer vector along a rational one.
pub(crate) fn primitive_integer(v: &[Rat]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            y.to_i64().expect("integer vector entry out of range")
        })
        .collect()
}

/// Integer basis of the orthogonal complement of the span of `rows` in `Z^n`.
pub fn integer_complement(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let nonzero: Vec<Vec<Rat>> = rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
        .collect();
    if nonzero.is_empty() {
        return (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
    }
    let m = RatMatrix::from_rows(nonzero).expect("rectangular");
    m.nullspace().iter().map(|v| primitive_integer(v)).collect()
}

/// Exact determinant of a small square integer matrix.
pub(crate) fn integer_det(rows: &[Vec<i64>]) -> BigInt {
    let m = RatMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
            .collect(),
    )
    .expect("rectangular");
    let d = crate::linalg::exact_determinant(&m).expect("square");
    debug_assert!(d.is_integer());
    d.to_integer()
}
