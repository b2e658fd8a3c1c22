use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::poly::Exponent;

/// Multidegree in `N^r`.
pub type Degree = Vec<u32>;

/// Order on exponent vectors inside one graded piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    /// Total degree, ties broken by the smaller power of the last differing
    /// variable winning.
    #[default]
    GRevLex,
    /// Lexicographic with the last variable largest: `x_n > ... > x_1`.
    /// Elimination therefore leaves a polynomial in `x_1` alone.
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Exponent, b: &Exponent) -> Ordering {
        match self {
            MonomialOrder::GRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
            MonomialOrder::Lex => a.0.iter().rev().cmp(b.0.iter().rev()),
        }
    }
}

impl FromStr for MonomialOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "grevlex" => Ok(MonomialOrder::GRevLex),
            "lex" => Ok(MonomialOrder::Lex),
            other => Err(Error::InvalidInput(format!("unknown monomial order `{other}`"))),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonomialOrder::GRevLex => "grevlex",
            MonomialOrder::Lex => "lex",
        })
    }
}

/// Graded lexicographic order on multidegrees.
pub fn cmp_degree(a: &[u32], b: &[u32]) -> Ordering {
    let ta: u64 = a.iter().map(|&x| x as u64).sum();
    let tb: u64 = b.iter().map(|&x| x as u64).sum();
    ta.cmp(&tb).then_with(|| a.cmp(b))
}

/// Compares `(alpha, b)` by the degree first, then by `order` on `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GradedMonomialOrder {
    pub order: MonomialOrder,
}

impl GradedMonomialOrder {
    pub fn cmp(&self, a: (&Exponent, &[u32]), b: (&Exponent, &[u32])) -> Ordering {
        cmp_degree(a.1, b.1).then_with(|| self.order.cmp(a.0, b.0))
    }
}

/// `b - d` if `d <= b` componentwise.
pub fn degree_sub(b: &[u32], d: &[u32]) -> Option<Degree> {
    b.iter().zip(d).map(|(x, y)| x.checked_sub(*y)).collect()
}

pub fn degree_add(b: &[u32], d: &[u32]) -> Degree {
    b.iter().zip(d).map(|(x, y)| x + y).collect()
}

/// All degrees `0 <= c <= b`, sorted increasingly by [`cmp_degree`].
pub fn degrees_below(b: &[u32]) -> Vec<Degree> {
    let mut out = vec![vec![]];
    for &bk in b {
        out = out
            .into_iter()
            .flat_map(|p: Degree| {
                (0..=bk).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out.sort_by(|x, y| cmp_degree(x, y));
    out
}
