use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poly::Exponent;
use crate::polytope::{minkowski_sum, LatticePolytope};

use super::order::{degree_sub, Degree};

/// The algebra spanned by `(alpha, b)` with `alpha` a lattice point of
/// `b_1 Q_1 + ... + b_r Q_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedSemigroupAlgebra {
    summands: Vec<LatticePolytope>,
    nvars: usize,
}

/// Checks that every summand has `0` as a vertex.
pub fn build_algebra(summands: Vec<LatticePolytope>) -> Result<GradedSemigroupAlgebra> {
    let first = summands
        .first()
        .ok_or_else(|| Error::InvalidInput("an algebra needs at least one summand".into()))?;
    let nvars = first.ambient_dim();
    for (k, q) in summands.iter().enumerate() {
        if q.ambient_dim() != nvars {
            return Err(Error::DimensionMismatch(format!(
                "summand {k} lives in R^{} but summand 0 in R^{nvars}",
                q.ambient_dim()
            )));
        }
        if !q.vertices().contains(&Exponent::zero(nvars)) {
            return Err(Error::InvalidInput(format!("summand {k} does not have 0 as a vertex")));
        }
    }
    Ok(GradedSemigroupAlgebra { summands, nvars })
}

impl GradedSemigroupAlgebra {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Rank of the grading.
    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn summands(&self) -> &[LatticePolytope] {
        &self.summands
    }

    /// `b_1 Q_1 + ... + b_r Q_r`.
    pub fn piece(&self, b: &[u32]) -> Result<LatticePolytope> {
        if b.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "degree of length {} in an algebra of rank {}",
                b.len(),
                self.rank()
            )));
        }
        let mut acc = LatticePolytope::from_points(self.nvars, [Exponent::zero(self.nvars)])?;
        for (q, &bk) in self.summands.iter().zip(b) {
            if bk > 0 {
                acc = minkowski_sum(&acc, &q.scale(bk as i64)?)?;
            }
        }
        Ok(acc)
    }

    /// Exponents of the degree-`b` monomials, in lexicographic order.
    pub fn monomials(&self, b: &[u32]) -> Result<Vec<Exponent>> {
        Ok(self.piece(b)?.lattice_points())
    }

    /// The same algebra with the standard simplex appended as a summand.
    pub fn with_simplex(&self) -> Result<Self> {
        let mut summands = self.summands.clone();
        summands.push(LatticePolytope::simplex(self.nvars, 1)?);
        Ok(GradedSemigroupAlgebra { summands, nvars: self.nvars })
    }
}

/// Memoized graded pieces of one algebra.
#[derive(Debug)]
pub(crate) struct PieceCache<'a> {
    alg: &'a GradedSemigroupAlgebra,
    pieces: HashMap<Degree, LatticePolytope>,
    monomials: HashMap<Degree, Vec<Exponent>>,
}

impl<'a> PieceCache<'a> {
    pub fn new(alg: &'a GradedSemigroupAlgebra) -> Self {
        PieceCache {
            alg,
            pieces: HashMap::new(),
            monomials: HashMap::new(),
        }
    }

    pub fn piece(&mut self, b: &[u32]) -> Result<&LatticePolytope> {
        if !self.pieces.contains_key(b) {
            let p = self.alg.piece(b)?;
            self.pieces.insert(b.to_vec(), p);
        }
        Ok(&self.pieces[b])
    }

    pub fn monomials(&mut self, b: &[u32]) -> Result<&[Exponent]> {
        if !self.monomials.contains_key(b) {
            let m = self.piece(b)?.lattice_points();
            self.monomials.insert(b.to_vec(), m);
        }
        Ok(&self.monomials[b])
    }

    pub fn contains(&mut self, alpha: &Exponent, b: &[u32]) -> Result<bool> {
        Ok(self.piece(b)?.contains(alpha.coords()))
    }

    /// Whether `(a, da)` divides `(c, dc)` in the semigroup.
    pub fn divides(&mut self, a: (&Exponent, &[u32]), c: (&Exponent, &[u32])) -> Result<bool> {
        match degree_sub(c.1, a.1) {
            None => Ok(false),
            Some(q) => self.contains(&(c.0 - a.0), &q),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> LatticePolytope {
        LatticePolytope::unit_cube(2).unwrap()
    }

    #[test]
    fn simplex_gives_standard_homogenization() {
        let alg = build_algebra(vec![LatticePolytope::simplex(2, 1).unwrap()]).unwrap();
        for b in 0..5u32 {
            let k = b as usize;
            assert_eq!(alg.monomials(&[b]).unwrap().len(), (k + 1) * (k + 2) / 2);
        }
    }

    #[test]
    fn unit_square_pieces() {
        let alg = build_algebra(vec![square()]).unwrap();
        for b in 0..5u32 {
            assert_eq!(alg.monomials(&[b]).unwrap().len(), ((b + 1) * (b + 1)) as usize);
        }
    }

    #[test]
    fn summand_without_origin_vertex_is_rejected() {
        let shifted = square().translate(&Exponent(vec![1, 0])).unwrap();
        assert!(build_algebra(vec![shifted]).is_err());
        let seg = LatticePolytope::from_points(2, [Exponent(vec![-1, 0]), Exponent(vec![1, 0])]).unwrap();
        assert!(build_algebra(vec![seg]).is_err());
    }

    #[test]
    fn mixed_pieces_and_divisibility() {
        let seg = LatticePolytope::from_points(2, [Exponent(vec![0, 0]), Exponent(vec![1, 0])]).unwrap();
        let tri = LatticePolytope::simplex(2, 1).unwrap();
        let alg = build_algebra(vec![seg, tri]).unwrap();
        // [0,1] x {0} + Delta_2 has 5 lattice points.
        assert_eq!(alg.monomials(&[1, 1]).unwrap().len(), 5);
        let mut cache = PieceCache::new(&alg);
        let x = Exponent(vec![1, 0]);
        let y = Exponent(vec![0, 1]);
        assert!(cache.divides((&x, &[1, 0]), (&x, &[1, 1])).unwrap());
        assert!(!cache.divides((&y, &[0, 1]), (&y, &[1, 0])).unwrap());
        assert!(!cache.divides((&x, &[1, 0]), (&(&x + &y), &[2, 0])).unwrap());
    }
}
