use crate::error::{Error, Result};
use crate::poly::{Exponent, PolySystem, SparsePoly};
use crate::polytope::{newton_polytope, LatticePolytope};

use super::algebra::{build_algebra, GradedSemigroupAlgebra};
use super::order::Degree;

/// `f_i` read as an element of the degree-`d_i` piece.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogenizedPoly {
    /// Terms `c x^alpha`, standing for `c x^(alpha, degree)`.
    pub poly: SparsePoly,
    pub degree: Degree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogenizedSystem {
    pub algebra: GradedSemigroupAlgebra,
    pub polys: Vec<HomogenizedPoly>,
    /// Monomial each input polynomial was divided by before homogenizing.
    pub shifts: Vec<Exponent>,
    pub vars: Vec<String>,
}

impl HomogenizedSystem {
    pub fn nvars(&self) -> usize {
        self.algebra.nvars()
    }

    /// `sum_i d_i`.
    pub fn total_degree(&self) -> Degree {
        let mut b = vec![0; self.algebra.rank()];
        for p in &self.polys {
            for (x, y) in b.iter_mut().zip(&p.degree) {
                *x += y;
            }
        }
        b
    }

    /// The same polynomials over the algebra with `Delta_n` appended, in degree 0 of it.
    pub fn with_simplex(&self) -> Result<Self> {
        let mut polys = self.polys.clone();
        for p in &mut polys {
            p.degree.push(0);
        }
        Ok(HomogenizedSystem {
            algebra: self.algebra.with_simplex()?,
            polys,
            shifts: self.shifts.clone(),
            vars: self.vars.clone(),
        })
    }

    /// The dehomogenized polynomials (after the shifts).
    pub fn affine_system(&self) -> Result<PolySystem> {
        PolySystem::new(self.vars.clone(), self.polys.iter().map(|p| p.poly.clone()).collect())
    }
}

/// Homogenizes `sys` in the given degrees without translating supports.
pub fn homogenize_system(sys: &PolySystem, alg: &GradedSemigroupAlgebra, degrees: &[Degree]) -> Result<HomogenizedSystem> {
    homogenize_shifted(sys, alg, degrees, vec![Exponent::zero(sys.nvars()); sys.len()])
}

fn homogenize_shifted(
    sys: &PolySystem,
    alg: &GradedSemigroupAlgebra,
    degrees: &[Degree],
    shifts: Vec<Exponent>,
) -> Result<HomogenizedSystem> {
    if sys.nvars() != alg.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "system in {} variables, algebra over Z^{}",
            sys.nvars(),
            alg.nvars()
        )));
    }
    if degrees.len() != sys.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} degrees for {} polynomials",
            degrees.len(),
            sys.len()
        )));
    }
    let mut polys = Vec::with_capacity(sys.len());
    for (index, ((f, d), s)) in sys.polys().iter().zip(degrees).zip(&shifts).enumerate() {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let piece = alg.piece(d)?;
        let g = f.shift(&(&Exponent::zero(f.nvars()) - s));
        if g.terms().any(|(e, _)| !piece.contains(e.coords())) {
            return Err(Error::SupportEscapes { index });
        }
        polys.push(HomogenizedPoly {
            poly: g,
            degree: d.clone(),
        });
    }
    Ok(HomogenizedSystem {
        algebra: alg.clone(),
        polys,
        shifts,
        vars: sys.vars().to_vec(),
    })
}

/// Each Newton polytope as its own summand, translated so its
/// lexicographically smallest vertex is `0`, with `d_i = e_i`.
pub fn default_setup(sys: &PolySystem) -> Result<HomogenizedSystem> {
    let m = sys.len();
    let mut summands = Vec::with_capacity(m);
    let mut shifts = Vec::with_capacity(m);
    for f in sys.polys() {
        let p = newton_polytope(f)?;
        let v = p.vertices().iter().min().expect("nonempty").clone();
        summands.push(p.translate(&(&Exponent::zero(f.nvars()) - &v))?);
        shifts.push(v);
    }
    let alg = build_algebra(summands)?;
    let degrees: Vec<Degree> = (0..m)
        .map(|i| {
            let mut d = vec![0; m];
            d[i] = 1;
            d
        })
        .collect();
    homogenize_shifted(sys, &alg, &degrees, shifts)
}

/// Classical homogenization: one simplex summand and `d_i = deg f_i`.
pub fn dense_setup(sys: &PolySystem) -> Result<HomogenizedSystem> {
    let n = sys.nvars();
    let mut degrees = Vec::with_capacity(sys.len());
    for f in sys.polys() {
        if f.terms().any(|(e, _)| !e.is_nonnegative()) {
            return Err(Error::InvalidInput("dense setup needs polynomial (not Laurent) input".into()));
        }
        let d = f.total_degree().ok_or(Error::ZeroPolynomial)?;
        degrees.push(vec![d as u32]);
    }
    let alg = build_algebra(vec![LatticePolytope::simplex(n, 1)?])?;
    homogenize_system(sys, &alg, &degrees)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(texts: &[&str], vars: &[&str]) -> PolySystem {
        PolySystem::parse(texts, vars.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn linear_form_in_the_simplex() {
        let h = dense_setup(&sys(&["x + y - 1"], &["x", "y"])).unwrap();
        assert_eq!(h.polys[0].degree, vec![1]);
        assert_eq!(h.polys[0].poly.len(), 3);
        assert_eq!(h.algebra.monomials(&[1]).unwrap().len(), 3);
    }

    #[test]
    fn pencil_equation_fills_the_square() {
        let s = sys(&["1 + 3*l + 2*w + 4*l*w"], &["l", "w"]);
        let alg = build_algebra(vec![LatticePolytope::unit_cube(2).unwrap()]).unwrap();
        let h = homogenize_system(&s, &alg, &[vec![1]]).unwrap();
        assert_eq!(h.polys[0].poly.len(), 4);
        assert_eq!(h.algebra.monomials(&[1]).unwrap().len(), 4);
    }

    #[test]
    fn escaping_support_is_an_error() {
        let s = sys(&["x^2"], &["x", "y"]);
        let alg = build_algebra(vec![LatticePolytope::simplex(2, 1).unwrap()]).unwrap();
        assert_eq!(homogenize_system(&s, &alg, &[vec![1]]), Err(Error::SupportEscapes { index: 0 }));
    }

    #[test]
    fn default_setup_translates_laurent_supports() {
        let s = sys(&["x^-1*y + x + 2", "y - 3"], &["x", "y"]);
        let h = default_setup(&s).unwrap();
        assert_eq!(h.shifts[0], Exponent(vec![-1, 1]));
        assert_eq!(h.polys[1].degree, vec![0, 1]);
        assert!(h.polys[0].poly.terms().any(|(e, _)| *e == Exponent::zero(2)));
    }
}
