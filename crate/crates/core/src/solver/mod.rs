//! Numerical root extraction from exact multiplication matrices.

mod bilinear;
mod newton;
mod schur;
mod torus;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::PolySystem;

pub use bilinear::{solve_bilinear_koszul, BilinearSolve};
pub use newton::newton_polish;
pub use schur::{schur_multiplication_matrix, split_canny_emiris, BlockSplit, MultiplicationMatrix, SchurEngine};
pub use torus::{anchored_lifting, solve_torus, solve_torus_detailed, SolveOptions, TorusSolve, DEFAULT_SEED};

/// Scale-invariant residual `max_i |f_i(p)| / sum_a |c_{i,a}| |p^a|`.
pub fn residual(sys: &PolySystem, p: &[Complex64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for f in sys.polys() {
        if f.is_zero() {
            return Err(Error::InvalidInput("residual of the zero polynomial is undefined".into()));
        }
        let v = f.evaluate(p)?.norm();
        let s = f.evaluation_scale(p)?;
        let r = if s > 0.0 { v / s } else { 0.0 };
        worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
    }
    Ok(worst)
}

/// A point that failed the residual filter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectedPoint {
    #[serde(serialize_with = "ser_point")]
    pub point: Vec<Complex64>,
    pub residual: f64,
}

/// Approximate torus roots with their residuals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionSet {
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
    /// Number of merged eigenvalues behind each point.
    pub multiplicities: Vec<usize>,
    pub rejected: Vec<RejectedPoint>,
    pub warnings: Vec<String>,
    pub mv: u64,
    pub seed: u64,
}

impl SolutionSet {
    /// Points counted with multiplicity.
    pub fn count(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn all_within(&self, tol: f64) -> bool {
        self.rejected.is_empty() && self.residuals.iter().all(|&r| r <= tol)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

#[derive(Serialize)]
struct C {
    re: f64,
    im: f64,
}

fn ser_point<S: serde::Serializer>(p: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.len()))?;
    for z in p {
        seq.serialize_element(&C { re: z.re, im: z.im })?;
    }
    seq.end()
}

fn ser_points<S: serde::Serializer>(ps: &[Vec<Complex64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(ps.len()))?;
    for p in ps {
        let cs: Vec<C> = p.iter().map(|z| C { re: z.re, im: z.im }).collect();
        seq.serialize_element(&cs)?;
    }
    seq.end()
}
