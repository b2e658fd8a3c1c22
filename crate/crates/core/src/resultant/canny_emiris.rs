//! Canny–Emiris matrices from a regular mixed subdivision.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{Exponent, Rat, SparsePoly};
use crate::polytope::{mixed_subdivision, Lifting, MixedSubdivision, DEFAULT_HEIGHT_BOUND, MAX_RETRIES};

use super::{MacaulayMatrix, Provenance, RowLabel};

/// Denominator exponent of the shift vector coordinates.
const DELTA_BITS: u32 = 10;

#[derive(Debug, Clone)]
pub struct CannyEmirisData {
    pub matrix: MacaulayMatrix,
    /// Lattice points `E` of the shifted Minkowski sum; also the columns.
    pub points: Vec<Exponent>,
    pub delta: Vec<Rat>,
    /// Shift exponents chosen for each polynomial, in row order.
    pub b_sets: Vec<Vec<Exponent>>,
    /// Cell of the subdivision containing `p - delta`, per row.
    pub row_cells: Vec<usize>,
    pub subdivision: MixedSubdivision,
}

impl CannyEmirisData {
    pub fn lifting(&self) -> &Lifting {
        &self.subdivision.lifting
    }
}

/// Small generic shift: coordinates `±r / 2^10` with `1 <= r < 2^9`.
pub fn random_delta(n: usize, seed: u64) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_de17a);
    (0..n)
        .map(|_| {
            let r: i64 = rng.gen_range(1..1 << (DELTA_BITS - 1));
            let s = if rng.gen_bool(0.5) { r } else { -r };
            Rat::new(s.into(), (1i64 << DELTA_BITS).into())
        })
        .collect()
}

/// Builds the matrix for `f_0..f_n` using `lifting` on their supports and the
/// shift vector drawn from `delta_seed`.
pub fn canny_emiris_matrix(fs: &[SparsePoly], lifting: &Lifting, delta_seed: u64) -> Result<CannyEmirisData> {
    let delta = random_delta(fs.first().map_or(0, SparsePoly::nvars), delta_seed);
    canny_emiris_with_delta(fs, lifting, delta)
}

pub(crate) fn canny_emiris_with_delta(fs: &[SparsePoly], lifting: &Lifting, delta: Vec<Rat>) -> Result<CannyEmirisData> {
    let n = fs.first().map_or(0, SparsePoly::nvars);
    if n == 0 || fs.len() != n + 1 || fs.iter().any(|f| f.nvars() != n) {
        return Err(Error::DimensionMismatch(format!(
            "Canny–Emiris matrix needs n + 1 polynomials in n >= 1 variables, got {} in {n}",
            fs.len()
        )));
    }
    if fs.iter().any(SparsePoly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    let supports: Vec<Vec<Exponent>> = fs.iter().map(|f| f.support().into_iter().collect()).collect();
    let sub = mixed_subdivision(&supports, lifting)?;
    if sub.cells.is_empty() {
        return Err(Error::InvalidInput("the Minkowski sum of the supports is not full-dimensional".into()));
    }

    let lo: Vec<i64> = (0..n)
        .map(|j| supports.iter().map(|s| s.iter().map(|a| a.0[j]).min().unwrap()).sum())
        .collect();
    let hi: Vec<i64> = (0..n)
        .map(|j| supports.iter().map(|s| s.iter().map(|a| a.0[j]).max().unwrap()).sum())
        .collect();

    let mut points = Vec::new();
    let mut rows = Vec::new();
    let mut row_cells = Vec::new();
    let mut b_sets = vec![Vec::new(); n + 1];
    let mut p = lo.clone();
    'outer: loop {
        let q: Vec<Rat> = p
            .iter()
            .zip(&delta)
            .map(|(&x, d)| Rat::from_integer(x.into()) - d)
            .collect();
        match sub.locate(&q) {
            Err(()) => return Err(Error::DeltaNotGeneric(p)),
            Ok(None) => {}
            Ok(Some(k)) => {
                let cell = &sub.cells[k];
                let i = (0..=n)
                    .rev()
                    .find(|&i| cell.is_vertex(i))
                    .expect("a fine mixed cell of n + 1 summands has a vertex summand");
                let a = &cell.face_points[i][0];
                let shift = &Exponent(p.clone()) - a;
                b_sets[i].push(shift.clone());
                rows.push(RowLabel { poly: i, shift });
                points.push(Exponent(p.clone()));
                row_cells.push(k);
            }
        }
        let mut j = n;
        loop {
            if j == 0 {
                break 'outer;
            }
            j -= 1;
            if p[j] < hi[j] {
                p[j] += 1;
                break;
            }
            p[j] = lo[j];
        }
    }
    let matrix = MacaulayMatrix::build(fs, rows, points.clone(), Provenance::CannyEmiris)?;
    Ok(CannyEmirisData {
        matrix,
        points,
        delta,
        b_sets,
        row_cells,
        subdivision: sub,
    })
}

/// Random liftings and shift vectors derived from `seed, seed + 1, ...` until
/// both are generic.
pub fn canny_emiris_with_retry(fs: &[SparsePoly], seed: u64) -> Result<CannyEmirisData> {
    let supports: Vec<Vec<Exponent>> = fs.iter().map(|f| f.support().into_iter().collect()).collect();
    let mut last = None;
    for attempt in 0..MAX_RETRIES {
        let s = seed.wrapping_add(attempt);
        let lifting = Lifting::random(&supports, s, DEFAULT_HEIGHT_BOUND);
        match canny_emiris_matrix(fs, &lifting, s) {
            Err(e @ (Error::DegenerateLifting(_) | Error::DeltaNotGeneric(_))) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}
