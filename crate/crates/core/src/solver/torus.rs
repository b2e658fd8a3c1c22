//! Square sparse systems on the torus via Canny–Emiris matrices and Schur
//! complements.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{eigen::cluster_values, eigen_decomposition, CMatrix, EigenDecomposition};
use crate::poly::{Exponent, PolySystem, Rat, SparsePoly};
use crate::polytope::{
    mixed_subdivision, mixed_volume, newton_polytope, Lifting, DEFAULT_HEIGHT_BOUND, MAX_RETRIES,
};
use crate::resultant::{canny_emiris_matrix, CannyEmirisData};

use super::newton::newton_polish;
use super::schur::{split_canny_emiris, MultiplicationMatrix, SchurEngine};
use super::{residual, RejectedPoint, SolutionSet};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_211_104;
/// Bound on the magnitude of the random coefficients of `f_0`.
const F0_BOUND: i64 = 1 << 16;
/// Relative distance below which eigenvalues are merged.
const CLUSTER_TOL: f64 = 1e-6;
const POLISH_STEPS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub seed: u64,
    pub tol: f64,
    /// Refine recovered points with Newton steps that lower the residual.
    pub polish: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: DEFAULT_SEED,
            tol: 1e-8,
            polish: true,
        }
    }
}

/// Everything produced along the way to a [`SolutionSet`].
#[derive(Debug, Clone)]
pub struct TorusSolve {
    pub solutions: SolutionSet,
    /// The random linear form `f_0` appended to the system.
    pub f0: SparsePoly,
    pub canny_emiris: CannyEmirisData,
    pub m_f0: MultiplicationMatrix,
    pub eigen: EigenDecomposition,
    /// Seed offset of the lifting and shift that succeeded.
    pub attempt: u64,
}

/// Lifting of `A_0 = {0, e_1, .., e_n}` followed by random liftings of the
/// other supports. `A_0` is lifted steeply enough that every mixed cell of
/// the remaining supports picks the vertex `0` of `A_0`, so the `f_0` rows of
/// the Canny–Emiris matrix are unshifted and their columns form `B_0`.
pub fn anchored_lifting(rest: &[Vec<Exponent>], n: usize, seed: u64) -> Result<Lifting> {
    let lift_rest = Lifting::random(rest, seed, DEFAULT_HEIGHT_BOUND);
    let sub = mixed_subdivision(rest, &lift_rest)?;
    let mut k = BigInt::from(1);
    for cell in &sub.cells {
        for u in &cell.normal {
            let need = (-u).ceil().to_integer() + 1;
            if need > k {
                k = need;
            }
        }
    }
    let k = k.to_i64().ok_or_else(|| Error::InvalidInput("lifting heights overflow".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa0a0);
    let mut a0 = BTreeMap::new();
    a0.insert(Exponent::zero(n), 0);
    for j in 0..n {
        a0.insert(Exponent::unit(n, j), k + rng.gen_range(0..=1 << 10));
    }
    let mut maps = vec![a0];
    maps.extend(lift_rest.maps().iter().cloned());
    Ok(Lifting::from_maps(maps))
}

fn random_linear_form(n: usize, seed: u64) -> SparsePoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf0f0);
    let mut draw = || loop {
        let v: i64 = rng.gen_range(-F0_BOUND..=F0_BOUND);
        if v != 0 {
            return Rat::from_integer(v.into());
        }
    };
    let mut f = SparsePoly::constant(n, draw());
    for j in 0..n {
        f.add_term(Exponent::unit(n, j), draw());
    }
    f
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `diag(Z^* M Z)`: values of the multiplier at the roots in Schur order.
fn schur_diagonal(z: &CMatrix, m: &CMatrix) -> Vec<Complex64> {
    let n = z.dim();
    let mz = m.mul(z);
    (0..n)
        .map(|k| {
            let zk: Vec<Complex64> = (0..n).map(|i| z[(i, k)]).collect();
            let mzk: Vec<Complex64> = (0..n).map(|i| mz[(i, k)]).collect();
            dot(&zk, &mzk)
        })
        .collect()
}

/// Solves a square system with positive mixed volume.
pub fn solve_torus(sys: &PolySystem, opts: &SolveOptions) -> Result<SolutionSet> {
    solve_torus_detailed(sys, opts).map(|d| d.solutions)
}

pub fn solve_torus_detailed(sys: &PolySystem, opts: &SolveOptions) -> Result<TorusSolve> {
    let n = sys.nvars();
    if !sys.is_square() || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "need n polynomials in n >= 1 variables, got {} in {n}",
            sys.len()
        )));
    }
    if sys.polys().iter().any(SparsePoly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    let polytopes = sys.polys().iter().map(newton_polytope).collect::<Result<Vec<_>>>()?;
    let mv = mixed_volume(&polytopes)?;
    if mv == 0 {
        return Err(Error::ZeroMixedVolume);
    }

    let f0 = random_linear_form(n, opts.seed);
    let mut fs = vec![f0.clone()];
    fs.extend(sys.polys().iter().cloned());
    let rest: Vec<Vec<Exponent>> = sys.polys().iter().map(|f| f.support().into_iter().collect()).collect();

    let mut last_err = Error::SingularM11;
    for attempt in 0..MAX_RETRIES {
        let s = opts.seed.wrapping_add(attempt);
        let built = anchored_lifting(&rest, n, s).and_then(|lifting| {
            let ce = canny_emiris_matrix(&fs, &lifting, s)?;
            let split = split_canny_emiris(&ce)?;
            let engine = SchurEngine::new(&split)?;
            let m_f0 = engine.schur_complement(&split, "f0")?;
            Ok((ce, engine, m_f0))
        });
        match built {
            Ok((ce, engine, m_f0)) => {
                let (solutions, eigen) = extract_points(sys, &engine, &m_f0, mv, opts)?;
                return Ok(TorusSolve {
                    solutions,
                    f0,
                    canny_emiris: ce,
                    m_f0,
                    eigen,
                    attempt,
                });
            }
            Err(e @ (Error::SingularM11 | Error::DegenerateLifting(_) | Error::DeltaNotGeneric(_))) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(match last_err {
        Error::SingularM11 => Error::SingularM11,
        other => other,
    })
}

fn extract_points(
    sys: &PolySystem,
    engine: &SchurEngine,
    m_f0: &MultiplicationMatrix,
    mv: u64,
    opts: &SolveOptions,
) -> Result<(SolutionSet, EigenDecomposition)> {
    let n = sys.nvars();
    let basis = engine.basis();
    let pos: HashMap<&Exponent, usize> = basis.iter().enumerate().map(|(k, e)| (e, k)).collect();
    let eig = eigen_decomposition(&m_f0.to_complex())?;
    let scale = eig.values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let groups = cluster_values(&eig.values, CLUSTER_TOL * scale);
    let mut in_cluster = vec![false; basis.len()];
    for g in groups.iter().filter(|g| g.len() > 1) {
        for &k in g {
            in_cluster[k] = true;
        }
    }

    // Coordinates from ratios v_{b+e_i} / v_b of eigenvector entries.
    let mut coords: Vec<Vec<Option<Complex64>>> = vec![vec![None; n]; basis.len()];
    for (k, v) in eig.vectors.iter().enumerate() {
        if in_cluster[k] {
            continue;
        }
        let vmax = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (i, slot) in coords[k].iter_mut().enumerate() {
            let best = basis
                .iter()
                .filter_map(|b| {
                    let up = pos.get(&(b + &Exponent::unit(n, i)))?;
                    Some((pos[b], *up))
                })
                .max_by(|a, b| v[a.0].norm().total_cmp(&v[b.0].norm()));
            if let Some((lo, hi)) = best {
                if v[lo].norm() > 1e-8 * vmax {
                    *slot = Some(v[hi] / v[lo]);
                }
            }
        }
    }
    // Missing coordinates: read the diagonal of M_{x_i} in the Schur basis of M_{f0}.
    for i in 0..n {
        if coords.iter().all(|c| c[i].is_some()) {
            continue;
        }
        let xi = SparsePoly::monomial(n, Exponent::unit(n, i), Rat::from_integer(1.into()));
        let m = engine
            .multiplication_matrix(&xi, &format!("x{}", i + 1))
            .map_err(|_| Error::CoordinateRecoveryFailed(i))?;
        let diag = schur_diagonal(&eig.schur.z, &m.to_complex());
        for (k, c) in coords.iter_mut().enumerate() {
            if c[i].is_none() {
                c[i] = Some(diag[k]);
            }
        }
    }

    let mut set = SolutionSet {
        points: Vec::new(),
        residuals: Vec::new(),
        multiplicities: Vec::new(),
        rejected: Vec::new(),
        warnings: Vec::new(),
        mv,
        seed: opts.seed,
    };
    if eig.defective {
        set.warnings.push("multiplication matrix is defective; multiple roots are reported once".into());
    }
    for g in &groups {
        let mut p = vec![Complex64::new(0.0, 0.0); n];
        for &k in g {
            for i in 0..n {
                p[i] += coords[k][i].ok_or(Error::CoordinateRecoveryFailed(i))?;
            }
        }
        for z in &mut p {
            *z /= g.len() as f64;
        }
        let mut r = residual(sys, &p).unwrap_or(f64::INFINITY);
        if opts.polish && g.len() == 1 {
            let (q, rq) = newton_polish(sys, &p, POLISH_STEPS);
            if rq < r {
                p = q;
                r = rq;
            }
        }
        if g.len() > 1 {
            set.warnings.push(format!("eigenvalue of multiplicity {} merged", g.len()));
        }
        if p.iter().any(|z| z.norm() == 0.0 || !z.is_finite()) || r > opts.tol {
            set.rejected.push(RejectedPoint { point: p, residual: r });
        } else {
            set.points.push(p);
            set.residuals.push(r);
            set.multiplicities.push(g.len());
        }
    }
    Ok((set, eig))
}
