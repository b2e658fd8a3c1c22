//! Lattice polytopes: Newton polytopes, Minkowski sums, lattice points,
//! mixed volumes and regular mixed subdivisions.

mod hull;
mod intmath;
mod subdivision;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Exponent, Scalar, SparsePoly};

pub use intmath::{integer_complement, integer_rank};
pub use subdivision::{
    mixed_cells, mixed_subdivision, mixed_subdivision_with_retry, normalized_volume, Cell, Lifting,
    Location, MixedCellReport, MixedSubdivision, DEFAULT_HEIGHT_BOUND, MAX_RETRIES,
};

/// Largest ambient dimension accepted by hull and facet enumeration.
pub const MAX_DIM: usize = 4;

/// A half-space `<normal, x> <= offset`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn value(&self, x: &[i64]) -> i64 {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.value(x) <= self.offset
    }
}

/// Convex hull of finitely many integer points, held in both vertex and
/// half-space form.
///
/// When the polytope is not full-dimensional the half-space list contains each
/// defining equation of the affine hull as a pair of opposite inequalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticePolytope {
    ambient: usize,
    dim: usize,
    vertices: Vec<Exponent>,
    facets: Vec<Facet>,
}

impl LatticePolytope {
    /// Convex hull of `points`.
    pub fn from_points<I>(ambient: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = Exponent>,
    {
        if ambient > MAX_DIM {
            return Err(Error::DimensionTooLarge(ambient));
        }
        let pts: BTreeSet<Exponent> = points.into_iter().collect();
        if pts.is_empty() {
            return Err(Error::InvalidInput("empty point set".into()));
        }
        if let Some(p) = pts.iter().find(|p| p.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} in ambient dimension {ambient}",
                p.len()
            )));
        }
        let pts: Vec<Vec<i64>> = pts.into_iter().map(|e| e.0).collect();
        let base = pts[0].clone();
        let dirs: Vec<Vec<i64>> = pts
            .iter()
            .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
            .collect();
        let dim = integer_rank(&dirs);

        let mut facets = Vec::new();
        for w in integer_complement(&dirs, ambient) {
            let c: i64 = w.iter().zip(&base).map(|(a, b)| a * b).sum();
            facets.push(Facet {
                normal: w.iter().map(|x| -x).collect(),
                offset: -c,
            });
            facets.push(Facet { normal: w, offset: c });
        }

        let vertices: Vec<Exponent> = if dim == 0 {
            vec![Exponent(base)]
        } else {
            // Project onto coordinates that are independent on the affine hull.
            let coords = intmath::pivot_columns(&dirs);
            debug_assert_eq!(coords.len(), dim);
            let proj: Vec<Vec<i64>> = pts.iter().map(|p| coords.iter().map(|&j| p[j]).collect()).collect();
            let pdirs: Vec<Vec<i64>> = dirs.iter().map(|d| coords.iter().map(|&j| d[j]).collect()).collect();
            let initial = intmath::independent_subset(&pdirs);
            let pf = hull::facets_full_dim(&proj, &initial);
            for (a, b) in &pf {
                let mut normal = vec![0; ambient];
                for (k, &j) in coords.iter().enumerate() {
                    normal[j] = a[k];
                }
                facets.push(Facet {
                    normal,
                    offset: *b,
                });
            }
            // A point is a vertex when its tight facet normals span the hull.
            pts.iter()
                .zip(&proj)
                .filter(|(_, q)| {
                    let tight: Vec<Vec<i64>> = pf
                        .iter()
                        .filter(|(a, b)| a.iter().zip(q.iter()).map(|(x, y)| x * y).sum::<i64>() == *b)
                        .map(|(a, _)| a.clone())
                        .collect();
                    integer_rank(&tight) == dim
                })
                .map(|(p, _)| Exponent(p.clone()))
                .collect()
        };
        facets.sort();
        facets.dedup();
        let poly = LatticePolytope {
            ambient,
            dim,
            vertices,
            facets,
        };
        poly.check_consistency()?;
        Ok(poly)
    }

    /// `d` times the standard simplex in `R^n`.
    pub fn simplex(n: usize, d: i64) -> Result<Self> {
        let mut pts = vec![Exponent::zero(n)];
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = d;
            pts.push(Exponent(e));
        }
        Self::from_points(n, pts)
    }

    /// The cube `[0, 1]^n`.
    pub fn unit_cube(n: usize) -> Result<Self> {
        let pts = (0..1u32 << n).map(|mask| Exponent((0..n).map(|i| i64::from((mask >> i) & 1)).collect()));
        Self::from_points(n, pts)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    pub fn vertices(&self) -> &[Exponent] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|f| f.contains(x))
    }

    pub fn translate(&self, t: &Exponent) -> Result<Self> {
        Self::from_points(self.ambient, self.vertices.iter().map(|v| v + t))
    }

    /// Integer scaling `k P`.
    pub fn scale(&self, k: i64) -> Result<Self> {
        Self::from_points(
            self.ambient,
            self.vertices.iter().map(|v| Exponent(v.0.iter().map(|x| x * k).collect())),
        )
    }

    /// All integer points of the polytope, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<Exponent> {
        let n = self.ambient;
        let lo: Vec<i64> = (0..n).map(|j| self.vertices.iter().map(|v| v.0[j]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..n).map(|j| self.vertices.iter().map(|v| v.0[j]).max().unwrap()).collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.contains(&cur) {
                out.push(Exponent(cur.clone()));
            }
            // Odometer over the bounding box, last coordinate fastest.
            let mut j = n;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                if cur[j] < hi[j] {
                    cur[j] += 1;
                    break;
                }
                cur[j] = lo[j];
            }
        }
    }

    /// Vertex list as JSON: `{"dim": k, "vertices": [[..], ..]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ambient_dim": self.ambient,
            "dim": self.dim,
            "vertices": self.vertices.iter().map(|v| v.0.clone()).collect::<Vec<_>>(),
            "facets": self.facets.iter().map(|f| serde_json::json!({"normal": f.normal, "offset": f.offset})).collect::<Vec<_>>(),
        })
    }

    fn check_consistency(&self) -> Result<()> {
        for v in &self.vertices {
            if !self.contains(&v.0) {
                return Err(Error::InvalidInput(format!("vertex {:?} violates a facet", v.0)));
            }
        }
        if self.is_full_dimensional() && self.dim > 0 {
            for v in &self.vertices {
                let tight = self.facets.iter().filter(|f| f.value(&v.0) == f.offset).count();
                if tight < self.dim {
                    return Err(Error::InvalidInput(format!("vertex {:?} lies on too few facets", v.0)));
                }
            }
            for f in &self.facets {
                let tight = self.vertices.iter().filter(|v| f.value(&v.0) == f.offset).count();
                if tight < self.dim {
                    return Err(Error::InvalidInput("facet spanned by too few vertices".into()));
                }
            }
        }
        Ok(())
    }
}

/// Newton polytope: the convex hull of the support.
pub fn newton_polytope<C: Scalar>(f: &SparsePoly<C>) -> Result<LatticePolytope> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    LatticePolytope::from_points(f.nvars(), f.support())
}

pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    if p.ambient != q.ambient {
        return Err(Error::DimensionMismatch(format!(
            "Minkowski sum of polytopes in R^{} and R^{}",
            p.ambient, q.ambient
        )));
    }
    let sums = p
        .vertices
        .iter()
        .flat_map(|v| q.vertices.iter().map(move |w| v + w));
    LatticePolytope::from_points(p.ambient, sums)
}

/// Minkowski sum of a nonempty list.
pub fn minkowski_sum_all(ps: &[&LatticePolytope]) -> Result<LatticePolytope> {
    let (first, rest) = ps
        .split_first()
        .ok_or_else(|| Error::InvalidInput("empty Minkowski sum".into()))?;
    rest.iter()
        .try_fold((*first).clone(), |acc, p| minkowski_sum(&acc, p))
}

/// Lattice-point count of one partial Minkowski sum in the mixed-volume formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetCount {
    pub subset: Vec<usize>,
    pub lattice_points: usize,
}

/// Mixed volume with the per-subset lattice counts used to evaluate it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedVolumeReport {
    pub mixed_volume: u64,
    pub counts: Vec<SubsetCount>,
}

/// Mixed volume of `n` lattice polytopes in `R^n` by inclusion–exclusion over
/// lattice-point counts of partial Minkowski sums.
pub fn mixed_volume(ps: &[LatticePolytope]) -> Result<u64> {
    mixed_volume_report(ps).map(|r| r.mixed_volume)
}

pub fn mixed_volume_report(ps: &[LatticePolytope]) -> Result<MixedVolumeReport> {
    let n = ps.first().map_or(0, |p| p.ambient);
    if ps.len() != n || ps.iter().any(|p| p.ambient != n) || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "mixed volume needs n polytopes in R^n, got {} polytopes in R^{n}",
            ps.len()
        )));
    }
    let mut total: i64 = if n.is_multiple_of(2) { 1 } else { -1 };
    let mut counts = Vec::new();
    for mask in 1u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let members: Vec<&LatticePolytope> = subset.iter().map(|&i| &ps[i]).collect();
        let sum = minkowski_sum_all(&members)?;
        let count = sum.lattice_points().len();
        let sign = if (n - subset.len()).is_multiple_of(2) { 1 } else { -1 };
        total += sign * count as i64;
        counts.push(SubsetCount {
            subset,
            lattice_points: count,
        });
    }
    debug_assert!(total >= 0);
    Ok(MixedVolumeReport {
        mixed_volume: total.max(0) as u64,
        counts,
    })
}
