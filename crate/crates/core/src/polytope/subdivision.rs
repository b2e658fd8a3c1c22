//! Regular mixed subdivisions induced by integer liftings.
//!
//! Each point `a` of support `A_i` is lifted to `(a, w_i(a))`. For a linear
//! functional `u` the lower face of the lifted Minkowski sum selects, in every
//! summand, the points minimizing `<u, a> + w_i(a)`. Cells are the faces of
//! full dimension; they are enumerated by walking from facet to facet across
//! shared ridges.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::intmath::{integer_complement, integer_det, integer_rank};
use super::LatticePolytope;
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::{format_rational, Exponent, Rat};

pub const DEFAULT_HEIGHT_BOUND: i64 = 1 << 20;
/// Liftings tried by the retrying entry points before giving up.
pub const MAX_RETRIES: u64 = 16;

/// Integer heights for every point of every support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifting {
    heights: Vec<BTreeMap<Exponent, i64>>,
    seed: Option<u64>,
    bound: i64,
}

impl Lifting {
    /// Heights drawn uniformly from `[0, bound]`, reproducible from `seed`.
    pub fn random(supports: &[Vec<Exponent>], seed: u64, bound: i64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let heights = supports
            .iter()
            .map(|s| {
                let pts: std::collections::BTreeSet<&Exponent> = s.iter().collect();
                pts.into_iter().map(|a| (a.clone(), rng.gen_range(0..=bound))).collect()
            })
            .collect();
        Lifting {
            heights,
            seed: Some(seed),
            bound,
        }
    }

    /// Explicit heights, one map per support.
    pub fn from_maps(heights: Vec<BTreeMap<Exponent, i64>>) -> Self {
        let bound = heights.iter().flat_map(|m| m.values()).copied().max().unwrap_or(0);
        Lifting {
            heights,
            seed: None,
            bound,
        }
    }

    /// Explicit heights listed in the order of each support's points.
    pub fn from_heights(supports: &[Vec<Exponent>], heights: &[Vec<i64>]) -> Result<Self> {
        if supports.len() != heights.len() || supports.iter().zip(heights).any(|(s, h)| s.len() != h.len()) {
            return Err(Error::DimensionMismatch("one height per support point required".into()));
        }
        Ok(Self::from_maps(
            supports
                .iter()
                .zip(heights)
                .map(|(s, h)| s.iter().cloned().zip(h.iter().copied()).collect())
                .collect(),
        ))
    }

    pub fn height(&self, i: usize, a: &Exponent) -> Option<i64> {
        self.heights.get(i)?.get(a).copied()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn maps(&self) -> &[BTreeMap<Exponent, i64>] {
        &self.heights
    }
}

/// Position of a point relative to a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

/// A full-dimensional cell `F_0 + ... + F_m` of a mixed subdivision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    /// Indices into the sorted supports, one nonempty set per summand.
    pub faces: Vec<Vec<usize>>,
    /// The points of each summand face.
    pub face_points: Vec<Vec<Exponent>>,
    /// Functional `u` whose lifted minimizers are exactly the faces.
    pub normal: Vec<Rat>,
    /// `|det|` of the edge vectors `a - a_0` of all faces.
    pub edge_det: u64,
    /// `n!` times the Euclidean volume.
    pub normalized_volume: u64,
    base: Vec<Rat>,
    coords: RatMatrix,
}

impl Cell {
    /// Summand `i` contributes a single vertex.
    pub fn is_vertex(&self, i: usize) -> bool {
        self.faces[i].len() == 1
    }

    /// Every summand contributes an edge.
    pub fn is_mixed(&self) -> bool {
        self.faces.iter().all(|f| f.len() == 2)
    }

    /// Face dimensions `|F_i| - 1`.
    pub fn face_dims(&self) -> Vec<usize> {
        self.faces.iter().map(|f| f.len() - 1).collect()
    }

    /// Locates `q` using the barycentric coordinates of each summand simplex.
    pub fn locate(&self, q: &[Rat]) -> Location {
        let rhs: Vec<Rat> = q.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        let lam = self.coords.mul_vec(&rhs);
        let mut boundary = false;
        let mut k = 0;
        for f in &self.faces {
            let mut sum = Rat::zero();
            for _ in 1..f.len() {
                let l = &lam[k];
                k += 1;
                if l.is_negative() {
                    return Location::Outside;
                }
                if l.is_zero() {
                    boundary = true;
                }
                sum += l;
            }
            let one = Rat::from_integer(1.into());
            if sum > one {
                return Location::Outside;
            }
            if f.len() > 1 && sum == one {
                boundary = true;
            }
        }
        if boundary {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "faces": self.face_points.iter().map(|f| f.iter().map(|e| e.0.clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "normal": self.normal.iter().map(format_rational).collect::<Vec<_>>(),
            "normalized_volume": self.normalized_volume,
            "mixed": self.is_mixed(),
        })
    }
}

/// Cells of a regular mixed subdivision, sorted canonically by their faces.
#[derive(Debug, Clone)]
pub struct MixedSubdivision {
    pub dim: usize,
    pub supports: Vec<Vec<Exponent>>,
    pub lifting: Lifting,
    pub cells: Vec<Cell>,
}

impl MixedSubdivision {
    pub fn total_normalized_volume(&self) -> u64 {
        self.cells.iter().map(|c| c.normalized_volume).sum()
    }

    /// The unique cell containing `q` in its interior. `Ok(None)` when `q` is
    /// outside the subdivided polytope, and `Err(())` when it lies on a wall.
    pub fn locate(&self, q: &[Rat]) -> std::result::Result<Option<usize>, ()> {
        let mut on_wall = false;
        for (k, c) in self.cells.iter().enumerate() {
            match c.locate(q) {
                Location::Interior => return Ok(Some(k)),
                Location::Boundary => on_wall = true,
                Location::Outside => {}
            }
        }
        if on_wall {
            Err(())
        } else {
            Ok(None)
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "seed": self.lifting.seed(),
            "cells": self.cells.iter().map(Cell::to_json).collect::<Vec<_>>(),
        })
    }
}

struct Walker {
    n: usize,
    pts: Vec<Vec<Vec<i64>>>,
    heights: Vec<Vec<Rat>>,
}

type Faces = Vec<Vec<usize>>;

fn dot(u: &[Rat], a: &[i64]) -> Rat {
    u.iter()
        .zip(a)
        .filter(|(_, &x)| x != 0)
        .map(|(c, &x)| c * Rat::from_integer(x.into()))
        .sum()
}

impl Walker {
    fn value(&self, u: &[Rat], i: usize, b: usize) -> Rat {
        dot(u, &self.pts[i][b]) + &self.heights[i][b]
    }

    /// Minimizers of the lifted functional in every summand, and the minima.
    fn faces_at(&self, u: &[Rat]) -> (Faces, Vec<Rat>) {
        let mut faces = Vec::with_capacity(self.pts.len());
        let mut mins = Vec::with_capacity(self.pts.len());
        for i in 0..self.pts.len() {
            let vals: Vec<Rat> = (0..self.pts[i].len()).map(|b| self.value(u, i, b)).collect();
            let m = vals.iter().min().expect("nonempty support").clone();
            faces.push((0..vals.len()).filter(|&b| vals[b] == m).collect());
            mins.push(m);
        }
        (faces, mins)
    }

    fn directions(&self, faces: &Faces) -> Vec<Vec<i64>> {
        let mut rows = Vec::new();
        for (i, f) in faces.iter().enumerate() {
            let a0 = &self.pts[i][f[0]];
            for &b in &f[1..] {
                rows.push(self.pts[i][b].iter().zip(a0).map(|(x, y)| x - y).collect());
            }
        }
        rows
    }

    fn check_fine(&self, faces: &Faces) -> Result<usize> {
        let dirs = self.directions(faces);
        if integer_rank(&dirs) != dirs.len() {
            return Err(Error::DegenerateLifting(format!(
                "lower face {faces:?} has no unique summand decomposition"
            )));
        }
        Ok(dirs.len())
    }

    /// Smallest `t > 0` at which some point outside `faces` becomes tight when
    /// moving `u` along `w`, or `None` if no point ever does.
    fn ratio_test(&self, u: &[Rat], faces: &Faces, mins: &[Rat], w: &[i64]) -> Option<Rat> {
        let mut best: Option<Rat> = None;
        for (i, f) in faces.iter().enumerate() {
            let a0 = &self.pts[i][f[0]];
            let w_a0: i64 = w.iter().zip(a0).map(|(x, y)| x * y).sum();
            for b in 0..self.pts[i].len() {
                if f.contains(&b) {
                    continue;
                }
                let c: i64 = w.iter().zip(&self.pts[i][b]).map(|(x, y)| x * y).sum::<i64>() - w_a0;
                if c >= 0 {
                    continue;
                }
                let slack = self.value(u, i, b) - &mins[i];
                let t = slack / Rat::from_integer((-c).into());
                if best.as_ref().is_none_or(|bt| t < *bt) {
                    best = Some(t);
                }
            }
        }
        best
    }

    fn step(u: &[Rat], w: &[i64], t: &Rat) -> Vec<Rat> {
        u.iter()
            .zip(w)
            .map(|(c, &x)| c + t * Rat::from_integer(x.into()))
            .collect()
    }

    fn make_cell(&self, faces: Faces, normal: Vec<Rat>) -> Cell {
        let dirs = self.directions(&faces);
        let det = integer_det(&dirs).abs();
        let mut denom = BigInt::from(1);
        for f in &faces {
            for k in 2..f.len() {
                denom *= k;
            }
        }
        let mut nfact = BigInt::from(1);
        for k in 2..=self.n {
            nfact *= k;
        }
        let norm = &det * nfact / denom;
        let base: Vec<Rat> = (0..self.n)
            .map(|j| {
                faces
                    .iter()
                    .enumerate()
                    .map(|(i, f)| Rat::from_integer(self.pts[i][f[0]][j].into()))
                    .sum()
            })
            .collect();
        // Columns of the edge matrix are edges; its inverse yields coordinates.
        let edge_cols = RatMatrix::from_rows(
            dirs.iter()
                .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
                .collect(),
        )
        .expect("square")
        .transpose();
        let coords = edge_cols.inverse().expect("fine cell has independent edges");
        let face_points = faces
            .iter()
            .enumerate()
            .map(|(i, f)| f.iter().map(|&b| Exponent(self.pts[i][b].clone())).collect())
            .collect();
        Cell {
            faces,
            face_points,
            normal,
            edge_det: det.to_u64().expect("cell volume fits in u64"),
            normalized_volume: norm.to_u64().expect("cell volume fits in u64"),
            base,
            coords,
        }
    }

    /// Walks from `u = 0` down to a full-dimensional lower face. `None` if the
    /// Minkowski sum is not full-dimensional.
    fn first_cell(&self) -> Result<Option<(Faces, Vec<Rat>)>> {
        let mut u = vec![Rat::zero(); self.n];
        loop {
            let (faces, mins) = self.faces_at(&u);
            let k = self.check_fine(&faces)?;
            if k == self.n {
                return Ok(Some((faces, u)));
            }
            let w = integer_complement(&self.directions(&faces), self.n)
                .into_iter()
                .next()
                .expect("proper subspace has a complement");
            let neg: Vec<i64> = w.iter().map(|x| -x).collect();
            let Some((dir, t)) = self
                .ratio_test(&u, &faces, &mins, &w)
                .map(|t| (w.clone(), t))
                .or_else(|| self.ratio_test(&u, &faces, &mins, &neg).map(|t| (neg.clone(), t)))
            else {
                return Ok(None);
            };
            u = Self::step(&u, &dir, &t);
        }
    }
}

/// Regular mixed subdivision of `A_0 + ... + A_m` induced by `lifting`.
///
/// Returns no cells when the Minkowski sum is not full-dimensional.
pub fn mixed_subdivision(supports: &[Vec<Exponent>], lifting: &Lifting) -> Result<MixedSubdivision> {
    let n = supports
        .first()
        .and_then(|s| s.first())
        .map(Exponent::len)
        .ok_or_else(|| Error::InvalidInput("supports must be nonempty".into()))?;
    if supports.iter().any(|s| s.is_empty()) {
        return Err(Error::InvalidInput("supports must be nonempty".into()));
    }
    if supports.iter().flatten().any(|a| a.len() != n) {
        return Err(Error::DimensionMismatch("supports live in different dimensions".into()));
    }
    if n > super::MAX_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    let sorted: Vec<Vec<Exponent>> = supports
        .iter()
        .map(|s| {
            let mut v = s.clone();
            v.sort();
            v.dedup();
            v
        })
        .collect();
    let mut heights = Vec::with_capacity(sorted.len());
    for (i, s) in sorted.iter().enumerate() {
        let mut hs = Vec::with_capacity(s.len());
        for a in s {
            let h = lifting
                .height(i, a)
                .ok_or_else(|| Error::InvalidInput(format!("no lifting height for {:?} in support {i}", a.0)))?;
            hs.push(Rat::from_integer(h.into()));
        }
        heights.push(hs);
    }
    let walker = Walker {
        n,
        pts: sorted.iter().map(|s| s.iter().map(|e| e.0.clone()).collect()).collect(),
        heights,
    };

    let mut cells = Vec::new();
    if n > 0 {
        if let Some(start) = walker.first_cell()? {
            let mut seen: HashSet<Faces> = HashSet::new();
            let mut queue = VecDeque::new();
            seen.insert(start.0.clone());
            queue.push_back(start);
            while let Some((faces, u)) = queue.pop_front() {
                for i in 0..faces.len() {
                    if faces[i].len() < 2 {
                        continue;
                    }
                    for (pos, &dropped) in faces[i].iter().enumerate() {
                        let mut ridge = faces.clone();
                        ridge[i].remove(pos);
                        let mut w = integer_complement(&walker.directions(&ridge), n)
                            .into_iter()
                            .next()
                            .expect("ridge has codimension one");
                        let r0 = &walker.pts[i][ridge[i][0]];
                        let s: i64 = w
                            .iter()
                            .zip(walker.pts[i][dropped].iter().zip(r0))
                            .map(|(x, (a, b))| x * (a - b))
                            .sum();
                        if s < 0 {
                            w.iter_mut().for_each(|x| *x = -*x);
                        }
                        let mins: Vec<Rat> = (0..faces.len()).map(|j| walker.value(&u, j, faces[j][0])).collect();
                        let Some(t) = walker.ratio_test(&u, &ridge, &mins, &w) else {
                            continue;
                        };
                        let next_u = Walker::step(&u, &w, &t);
                        let (next, _) = walker.faces_at(&next_u);
                        if walker.check_fine(&next)? != n {
                            return Err(Error::DegenerateLifting("neighbouring cell is not full-dimensional".into()));
                        }
                        if seen.insert(next.clone()) {
                            queue.push_back((next, next_u));
                        }
                    }
                }
                cells.push(walker.make_cell(faces, u));
            }
        }
    }
    cells.sort_by(|a, b| a.faces.cmp(&b.faces));
    Ok(MixedSubdivision {
        dim: n,
        supports: sorted,
        lifting: lifting.clone(),
        cells,
    })
}

/// Tries random liftings with seeds `seed, seed + 1, ...` until one is generic.
pub fn mixed_subdivision_with_retry(supports: &[Vec<Exponent>], seed: u64) -> Result<MixedSubdivision> {
    let mut last = None;
    for attempt in 0..MAX_RETRIES {
        let lifting = Lifting::random(supports, seed.wrapping_add(attempt), DEFAULT_HEIGHT_BOUND);
        match mixed_subdivision(supports, &lifting) {
            Err(e @ Error::DegenerateLifting(_)) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// `n!` times the volume of a polytope, by summing the simplices of a
/// regular triangulation of its vertices.
pub fn normalized_volume(p: &LatticePolytope) -> Result<u64> {
    if !p.is_full_dimensional() {
        return Ok(0);
    }
    let sub = mixed_subdivision_with_retry(&[p.vertices().to_vec()], 0)?;
    Ok(sub.total_normalized_volume())
}

/// Fully mixed cells and their volumes.
#[derive(Debug, Clone, Serialize)]
pub struct MixedCellReport {
    pub cells: Vec<MixedCellEntry>,
    pub total: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MixedCellEntry {
    pub cell: usize,
    pub edges: Vec<[Exponent; 2]>,
    pub volume: u64,
}

/// Mixed cells of a subdivision of exactly `n` supports in `R^n`; their total
/// volume is the mixed volume.
pub fn mixed_cells(sub: &MixedSubdivision) -> Result<MixedCellReport> {
    if sub.supports.len() != sub.dim {
        return Err(Error::DimensionMismatch(format!(
            "mixed cells need {} supports, got {}",
            sub.dim,
            sub.supports.len()
        )));
    }
    let cells: Vec<MixedCellEntry> = sub
        .cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_mixed())
        .map(|(k, c)| MixedCellEntry {
            cell: k,
            edges: c.face_points.iter().map(|f| [f[0].clone(), f[1].clone()]).collect(),
            volume: c.edge_det,
        })
        .collect();
    let total = cells.iter().map(|c| c.volume).sum();
    Ok(MixedCellReport { cells, total })
}
