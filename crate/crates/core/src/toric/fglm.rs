//! Change of order to a lexicographic basis from multiplication maps.

use std::collections::{BTreeSet, HashMap};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Echelon, SparseRow};
use crate::poly::{Exponent, Rat, SparsePoly};

use super::maps::QuotientMaps;

/// Monomials ordered by [`MonomialOrder::Lex`](super::MonomialOrder::Lex).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct LexKey(Vec<i64>, Exponent);

impl LexKey {
    fn new(e: Exponent) -> Self {
        LexKey(e.0.iter().rev().copied().collect(), e)
    }
}

fn divides(a: &Exponent, b: &Exponent) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| x <= y)
}

/// Walks monomials in increasing lex order, skipping multiples of found
/// leading monomials, and records the first linear dependency for each.
/// The result is the reduced lex basis sorted by increasing leading monomial,
/// so the polynomial in `x_1` alone comes first.
pub fn fglm_lex(q: &QuotientMaps) -> Result<Vec<SparsePoly>> {
    let n = q.maps.len();
    let delta = q.dim();
    if q.maps.iter().any(|m| m.rows() != delta || m.cols() != delta) {
        return Err(Error::DimensionMismatch("maps and basis differ in size".into()));
    }
    if !q.commute() {
        return Err(Error::NonCommuting);
    }
    if delta == 0 || q.one.iter().all(Zero::is_zero) {
        return Ok(vec![SparsePoly::constant(n, Rat::one())]);
    }
    let mut staircase: Vec<Exponent> = Vec::new();
    let mut vectors: HashMap<Exponent, Vec<Rat>> = HashMap::new();
    let mut ech = Echelon::new();
    let mut leads: Vec<Exponent> = Vec::new();
    let mut out = Vec::new();
    let mut todo: BTreeSet<LexKey> = BTreeSet::new();
    todo.insert(LexKey::new(Exponent::zero(n)));
    while let Some(LexKey(_, m)) = todo.pop_first() {
        if leads.iter().any(|l| divides(l, &m)) || vectors.contains_key(&m) {
            continue;
        }
        let v = if m.coords().iter().all(|&k| k == 0) {
            q.one.clone()
        } else {
            let (i, prev) = (0..n)
                .filter(|&i| m.0[i] > 0)
                .map(|i| (i, &m - &Exponent::unit(n, i)))
                .find(|(_, p)| vectors.contains_key(p))
                .expect("a predecessor lies in the staircase");
            q.maps[i].left_mul_vec(&vectors[&prev])
        };
        let row: SparseRow = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect();
        let reduced = ech.reduce(row.clone(), false);
        if reduced.first().is_none_or(|(j, _)| *j >= delta) {
            // Dependent: the tag part holds minus the coefficients.
            let mut g = SparsePoly::monomial(n, m.clone(), Rat::one());
            for (j, c) in reduced {
                g.add_term(staircase[j - delta].clone(), c);
            }
            out.push(g);
            leads.push(m);
        } else {
            let k = staircase.len();
            let mut tagged = row;
            tagged.push((delta + k, Rat::one()));
            ech.insert(tagged);
            staircase.push(m.clone());
            for i in 0..n {
                todo.insert(LexKey::new(&m + &Exponent::unit(n, i)));
            }
            vectors.insert(m, v);
        }
    }
    Ok(out)
}

/// Floating-point variant for numerically computed maps; a candidate is
/// dependent when its component orthogonal to the staircase is below
/// `tol` relative to its norm.
pub fn fglm_lex_numeric(maps: &[CMatrix], one: &[Complex64], tol: f64) -> Result<Vec<SparsePoly<Complex64>>> {
    let n = maps.len();
    let delta = one.len();
    if maps.iter().any(|m| m.dim() != delta) {
        return Err(Error::DimensionMismatch("maps and basis differ in size".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = maps[i].mul(&maps[j]).sub(&maps[j].mul(&maps[i])).norm();
            if d > tol.sqrt() * (1.0 + maps[i].norm() * maps[j].norm()) {
                return Err(Error::NonCommuting);
            }
        }
    }
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    let norm = |a: &[Complex64]| a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    // Orthonormal q_j = sum_k t[j][k] s_k over the staircase vectors s_k.
    let mut qs: Vec<Vec<Complex64>> = Vec::new();
    let mut ts: Vec<Vec<Complex64>> = Vec::new();
    let mut staircase: Vec<Exponent> = Vec::new();
    let mut vectors: HashMap<Exponent, Vec<Complex64>> = HashMap::new();
    let mut leads: Vec<Exponent> = Vec::new();
    let mut out = Vec::new();
    let mut todo: BTreeSet<LexKey> = BTreeSet::new();
    todo.insert(LexKey::new(Exponent::zero(n)));
    let row_times = |v: &[Complex64], m: &CMatrix| -> Vec<Complex64> {
        (0..delta).map(|j| (0..delta).map(|i| v[i] * m[(i, j)]).sum()).collect()
    };
    while let Some(LexKey(_, m)) = todo.pop_first() {
        if leads.iter().any(|l| divides(l, &m)) || vectors.contains_key(&m) {
            continue;
        }
        let v = if m.coords().iter().all(|&k| k == 0) {
            one.to_vec()
        } else {
            let (i, prev) = (0..n)
                .filter(|&i| m.0[i] > 0)
                .map(|i| (i, &m - &Exponent::unit(n, i)))
                .find(|(_, p)| vectors.contains_key(p))
                .expect("a predecessor lies in the staircase");
            row_times(&vectors[&prev], &maps[i])
        };
        let a: Vec<Complex64> = qs.iter().map(|qj| dot(qj, &v)).collect();
        let mut r = v.clone();
        for (aj, qj) in a.iter().zip(&qs) {
            for (x, y) in r.iter_mut().zip(qj) {
                *x -= aj * y;
            }
        }
        let rn = norm(&r);
        let k = staircase.len();
        if rn <= tol * norm(&v).max(1.0) || k == delta {
            let mut g = SparsePoly::monomial(n, m.clone(), Complex64::new(1.0, 0.0));
            for (s, idx) in staircase.iter().zip(0..k) {
                let c: Complex64 = a.iter().zip(&ts).map(|(aj, tj)| aj * tj[idx]).sum();
                g.add_term(s.clone(), -c);
            }
            out.push(g);
            leads.push(m);
        } else {
            let mut t: Vec<Complex64> = vec![Complex64::zero(); k + 1];
            t[k] = Complex64::new(1.0, 0.0);
            for (aj, tj) in a.iter().zip(&ts) {
                for (x, y) in t.iter_mut().zip(tj) {
                    *x -= aj * y;
                }
            }
            for x in t.iter_mut() {
                *x /= rn;
            }
            for tj in ts.iter_mut() {
                tj.push(Complex64::zero());
            }
            qs.push(r.into_iter().map(|x| x / rn).collect());
            ts.push(t);
            staircase.push(m.clone());
            for i in 0..n {
                todo.insert(LexKey::new(&m + &Exponent::unit(n, i)));
            }
            vectors.insert(m, v);
        }
    }
    Ok(out)
}
