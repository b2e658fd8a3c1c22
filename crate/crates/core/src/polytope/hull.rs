//! Facet enumeration for full-dimensional point sets by the double
//! description method, in exact integer arithmetic.
//!
//! Valid inequalities `<a, x> <= b` for a point set form the polyhedral cone
//! `{(a, b) : b - <a, v> >= 0 for all points v}`. For a full-dimensional
//! bounded set its extreme rays are exactly the facets.

use std::collections::BTreeSet;

use num_integer::Integer;

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(mut v: Vec<i128>) -> Vec<i128> {
    let g = v.iter().fold(0i128, |acc, x| acc.gcd(x));
    if g > 1 {
        for x in &mut v {
            *x /= g;
        }
    }
    v
}

struct Ray {
    v: Vec<i128>,
    /// Indices of processed constraints that are tight on this ray.
    zero: BTreeSet<usize>,
}

/// Integer inverse columns of a nonsingular square matrix, scaled to be primitive
/// and oriented so that `rows[j] . col_j > 0`.
fn simplicial_rays(rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    use crate::linalg::RatMatrix;
    use crate::poly::Rat;
    use num_traits::{Signed, ToPrimitive};
    let d = rows.len();
    let m = RatMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
            .collect(),
    )
    .expect("square");
    let mut out = Vec::with_capacity(d);
    for j in 0..d {
        // Column j of the inverse spans the kernel of the other rows.
        let others: Vec<usize> = (0..d).filter(|&i| i != j).collect();
        let sub = m.select(&others, &(0..d).collect::<Vec<_>>());
        let ns = sub.nullspace();
        debug_assert_eq!(ns.len(), 1);
        let v = &ns[0];
        let lcm = v
            .iter()
            .fold(num_bigint::BigInt::from(1), |acc, q| acc.lcm(q.denom()));
        let mut ints: Vec<i128> = v
            .iter()
            .map(|q| (q.numer() * (&lcm / q.denom())).to_i128().expect("small"))
            .collect();
        let s = dot(&rows[j], &ints);
        if s < 0 {
            for x in &mut ints {
                *x = -*x;
            }
        }
        debug_assert!(Rat::from_integer(s.into()).abs() > Rat::from_integer(0.into()));
        out.push(primitive(ints));
    }
    out
}

/// Facets `(a, b)` with `<a, x> <= b` of the convex hull of `points`, which must
/// affinely span `R^k` (`k = points[0].len() >= 1`). `initial` lists `k + 1`
/// affinely independent point indices.
pub(crate) fn facets_full_dim(points: &[Vec<i64>], initial: &[usize]) -> Vec<(Vec<i64>, i64)> {
    let k = points[0].len();
    let dim = k + 1;
    let constraint = |p: &Vec<i64>| -> Vec<i128> {
        let mut g: Vec<i128> = p.iter().map(|&x| -(x as i128)).collect();
        g.push(1);
        g
    };
    let cons: Vec<Vec<i128>> = points.iter().map(constraint).collect();

    let init_rows: Vec<Vec<i128>> = initial.iter().map(|&i| cons[i].clone()).collect();
    let mut rays: Vec<Ray> = simplicial_rays(&init_rows)
        .into_iter()
        .enumerate()
        .map(|(j, v)| Ray {
            v,
            zero: initial
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, &c)| c)
                .collect(),
        })
        .collect();

    let init_set: BTreeSet<usize> = initial.iter().copied().collect();
    for (ci, g) in cons.iter().enumerate() {
        if init_set.contains(&ci) {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|r| dot(g, &r.v)).collect();
        if vals.iter().all(|&s| s >= 0) {
            for (r, &s) in rays.iter_mut().zip(&vals) {
                if s == 0 {
                    r.zero.insert(ci);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        let mut new_rays = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: BTreeSet<usize> = rays[p].zero.intersection(&rays[q].zero).copied().collect();
                if common.len() + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(r, ray)| r == p || r == q || !common.is_subset(&ray.zero));
                if !adjacent {
                    continue;
                }
                let a = vals[p];
                let b = vals[q];
                let v: Vec<i128> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| a * x - b * y)
                    .collect();
                let mut zero = common;
                zero.insert(ci);
                new_rays.push(Ray { v: primitive(v), zero });
            }
        }
        let mut kept: Vec<Ray> = rays
            .into_iter()
            .zip(&vals)
            .filter(|(_, &s)| s >= 0)
            .map(|(mut r, &s)| {
                if s == 0 {
                    r.zero.insert(ci);
                }
                r
            })
            .collect();
        kept.extend(new_rays);
        rays = kept;
    }

    let mut out: Vec<(Vec<i64>, i64)> = rays
        .into_iter()
        .map(|r| {
            let b = r.v[k] as i64;
            (r.v[..k].iter().map(|&x| x as i64).collect(), b)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}
