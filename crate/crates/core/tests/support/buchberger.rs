//! Textbook Buchberger algorithm under graded reverse lexicographic order,
//! written independently of the library's Groebner code.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use toric_core::{Exponent, Rat, SparsePoly};

pub fn grevlex(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                // Smaller power of the last differing variable is larger.
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Terms sorted by decreasing grevlex.
#[derive(Clone, Debug, PartialEq)]
struct Poly(Vec<(Vec<i64>, Rat)>);

impl Poly {
    fn from_sparse(f: &SparsePoly) -> Self {
        let mut t: Vec<(Vec<i64>, Rat)> = f.terms().map(|(e, c)| (e.0.clone(), c.clone())).collect();
        t.sort_by(|a, b| grevlex(&b.0, &a.0));
        Poly(t)
    }

    fn to_sparse(&self, n: usize) -> SparsePoly {
        SparsePoly::from_terms(n, self.0.iter().map(|(e, c)| (Exponent(e.clone()), c.clone()))).unwrap()
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn lm(&self) -> &[i64] {
        &self.0[0].0
    }

    fn add_scaled_shift(&self, other: &Poly, c: &Rat, shift: &[i64]) -> Poly {
        let mut map: std::collections::BTreeMap<Vec<i64>, Rat> = self.0.iter().cloned().collect();
        for (e, v) in &other.0 {
            let m: Vec<i64> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            let entry = map.entry(m.clone()).or_insert_with(Rat::zero);
            *entry += c * v;
            if entry.is_zero() {
                map.remove(&m);
            }
        }
        let mut t: Vec<(Vec<i64>, Rat)> = map.into_iter().collect();
        t.sort_by(|a, b| grevlex(&b.0, &a.0));
        Poly(t)
    }

    fn monic(&self) -> Poly {
        let inv = Rat::one() / &self.0[0].1;
        Poly(self.0.iter().map(|(e, c)| (e.clone(), c * &inv)).collect())
    }
}

fn divides(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn reduce(f: &Poly, g: &[Poly]) -> Poly {
    let mut rem = Poly(vec![]);
    let mut p = f.clone();
    while !p.is_zero() {
        let (lm, lc) = p.0[0].clone();
        if let Some(d) = g.iter().find(|d| divides(d.lm(), &lm)) {
            let shift: Vec<i64> = lm.iter().zip(d.lm()).map(|(a, b)| a - b).collect();
            let c = -(&lc / &d.0[0].1);
            p = p.add_scaled_shift(d, &c, &shift);
        } else {
            rem.0.push((lm, lc));
            p.0.remove(0);
        }
    }
    rem
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let l: Vec<i64> = f.lm().iter().zip(g.lm()).map(|(a, b)| *a.max(b)).collect();
    let sf: Vec<i64> = l.iter().zip(f.lm()).map(|(a, b)| a - b).collect();
    let sg: Vec<i64> = l.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
    let fm = f.monic();
    let gm = g.monic();
    Poly(vec![]).add_scaled_shift(&fm, &Rat::one(), &sf).add_scaled_shift(&gm, &-Rat::one(), &sg)
}

/// Reduced Groebner basis under grevlex, sorted by leading monomial.
pub fn groebner_basis(fs: &[SparsePoly]) -> Vec<SparsePoly> {
    let n = fs[0].nvars();
    let mut g: Vec<Poly> = fs.iter().map(Poly::from_sparse).filter(|p| !p.is_zero()).collect();
    let mut pairs: Vec<(usize, usize)> = (0..g.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let lcm = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| *x.max(y)).collect() };
    // Normal strategy: treat the pair with the smallest lcm first.
    while let Some(k) = (0..pairs.len()).min_by(|&x, &y| {
        let (a, b) = pairs[x];
        let (c, d) = pairs[y];
        grevlex(&lcm(g[a].lm(), g[b].lm()), &lcm(g[c].lm(), g[d].lm()))
    }) {
        let (i, j) = pairs.swap_remove(k);
        // Coprime leading monomials: the pair reduces to zero.
        if g[i].lm().iter().zip(g[j].lm()).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let r = reduce(&s_poly(&g[i], &g[j]), &g);
        if !r.is_zero() {
            let k = g.len();
            g.push(r.monic());
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    // Minimize, then interreduce.
    let mut minimal: Vec<Poly> = Vec::new();
    for (k, p) in g.iter().enumerate() {
        let redundant = g
            .iter()
            .enumerate()
            .any(|(l, q)| l != k && divides(q.lm(), p.lm()) && (q.lm() != p.lm() || l < k));
        if !redundant {
            minimal.push(p.monic());
        }
    }
    let mut reduced = Vec::new();
    for k in 0..minimal.len() {
        let others: Vec<Poly> = minimal.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, p)| p.clone()).collect();
        let head = Poly(vec![minimal[k].0[0].clone()]);
        let tail = reduce(&Poly(minimal[k].0[1..].to_vec()), &others);
        reduced.push(Poly([head.0, tail.0].concat()));
    }
    reduced.sort_by(|a, b| grevlex(a.lm(), b.lm()));
    reduced.iter().map(|p| p.to_sparse(n)).collect()
}

/// Leading monomials of a basis under grevlex.
pub fn leading_monomials(g: &[SparsePoly]) -> Vec<Exponent> {
    g.iter()
        .map(|f| Exponent(Poly::from_sparse(f).lm().to_vec()))
        .collect()
}
