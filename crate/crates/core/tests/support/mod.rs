//! Random instance generators and independent oracles shared by the
//! integration and acceptance tests.
#![allow(dead_code)]

pub mod buchberger;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::{Exponent, Rat, SparsePoly};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Nonzero integer in `[-bound, bound]`.
pub fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> Rat {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return int(v);
        }
    }
}

/// `size` distinct points of `[0, max]^n` (fewer if the box is too small).
pub fn random_support(rng: &mut ChaCha8Rng, n: usize, max: i64, size: usize) -> Vec<Exponent> {
    let mut pts = std::collections::BTreeSet::new();
    let cap = ((max + 1) as usize).pow(n as u32);
    while pts.len() < size.min(cap) {
        pts.insert(Exponent((0..n).map(|_| rng.gen_range(0..=max)).collect()));
    }
    pts.into_iter().collect()
}

pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, support: &[Exponent], bound: i64) -> SparsePoly {
    SparsePoly::from_terms(n, support.iter().map(|e| (e.clone(), nonzero(rng, bound)))).unwrap()
}

/// All exponents of total degree at most `d` in `n` variables.
pub fn dense_support(n: usize, d: i64) -> Vec<Exponent> {
    let mut out = vec![];
    let total = (d + 1).pow(n as u32);
    for k in 0..total {
        let mut e = vec![0; n];
        let mut r = k;
        for x in e.iter_mut() {
            *x = r % (d + 1);
            r /= d + 1;
        }
        if e.iter().sum::<i64>() <= d {
            out.push(Exponent(e));
        }
    }
    out.sort();
    out
}

pub fn random_dense(rng: &mut ChaCha8Rng, n: usize, d: i64, bound: i64) -> SparsePoly {
    random_poly(rng, n, &dense_support(n, d), bound)
}

fn monomial_value(e: &Exponent, p: &[Rat]) -> Rat {
    let mut v = Rat::one();
    for (x, &k) in p.iter().zip(e.coords()) {
        let base = if k >= 0 { x.clone() } else { Rat::one() / x };
        for _ in 0..k.abs() {
            v *= &base;
        }
    }
    v
}

pub fn evaluate_exact(f: &SparsePoly, p: &[Rat]) -> Rat {
    f.terms().map(|(e, c)| c * monomial_value(e, p)).sum()
}

/// Random polynomial on `support` vanishing at `root`, keeping the full support.
pub fn planted_poly(rng: &mut ChaCha8Rng, n: usize, support: &[Exponent], root: &[Rat], bound: i64) -> SparsePoly {
    loop {
        let f = random_poly(rng, n, support, bound);
        let pivot = &support[rng.gen_range(0..support.len())];
        let v = evaluate_exact(&f, root);
        let c = f.coeff(pivot) - v / monomial_value(pivot, root);
        if c.is_zero() {
            continue;
        }
        let mut g = SparsePoly::zero(n);
        for (e, k) in f.terms() {
            g.add_term(e.clone(), if e == pivot { c.clone() } else { k.clone() });
        }
        debug_assert!(evaluate_exact(&g, root).is_zero());
        return g;
    }
}

/// Random torus point with small nonzero rational coordinates.
pub fn random_torus_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    (0..n)
        .map(|_| {
            let num = nonzero(rng, 3);
            let den = rng.gen_range(1..=2);
            num / int(den)
        })
        .collect()
}
