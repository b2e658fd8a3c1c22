//! Exact sparse Laurent polynomials.
//!
//! A [`SparsePoly`] maps exponent vectors in `Z^n` to nonzero coefficients.
//! Terms live in a `BTreeMap`, so iteration order (and therefore every matrix
//! layout derived from it) is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Exponent vector of a Laurent monomial. Ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(pub Vec<i64>);

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponent(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }
}

impl From<Vec<i64>> for Exponent {
    fn from(v: Vec<i64>) -> Self {
        Exponent(v)
    }
}

impl<'a> Add<&'a Exponent> for &'a Exponent {
    type Output = Exponent;
    fn add(self, rhs: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Exponent> for &'a Exponent {
    type Output = Exponent;
    fn sub(self, rhs: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Field of coefficients a [`SparsePoly`] can carry.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn to_complex(&self) -> Complex64;
    /// Magnitude used by scale-invariant residuals.
    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
}

impl Scalar for Rat {
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(self), 0.0)
    }
}

impl Scalar for Complex64 {
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// A coefficient as it appears at an interface: exact rational or complex float.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Exact(Rat),
    Numeric(Complex64),
}

impl Coefficient {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Coefficient::Exact(q) => q.to_complex(),
            Coefficient::Numeric(z) => *z,
        }
    }
}

pub fn rat_to_f64(q: &Rat) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both down to keep the quotient representable.
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q` or a decimal such as `-1.25e-3`.
pub fn parse_rational(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        Rat::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rat::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

pub fn format_rational(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Sparse Laurent polynomial in `nvars` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<C: Scalar = Rat> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Scalar> SparsePoly<C> {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, Exponent::zero(nvars), c)
    }

    pub fn monomial(nvars: usize, e: Exponent, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(e, c);
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, C)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent {:?} has length {}, expected {nvars}",
                    e.0,
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: C) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// The set of exponents with nonzero coefficient.
    pub fn support(&self) -> BTreeSet<Exponent> {
        self.terms.keys().cloned().collect()
    }

    /// Largest exponent (lexicographic), if any.
    pub fn max_exponent(&self) -> Option<&Exponent> {
        self.terms.keys().next_back()
    }

    /// Total degree, meaningful for supports in `N^n`.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(Exponent::degree).max()
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &Exponent) -> Self {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> SparsePoly<D> {
        let mut out = SparsePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Evaluates at a complex point.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            acc += c.to_complex() * monomial_value(e, point)?;
        }
        Ok(acc)
    }

    /// `Σ |c_α|·|p^α|`, the natural scale of `|f(p)|`.
    pub fn evaluation_scale(&self, point: &[Complex64]) -> Result<f64> {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            acc += c.magnitude() * monomial_value(e, point)?.norm();
        }
        Ok(acc)
    }
}

pub(crate) fn monomial_value(e: &Exponent, point: &[Complex64]) -> Result<Complex64> {
    let mut v = Complex64::one();
    for (&k, &z) in e.0.iter().zip(point) {
        if k < 0 && z.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if k != 0 {
            v *= z.powi(k as i32);
        }
    }
    Ok(v)
}

impl<C: Scalar> Add for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn add(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Scalar> Sub for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn sub(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<C: Scalar> Mul for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn mul(self, rhs: &SparsePoly<C>) -> SparsePoly<C> {
        let mut out = SparsePoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl SparsePoly<Rat> {
    /// Parses the text grammar `coeff*v1^e1*... ± ...` over the given variable names.
    pub fn parse(text: &str, vars: &[impl AsRef<str>]) -> Result<Self> {
        Parser::new(text, vars).parse()
    }

    /// Prints in the same grammar [`SparsePoly::parse`] accepts, largest exponent first.
    pub fn to_text(&self, vars: &[impl AsRef<str>]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            let is_const = e.0.iter().all(|&x| x == 0);
            if !abs.is_one() || is_const {
                factors.push(format_rational(&abs));
            }
            for (i, &x) in e.0.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(vars[i].as_ref().to_string()),
                    _ => factors.push(format!("{}^{}", vars[i].as_ref(), x)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[var];
            if k != 0 {
                let mut d = e.clone();
                d.0[var] -= 1;
                out.add_term(d, c * Rat::from_integer(k.into()));
            }
        }
        out
    }

    /// Clears denominators and content so the coefficients are coprime integers.
    pub fn primitive_part(&self) -> Self {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let gcd = self.terms.values().fold(BigInt::zero(), |acc, c| {
            acc.gcd(&(c.numer() * (&lcm / c.denom())))
        });
        self.scale(&Rat::new(lcm, gcd))
    }
}

impl fmt::Display for SparsePoly<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.to_text(&names))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vec<&'a str>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, vars: &'a [impl AsRef<str>]) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            vars: vars.iter().map(|v| v.as_ref()).collect(),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<SparsePoly<Rat>> {
        let n = self.vars.len();
        let mut poly = SparsePoly::zero(n);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return self.err("empty polynomial"),
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    int(1)
                }
                Some(b'-') => {
                    self.pos += 1;
                    int(-1)
                }
                Some(_) if first => int(1),
                Some(c) => return self.err(format!("expected `+` or `-`, found `{}`", c as char)),
            };
            first = false;
            let (e, c) = self.term(n)?;
            poly.add_term(e, sign * c);
        }
        Ok(poly)
    }

    fn term(&mut self, n: usize) -> Result<(Exponent, Rat)> {
        let mut coeff = int(1);
        let mut exp = vec![0i64; n];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() || c == b'.' => coeff *= self.number()?,
                Some(b'(') => {
                    self.pos += 1;
                    let q = self.number()?;
                    if self.peek() != Some(b')') {
                        return self.err("expected `)`");
                    }
                    self.pos += 1;
                    coeff *= q;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    let name = self.ident();
                    let Some(i) = self.vars.iter().position(|v| *v == name) else {
                        self.pos = start;
                        return Err(Error::UnknownVariable(name.to_string()));
                    };
                    let k = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.exponent()?
                    } else {
                        1
                    };
                    exp[i] += k;
                }
                Some(c) => return self.err(format!("unexpected `{}`", c as char)),
                None => return self.err("unexpected end of input"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Exponent(exp), coeff))
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn number(&mut self) -> Result<Rat> {
        self.skip_ws();
        let start = self.pos;
        let mut seen_slash = false;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let exp_sign = (c == b'-' || c == b'+')
                && self.pos > start
                && matches!(self.src[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                self.pos += 1;
            } else if c == b'/' && !seen_slash {
                seen_slash = true;
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match parse_rational(text) {
            Some(q) => Ok(q),
            None => {
                self.pos = start;
                self.err(format!("malformed number `{text}`"))
            }
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        let Ok(k) = text.parse::<i64>() else {
            self.pos = start;
            return self.err("expected an integer exponent");
        };
        if paren {
            if self.peek() != Some(b')') {
                return self.err("expected `)`");
            }
            self.pos += 1;
        }
        Ok(k)
    }
}

/// An ordered list of polynomials sharing variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    vars: Vec<String>,
    polys: Vec<SparsePoly<Rat>>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    c: String,
    e: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    vars: Vec<String>,
    polys: Vec<Vec<TermJson>>,
}

impl PolySystem {
    pub fn new(vars: Vec<String>, polys: Vec<SparsePoly<Rat>>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::InvalidInput("a system needs at least one polynomial".into()));
        }
        let n = vars.len();
        if let Some(p) = polys.iter().find(|p| p.nvars() != n) {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables, system has {n}",
                p.nvars()
            )));
        }
        Ok(PolySystem { vars, polys })
    }

    /// Parses one polynomial per entry of `texts`.
    pub fn parse<S: AsRef<str>>(texts: &[S], vars: Vec<String>) -> Result<Self> {
        let polys = texts
            .iter()
            .map(|t| SparsePoly::parse(t.as_ref(), &vars))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars, polys)
    }

    /// Generic variable names `x1..xn`.
    pub fn with_default_vars(polys: Vec<SparsePoly<Rat>>) -> Result<Self> {
        let n = polys.first().map(|p| p.nvars()).unwrap_or(0);
        Self::new((1..=n).map(|i| format!("x{i}")).collect(), polys)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn polys(&self) -> &[SparsePoly<Rat>] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.polys.len() == self.vars.len()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SystemJson = serde_json::from_str(text).map_err(|e| Error::Syntax {
            pos: e.column(),
            msg: e.to_string(),
        })?;
        let n = raw.vars.len();
        let mut polys = Vec::with_capacity(raw.polys.len());
        for terms in raw.polys {
            let mut p = SparsePoly::zero(n);
            for t in terms {
                let c = parse_rational(&t.c).ok_or_else(|| Error::Syntax {
                    pos: 0,
                    msg: format!("malformed coefficient `{}`", t.c),
                })?;
                if t.e.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "exponent {:?} for {n} variables",
                        t.e
                    )));
                }
                p.add_term(Exponent(t.e), c);
            }
            polys.push(p);
        }
        Self::new(raw.vars, polys)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let raw = SystemJson {
            vars: self.vars.clone(),
            polys: self
                .polys
                .iter()
                .map(|p| {
                    p.terms()
                        .map(|(e, c)| TermJson {
                            c: format_rational(c),
                            e: e.0.clone(),
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_value(raw).expect("system serializes")
    }

    /// Plain text form: a `vars:` header line then one polynomial per line.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Syntax {
            pos: 0,
            msg: "empty input".into(),
        })?;
        let Some(names) = header.strip_prefix("vars:") else {
            return Err(Error::Syntax {
                pos: 0,
                msg: "expected a `vars:` header line".into(),
            });
        };
        let vars: Vec<String> = names
            .split([',', ' '])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        let polys: Vec<&str> = lines.collect();
        Self::parse(&polys, vars)
    }
}

impl fmt::Display for PolySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.vars.join(", "))?;
        for p in &self.polys {
            writeln!(f, "{}", p.to_text(&self.vars))?;
        }
        Ok(())
    }
}
