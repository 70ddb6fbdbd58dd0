//! Sparse multivariate polynomials over Q in variables `X1..Xk`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::numberfield::Rational;

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial term {term:?}: {reason}")]
pub struct ParseMultiPolyError {
    pub term: String,
    pub reason: String,
}

/// Graded lexicographic comparison: total degree first, then exponents.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn from_i64(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(c.into()))
    }

    /// The variable `X{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        degs.next().is_none_or(|d| degs.all(|x| x == d))
    }

    /// Terms in descending graded lexicographic order.
    pub fn terms_grlex(&self) -> Vec<(&Monomial, &Rational)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| grlex(b.0, a.0));
        t
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Primitive integer form with positive leading coefficient.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let (num_gcd, den_lcm) = self.content_parts();
        let lead_neg = self.leading().is_some_and(|(_, c)| c.is_negative());
        let mut factor = Rational::new(den_lcm, num_gcd);
        if lead_neg {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// gcd of numerators and lcm of denominators over all coefficients.
    fn content_parts(&self) -> (BigInt, BigInt) {
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        (g, l)
    }

    /// Divides by the largest monomial dividing every term.
    pub fn strip_monomial(&self, m: &[u32]) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum of the exponents; all zeros for the zero polynomial.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars];
        };
        let mut m = first.clone();
        for e in it {
            for (a, &b) in m.iter_mut().zip(e) {
                *a = (*a).min(b);
            }
        }
        m
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(v.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Reduction modulo a prime; `None` if a denominator vanishes mod `q`.
    pub fn to_mod(&self, q: u64) -> Option<ModPoly> {
        let qb = BigInt::from(q);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let n = c.numer().mod_floor(&qb).to_u64().expect("reduced");
            let d = c.denom().mod_floor(&qb).to_u64().expect("reduced");
            if d == 0 {
                return None;
            }
            let v = mulmod(n, powmod(d, q - 2, q), q);
            if v != 0 {
                terms.push((e.clone(), v));
            }
        }
        let max_exp = terms
            .iter()
            .flat_map(|(e, _)| e.iter().copied())
            .max()
            .unwrap_or(0);
        Some(ModPoly {
            q,
            nvars: self.nvars,
            max_exp,
            terms,
        })
    }

    /// Parses the output of `Display`, e.g. `X1^4 - 3*X1^3*X2 + 1/2*X2`.
    pub fn parse(s: &str, nvars: usize) -> Result<Self, ParseMultiPolyError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Self::zero(nvars);
        if compact == "0" {
            return Ok(p);
        }
        for term in crate::intpoly::split_terms(&compact) {
            let err = |reason: &str| ParseMultiPolyError {
                term: term.to_string(),
                reason: reason.to_string(),
            };
            let (neg, body) = match term.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            if body.is_empty() {
                return Err(err("empty term"));
            }
            let mut coef = Rational::one();
            let mut exps = vec![0u32; nvars];
            for factor in body.split('*') {
                if let Some(v) = factor.strip_prefix('X') {
                    let (idx, pow) = match v.split_once('^') {
                        Some((i, k)) => (i, k.parse::<u32>().map_err(|_| err("bad exponent"))?),
                        None => (v, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| err("bad variable"))?;
                    if idx == 0 || idx > nvars {
                        return Err(err("variable out of range"));
                    }
                    exps[idx - 1] += pow;
                } else {
                    coef *= crate::numberfield::parse_rational(factor)
                        .ok_or_else(|| err("bad coefficient"))?;
                }
            }
            p.add_term(exps, if neg { -coef } else { coef });
        }
        Ok(p)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms_grlex().into_iter().enumerate() {
            let mag = c.abs();
            match (k, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| match x {
                    1 => format!("X{}", i + 1),
                    _ => format!("X{}^{x}", i + 1),
                })
                .collect();
            let coef = crate::numberfield::format_rational(&mag);
            match (vars.is_empty(), mag.is_one()) {
                (true, _) => f.write_str(&coef)?,
                (false, true) => f.write_str(&vars.join("*"))?,
                (false, false) => write!(f, "{coef}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        let mut r = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                r.add_term(e, ca * cb);
            }
        }
        r
    }
}

pub(crate) fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1 % q;
    a %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, q);
        }
        a = mulmod(a, a, q);
        e >>= 1;
    }
    r
}

/// A polynomial reduced modulo a prime, for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct ModPoly {
    q: u64,
    nvars: usize,
    max_exp: u32,
    terms: Vec<(Monomial, u64)>,
}

impl ModPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_exp(&self) -> u32 {
        self.max_exp
    }

    /// Evaluates given `powers[v][k] = x_v^k mod q` for `k <= max_exp`.
    pub fn eval_powers(&self, powers: &[Vec<u64>]) -> u64 {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = mulmod(t, powers[v][k as usize], self.q);
                }
            }
            acc += t;
            if acc >= self.q {
                acc -= self.q;
            }
        }
        acc
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        self.eval_powers(&power_table(x, self.max_exp, self.q))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
}

pub fn power_table(x: &[u64], max_exp: u32, q: u64) -> Vec<Vec<u64>> {
    x.iter()
        .map(|&v| {
            let mut row = Vec::with_capacity(max_exp as usize + 1);
            let mut acc = 1 % q;
            for _ in 0..=max_exp {
                row.push(acc);
                acc = mulmod(acc, v % q, q);
            }
            row
        })
        .collect()
}
