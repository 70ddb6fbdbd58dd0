//! Prime fields and the projective plane over them.

use std::fmt;

use thiserror::Error;

use crate::field::{self, Field, FieldError, ProjError, ProjTriple};
use crate::intpoly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("modulus {0} is not a prime below 2^31")]
    NotPrime(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u64,
}

/// Residue in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fq(u32);

impl Fq {
    pub fn value(self) -> u64 {
        self.0 as u64
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type GfTriple = ProjTriple<Fq>;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self, GfError> {
        if q >= 1 << 31 || !is_prime(q) {
            return Err(GfError::NotPrime(q));
        }
        Ok(PrimeField { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Number of points (equivalently lines) of the projective plane.
    pub fn plane_size(&self) -> u64 {
        self.q * self.q + self.q + 1
    }

    pub fn elem(&self, v: i64) -> Fq {
        Fq(v.rem_euclid(self.q as i64) as u32)
    }

    pub fn elem_u(&self, v: u64) -> Fq {
        Fq((v % self.q) as u32)
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a.value();
        let mut acc = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.q;
            }
            base = base * base % self.q;
            e >>= 1;
        }
        Fq(acc as u32)
    }

    /// Normalized triple from signed integer coordinates.
    pub fn triple(&self, a: i64, b: i64, c: i64) -> Result<GfTriple, ProjError> {
        field::normalize(self, [self.elem(a), self.elem(b), self.elem(c)])
    }

    /// All `q^2 + q + 1` normalized triples: `(1:a:b)`, `(0:1:b)`, `(0:0:1)`.
    pub fn enumerate_plane(&self) -> Vec<GfTriple> {
        let q = self.q;
        let raw = |c: [u64; 3]| ProjTriple::new_unchecked(c.map(|v| Fq(v as u32)));
        let mut out = Vec::with_capacity(self.plane_size() as usize);
        out.push(raw([0, 0, 1]));
        for b in 0..q {
            out.push(raw([0, 1, b]));
        }
        for a in 0..q {
            for b in 0..q {
                out.push(raw([1, a, b]));
            }
        }
        out
    }

    /// All roots of `g` in the field, by exhaustive scan.
    pub fn poly_roots(&self, g: &IntPoly) -> Vec<Fq> {
        (0..self.q)
            .filter(|&r| g.eval_mod(r, self.q) == 0)
            .map(|r| Fq(r as u32))
            .collect()
    }
}

impl Field for PrimeField {
    type Elem = Fq;

    fn zero(&self) -> Fq {
        Fq(0)
    }

    fn one(&self) -> Fq {
        Fq(1)
    }

    fn from_i64(&self, v: i64) -> Fq {
        self.elem(v)
    }

    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        let s = a.value() + b.value();
        Fq(if s >= self.q { s - self.q } else { s } as u32)
    }

    fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        let (a, b) = (a.value(), b.value());
        Fq(if a >= b { a - b } else { a + self.q - b } as u32)
    }

    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        Fq((a.value() * b.value() % self.q) as u32)
    }

    fn neg(&self, a: &Fq) -> Fq {
        if a.0 == 0 {
            *a
        } else {
            Fq((self.q - a.value()) as u32)
        }
    }

    fn inv(&self, a: &Fq) -> Result<Fq, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        // extended Euclid on (a, q)
        let (mut r0, mut r1) = (self.q as i64, a.value() as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        Ok(self.elem(t0))
    }

    fn is_zero(&self, a: &Fq) -> bool {
        a.0 == 0
    }

    fn describe(&self) -> String {
        format!("GF({})", self.q)
    }
}
