//! Exact arithmetic in number fields `Q[X]/(f)` over big rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::field::{Field, FieldError, ProjTriple};
use crate::intpoly::{split_terms, IntPoly};

pub type Rational = BigRational;
pub type NfTriple = ProjTriple<NfElem>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NfError {
    #[error("minimal polynomial must be monic of degree at least 1, got {0}")]
    BadMinpoly(String),
    #[error("cannot parse {input:?} as a field element: {reason}")]
    Parse { input: String, reason: String },
}

/// `Q[X]/(minpoly)`; irreducibility is the caller's responsibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    minpoly: IntPoly,
    var: String,
}

/// Residue class represented by its unique representative of degree `< d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NfElem {
    coeffs: Vec<Rational>,
}

impl NfElem {
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = &b[db];
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / lead;
        for (i, y) in b.iter().enumerate() {
            rem[shift + i] -= &c * y;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

impl NumberField {
    pub fn new(minpoly: IntPoly, var: impl Into<String>) -> Result<Self, NfError> {
        match minpoly.degree() {
            Some(d) if d >= 1 && minpoly.is_monic() => Ok(NumberField {
                minpoly,
                var: var.into(),
            }),
            _ => Err(NfError::BadMinpoly(minpoly.to_string())),
        }
    }

    /// The rationals as the degree-1 field `Q[X]/(X)`.
    pub fn rational() -> Self {
        NumberField::new(IntPoly::new(vec![0, 1]), "w").expect("X is monic")
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().expect("nonzero minpoly")
    }

    fn minpoly_rat(&self) -> Vec<Rational> {
        self.minpoly
            .coeffs()
            .iter()
            .map(|&c| Rational::from_integer(c.into()))
            .collect()
    }

    fn reduce(&self, p: Vec<Rational>) -> NfElem {
        let f = self.minpoly_rat();
        let (_, mut r) = poly_divmod(&p, &f);
        r.resize(self.degree(), Rational::zero());
        NfElem { coeffs: r }
    }

    /// Element from ascending rational coefficients (reduced if too long).
    pub fn elem(&self, coeffs: Vec<Rational>) -> NfElem {
        self.reduce(coeffs)
    }

    pub fn from_int_coeffs(&self, coeffs: &[i64]) -> NfElem {
        self.reduce(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn from_rational(&self, r: Rational) -> NfElem {
        self.reduce(vec![r])
    }

    /// The class of `X`.
    pub fn generator(&self) -> NfElem {
        self.reduce(vec![Rational::zero(), Rational::one()])
    }

    pub fn pow(&self, a: &NfElem, e: u32) -> NfElem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn parse_elem(&self, s: &str) -> Result<NfElem, NfError> {
        let err = |reason: &str| NfError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut coeffs: Vec<Rational> = Vec::new();
        for term in split_terms(&compact) {
            let (negative, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (head, deg) = match body.find(self.var.as_str()) {
                None => (body, 0usize),
                Some(pos) => {
                    let tail = &body[pos + self.var.len()..];
                    let deg = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(|| err("expected '^'"))?
                            .parse::<usize>()
                            .map_err(|_| err("bad exponent"))?
                    };
                    (body[..pos].trim_end_matches('*'), deg)
                }
            };
            let mut c = if head.is_empty() {
                Rational::one()
            } else {
                parse_rational(head).ok_or_else(|| err("bad coefficient"))?
            };
            if negative {
                c = -c;
            }
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, Rational::zero());
            }
            coeffs[deg] += c;
        }
        Ok(self.reduce(coeffs))
    }

    /// Compact text form, highest power first, e.g. `-w^3+3w^2-2w+2`.
    pub fn format_elem(&self, a: &NfElem) -> String {
        let mut out = String::new();
        for (deg, c) in a.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let mag = c.abs();
            if deg == 0 {
                out.push_str(&format_rational(&mag));
                continue;
            }
            if !mag.is_one() {
                out.push_str(&format_rational(&mag));
                if !mag.is_integer() {
                    out.push('*');
                }
            }
            out.push_str(&self.var);
            if deg > 1 {
                out.push('^');
                out.push_str(&deg.to_string());
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((n, d)) => {
            let n = n.parse::<BigInt>().ok()?;
            let d = d.parse::<BigInt>().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Field for NumberField {
    type Elem = NfElem;

    fn zero(&self) -> NfElem {
        NfElem {
            coeffs: vec![Rational::zero(); self.degree()],
        }
    }

    fn one(&self) -> NfElem {
        self.from_int_coeffs(&[1])
    }

    fn from_i64(&self, v: i64) -> NfElem {
        self.from_int_coeffs(&[v])
    }

    fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        self.reduce(poly_mul(&a.coeffs, &b.coeffs))
    }

    fn neg(&self, a: &NfElem) -> NfElem {
        NfElem {
            coeffs: a.coeffs.iter().map(|x| -x).collect(),
        }
    }

    fn inv(&self, a: &NfElem) -> Result<NfElem, FieldError> {
        let mut r1 = a.coeffs.clone();
        trim(&mut r1);
        if r1.is_empty() {
            return Err(FieldError::ZeroInverse);
        }
        // extended Euclid: track s with s * a = r (mod f)
        let mut r0 = self.minpoly_rat();
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (quot, rem) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&quot, &s1));
            (r0, r1) = (r1, rem);
            (s0, s1) = (s1, s2);
        }
        if r0.len() != 1 {
            return Err(FieldError::NotInvertible);
        }
        let scale = r0[0].recip();
        Ok(self.reduce(s0.into_iter().map(|c| c * &scale).collect()))
    }

    fn is_zero(&self, a: &NfElem) -> bool {
        a.coeffs.iter().all(|c| c.is_zero())
    }

    fn describe(&self) -> String {
        if self.degree() == 1 && self.minpoly.coeffs() == [0, 1] {
            "Q".to_string()
        } else {
            format!("Q[{}]/({})", self.var, self.minpoly.display_in(&self.var))
        }
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
