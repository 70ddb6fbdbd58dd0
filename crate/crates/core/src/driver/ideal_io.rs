//! Plain-text form of a realization ideal:
//!
//! ```text
//! # free-form header comments
//! variables = 2
//! [V]
//! X1^4 - 3*X1^3*X2 + X2^4
//! [E]
//! X1
//! X1 - X2
//! ```
//!
//! Polynomials are scaled to primitive integer form with a positive leading
//! coefficient and printed in decreasing graded-lex order.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::moduli::{MultiPoly, RealizationIdeal};
use crate::numberfield::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealText {
    pub comments: Vec<String>,
    pub nvars: usize,
    pub v_gens: Vec<MultiPoly>,
    pub e_gens: Vec<MultiPoly>,
}

/// Primitive integer multiple of `p` with positive leading coefficient.
pub fn integral(p: &MultiPoly) -> MultiPoly {
    let terms = p.terms_grlex();
    if terms.is_empty() {
        return p.clone();
    }
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for (_, c) in &terms {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    let mut s = Rational::new(den, num);
    if terms[0].1.is_negative() {
        s = -s;
    }
    p.scale(&s)
}

impl IdealText {
    pub fn from_ideal(ideal: &RealizationIdeal, key: Option<&str>) -> Self {
        let mut comments = Vec::new();
        if let Some(key) = key {
            comments.push(format!("key {key}"));
        }
        let gens: Vec<String> = ideal.generators.lines.iter().map(|l| (l + 1).to_string()).collect();
        comments.push(format!(
            "generators {} (first {} fixed to the frame)",
            gens.join(" "),
            ideal.generators.prefix
        ));
        for g in &ideal.gauge {
            let mut s = format!("line {}:", g.line + 1);
            if let Some(c) = g.one {
                let _ = write!(s, " x{}=1", c + 1);
            }
            for &c in &g.zeros {
                let _ = write!(s, " x{}=0", c + 1);
            }
            for &(c, v) in &g.vars {
                let _ = write!(s, " x{}=X{}", c + 1, v + 1);
            }
            comments.push(s);
        }
        IdealText {
            comments,
            nvars: ideal.nvars,
            v_gens: ideal.v_gens.iter().map(integral).collect(),
            e_gens: ideal.e_gens.iter().map(integral).collect(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "variables = {}", self.nvars);
        out.push_str("[V]\n");
        for p in &self.v_gens {
            let _ = writeln!(out, "{p}");
        }
        out.push_str("[E]\n");
        for p in &self.e_gens {
            let _ = writeln!(out, "{p}");
        }
        out
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut comments = Vec::new();
        let mut nvars = None;
        let mut section: Option<bool> = None;
        let mut v_gens = Vec::new();
        let mut e_gens = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                comments.push(c.trim().to_string());
                continue;
            }
            match line {
                "[V]" => section = Some(true),
                "[E]" => section = Some(false),
                _ => {
                    if let Some(v) = line.strip_prefix("variables") {
                        let v = v.trim_start().strip_prefix('=').ok_or_else(|| anyhow!("line {}: expected '='", k + 1))?;
                        nvars = Some(v.trim().parse::<usize>().with_context(|| format!("line {}", k + 1))?);
                        continue;
                    }
                    let Some(nv) = nvars else { bail!("line {}: polynomial before 'variables ='", k + 1) };
                    let p = MultiPoly::parse(line, nv).with_context(|| format!("line {}", k + 1))?;
                    match section {
                        Some(true) => v_gens.push(p),
                        Some(false) => e_gens.push(p),
                        None => bail!("line {}: polynomial outside [V] or [E]", k + 1),
                    }
                }
            }
        }
        Ok(IdealText {
            comments,
            nvars: nvars.ok_or_else(|| anyhow!("missing 'variables ='"))?,
            v_gens,
            e_gens,
        })
    }
}
