//! Univariate polynomials with small integer coefficients, used for root
//! polynomials in the search and for number-field minimal polynomials.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial {input:?}: {reason}")]
pub struct ParsePolyError {
    pub input: String,
    pub reason: String,
}

/// Coefficients in ascending degree order, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// From coefficients listed highest degree first.
    pub fn from_descending(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().rev().copied().collect())
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn eval_mod(&self, x: u64, q: u64) -> u64 {
        let q128 = q as i128;
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x as i128 + c as i128).rem_euclid(q128);
        }
        acc as u64
    }

    /// Parse with a given variable name, e.g. `X^4 - 3X^3 + 3*X^2 - 3X + 1`.
    pub fn parse_in(s: &str, var: &str) -> Result<Self, ParsePolyError> {
        let err = |reason: &str| ParsePolyError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut coeffs: Vec<i64> = Vec::new();
        for term in split_terms(&compact) {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(term)),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coef, deg) = match body.find(var) {
                None => (body.parse::<i64>().map_err(|_| err("bad constant"))?, 0usize),
                Some(pos) => {
                    let head = body[..pos].trim_end_matches('*');
                    let coef = if head.is_empty() {
                        1
                    } else {
                        head.parse::<i64>().map_err(|_| err("bad coefficient"))?
                    };
                    let tail = &body[pos + var.len()..];
                    let deg = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(|| err("expected '^'"))?
                            .parse::<usize>()
                            .map_err(|_| err("bad exponent"))?
                    };
                    (coef, deg)
                }
            };
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, 0);
            }
            coeffs[deg] += sign * coef;
        }
        Ok(IntPoly::new(coeffs))
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (deg, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            match deg {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if mag != 1 {
                        out.push_str(&mag.to_string());
                    }
                    out.push_str(var);
                    if deg > 1 {
                        out.push('^');
                        out.push_str(&deg.to_string());
                    }
                }
            }
        }
        out
    }
}

/// Split at top-level `+`/`-` signs, keeping the sign with its term.
pub(crate) fn split_terms(s: &str) -> Vec<&str> {
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    terms
}

impl FromStr for IntPoly {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IntPoly::parse_in(s, "X")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("X"))
    }
}
