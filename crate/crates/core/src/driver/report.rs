//! Combinatorial summary of an arrangement or matroid.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::lattice::{
    char_poly, euler_chambers, m_invariant, sigma, simplicial_by_chambers, tallies, zaslavsky_chambers, CharPoly,
    FlatSizes,
};
use crate::matroid::{automorphism_group, canonical_key, Rank3Matroid};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub field: Option<String>,
    pub n: usize,
    pub essential: bool,
    pub sigma: i64,
    #[serde(serialize_with = "display_opt")]
    pub chi: Option<CharPoly>,
    pub m: Option<i64>,
    pub zaslavsky: Option<i64>,
    pub euler: i64,
    pub simplicial: bool,
    pub tallies: BTreeMap<usize, usize>,
    #[serde(serialize_with = "display")]
    pub aut_order: BigUint,
    pub key: String,
}

fn display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn display_opt<T: fmt::Display, S: serde::Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

impl Report {
    /// `essential` comes from the caller because a matroid alone cannot tell
    /// whether the lines of a realization share a common point at infinity;
    /// for a matroid it is equivalent to not being a pencil.
    pub fn new(m: &Rank3Matroid, essential: bool, field: Option<String>) -> Self {
        let chi = char_poly(m).ok();
        let simplicial = simplicial_by_chambers(m).unwrap_or(false);
        Report {
            field,
            n: m.n(),
            essential,
            sigma: sigma(m),
            chi,
            m: chi.as_ref().map(m_invariant),
            zaslavsky: chi.as_ref().map(zaslavsky_chambers),
            euler: euler_chambers(m),
            simplicial,
            tallies: tallies(m.flat_sizes()),
            aut_order: automorphism_group(m).order,
            key: canonical_key(m).to_string(),
        }
    }

    /// True for a matroid whose lines do not all pass through one point.
    pub fn matroid_is_essential(m: &Rank3Matroid) -> bool {
        !m.flats().iter().any(|f| f.len() == m.n())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(field) = &self.field {
            writeln!(f, "field: {field}")?;
        }
        writeln!(f, "lines: {}", self.n)?;
        writeln!(f, "essential: {}", self.essential)?;
        writeln!(f, "sigma: {}", self.sigma)?;
        match (&self.chi, self.m) {
            (Some(chi), Some(m)) => {
                writeln!(f, "chi: {chi}")?;
                writeln!(f, "m: {m}")?;
            }
            _ => writeln!(f, "chi: undefined (not essential)")?,
        }
        match self.zaslavsky {
            Some(z) => writeln!(f, "chambers: {z} (zaslavsky), {} (euler)", self.euler)?,
            None => writeln!(f, "chambers: {} (euler)", self.euler)?,
        }
        writeln!(f, "simplicial: {}", self.simplicial)?;
        let t: Vec<String> = self.tallies.iter().map(|(k, v)| format!("t{k}={v}")).collect();
        writeln!(f, "multiplicities: {}", t.join(" "))?;
        writeln!(f, "automorphisms: {}", self.aut_order)?;
        writeln!(f, "key: {}", self.key)
    }
}
