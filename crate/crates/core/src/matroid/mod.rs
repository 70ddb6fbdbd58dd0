//! Simple rank-3 matroids on labeled lines.
//!
//! Lines are labeled `0..n` internally; the triple-index codec and the file
//! formats use 1-based labels. Only point-flats with at least three lines
//! are stored; every pair not covered by a stored flat is an implicit double
//! point.

mod canon;
mod codec;
mod generation;
mod iso;

use std::fmt;

use thiserror::Error;

use crate::lattice::{FlatSizes, IntersectionProfile};

pub use canon::{automorphism_group, canonical_form, canonical_key, AutGroup, CanonicalKey};
pub use codec::{
    decode_triples, encode_triples, parse_appendix, rank_triple, triple_count, unrank_triple,
    AppendixEntry, TripleIndexCode,
};
pub use generation::{closure, generation_number, generation_upper_bound, Generation};
pub use iso::{all_automorphisms, is_isomorphic};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("label {label} out of range for {n} lines")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("flat {flat} has fewer than two distinct lines")]
    FlatTooSmall { flat: usize },
    #[error("pair {{{a}, {b}}} lies in more than one flat")]
    PairCoveredTwice { a: usize, b: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("triple index {index} outside 1..={max}")]
    InvalidIndex { index: u64, max: u64 },
    #[error("triple indices must be strictly increasing (at {index})")]
    UnsortedIndices { index: u64 },
    #[error("inconsistent dependencies: triple ({a}, {b}, {c}) is forced but not listed")]
    InconsistentMatroid { a: usize, b: usize, c: usize },
    #[error("invalid matroid: {0}")]
    Invalid(#[from] Violation),
    #[error("search budget of {0} subsets exhausted")]
    Timeout(u64),
}

/// Checks that labels are in range and that no pair of lines lies in two
/// flats. Labels are 0-based.
pub fn validate_flats(n: usize, flats: &[Vec<usize>]) -> Result<(), Violation> {
    let mut owner = vec![NONE; n * n];
    for (fi, f) in flats.iter().enumerate() {
        if let Some(&label) = f.iter().find(|&&x| x >= n) {
            return Err(Violation::LabelOutOfRange { label, n });
        }
        let mut s = f.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() < 2 {
            return Err(Violation::FlatTooSmall { flat: fi });
        }
        for (k, &a) in s.iter().enumerate() {
            for &b in &s[k + 1..] {
                if owner[a * n + b] != NONE {
                    return Err(Violation::PairCoveredTwice { a, b });
                }
                owner[a * n + b] = fi as u32;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rank3Matroid {
    n: usize,
    /// Sorted flats of size >= 3, in sorted order.
    flats: Vec<Vec<usize>>,
    /// `pair[a * n + b]` is the stored flat containing `{a, b}`, or `NONE`.
    pair: Vec<u32>,
    /// Stored flats through each line.
    line_flats: Vec<Vec<usize>>,
}

impl Rank3Matroid {
    /// Builds a matroid from point-flats (0-based labels). Two-element flats
    /// are accepted and dropped.
    pub fn new(n: usize, flats: Vec<Vec<usize>>) -> Result<Self, MatroidError> {
        validate_flats(n, &flats)?;
        Ok(Self::from_valid(n, flats))
    }

    pub fn uniform(n: usize) -> Self {
        Self::from_valid(n, Vec::new())
    }

    fn from_valid(n: usize, flats: Vec<Vec<usize>>) -> Self {
        let mut flats: Vec<Vec<usize>> = flats
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .filter(|f| f.len() >= 3)
            .collect();
        flats.sort();
        let mut pair = vec![NONE; n * n];
        let mut line_flats = vec![Vec::new(); n];
        for (fi, f) in flats.iter().enumerate() {
            for (k, &a) in f.iter().enumerate() {
                line_flats[a].push(fi);
                for &b in &f[k + 1..] {
                    pair[a * n + b] = fi as u32;
                    pair[b * n + a] = fi as u32;
                }
            }
        }
        Rank3Matroid {
            n,
            flats,
            pair,
            line_flats,
        }
    }

    pub fn from_profile<E>(p: &IntersectionProfile<E>) -> Self {
        let flats = p.points().iter().map(|pt| pt.lines.clone()).collect();
        Self::from_valid(p.line_count(), flats)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Stored flats (size >= 3), sorted.
    pub fn flats(&self) -> &[Vec<usize>] {
        &self.flats
    }

    /// All point-flats including the implicit double points.
    pub fn point_flats(&self) -> Vec<Vec<usize>> {
        let mut all = self.flats.clone();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.pair[a * self.n + b] == NONE {
                    all.push(vec![a, b]);
                }
            }
        }
        all.sort();
        all
    }

    /// The stored flat containing both lines, if the pair is not a double point.
    pub fn flat_of(&self, a: usize, b: usize) -> Option<usize> {
        match self.pair[a * self.n + b] {
            NONE => None,
            f => Some(f as usize),
        }
    }

    /// Size of the point-flat spanned by two distinct lines.
    pub fn pair_size(&self, a: usize, b: usize) -> usize {
        self.flat_of(a, b).map_or(2, |f| self.flats[f].len())
    }

    pub fn line_flats(&self, x: usize) -> &[usize] {
        &self.line_flats[x]
    }

    pub fn is_dependent(&self, a: usize, b: usize, c: usize) -> bool {
        a != b && self.flat_of(a, b).is_some() && self.flat_of(a, b) == self.flat_of(a, c)
    }

    /// Number of points on line `x`.
    pub fn points_on(&self, x: usize) -> usize {
        let through: usize = self.line_flats[x]
            .iter()
            .map(|&f| self.flats[f].len() - 1)
            .sum();
        self.line_flats[x].len() + (self.n - 1 - through)
    }

    /// Sorted sizes of the point-flats through `x` (doubles included).
    pub fn line_signature(&self, x: usize) -> Vec<usize> {
        let mut sig: Vec<usize> = self.line_flats[x].iter().map(|&f| self.flats[f].len()).collect();
        let through: usize = sig.iter().map(|s| s - 1).sum();
        sig.extend(std::iter::repeat_n(2, self.n - 1 - through));
        sig.sort_unstable();
        sig
    }

    pub fn validate(&self) -> Result<(), Violation> {
        validate_flats(self.n, &self.flats)
    }

    /// The matroid with line `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length");
        let flats = self
            .flats
            .iter()
            .map(|f| f.iter().map(|&x| perm[x]).collect())
            .collect();
        Self::from_valid(self.n, flats)
    }

    /// True if `perm` maps the stored flats onto themselves.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        self.flats.iter().all(|f| {
            let img: Vec<usize> = f.iter().map(|&x| perm[x]).collect();
            let g = self.flat_of(img[0], img[1]);
            g.is_some_and(|g| self.flats[g].len() == f.len() && img.iter().all(|&y| self.flats[g].binary_search(&y).is_ok()))
        })
    }
}

impl FlatSizes for Rank3Matroid {
    fn line_count(&self) -> usize {
        self.n
    }

    fn flat_sizes(&self) -> Vec<usize> {
        let covered: usize = self.flats.iter().map(|f| f.len() * (f.len() - 1) / 2).sum();
        let doubles = self.n * self.n.saturating_sub(1) / 2 - covered;
        let mut sizes: Vec<usize> = self.flats.iter().map(Vec::len).collect();
        sizes.extend(std::iter::repeat_n(2, doubles));
        sizes
    }
}

impl fmt::Display for Rank3Matroid {
    /// 1-based listing of the stored flats.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} [", self.n)?;
        for (i, fl) in self.flats.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("{")?;
            for (k, x) in fl.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str("}")?;
        }
        f.write_str("]")
    }
}


#[cfg(test)]
mod tests {
    use super::testdata::*;
    use super::*;
    use crate::lattice::{sigma, tallies};

    #[test]
    fn validator_reports_double_cover() {
        let bad = vec![vec![0, 1, 2], vec![0, 1, 3]];
        assert_eq!(
            validate_flats(4, &bad),
            Err(Violation::PairCoveredTwice { a: 0, b: 1 })
        );
        assert!(Rank3Matroid::new(4, bad).is_err());
        assert!(matches!(
            validate_flats(3, &[vec![0, 5]]),
            Err(Violation::LabelOutOfRange { label: 5, n: 3 })
        ));
        assert!(validate_flats(3, &[vec![1, 1]]).is_err());
        assert!(Rank3Matroid::uniform(7).validate().is_ok());
    }

    #[test]
    fn uniform_and_near_pencil_flats() {
        let u = Rank3Matroid::uniform(3);
        assert_eq!(u.point_flats(), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let np = near_pencil(5);
        assert_eq!(tallies(np.flat_sizes()), [(2, 4), (4, 1)].into());
        assert_eq!(sigma(&np), 0);
        assert_eq!(np.points_on(4), 4);
        assert_eq!(np.points_on(0), 2);
    }

    #[test]
    fn b3_structure() {
        let m = b3();
        assert_eq!(tallies(m.flat_sizes()), [(2, 6), (3, 4), (4, 3)].into());
        assert_eq!(sigma(&m), 0);
        assert!(m.is_dependent(3, 5, 8));
        assert!(!m.is_dependent(3, 6, 8));
        assert_eq!(m.line_signature(0), vec![2, 2, 4, 4]);
        assert_eq!(m.line_signature(3), vec![2, 3, 3, 4]);
    }

    #[test]
    fn relabel_and_automorphism_check() {
        let m = b3();
        let swap_xy = [1, 0, 2, 3, 4, 7, 8, 5, 6];
        assert!(m.is_automorphism(&swap_xy));
        assert_eq!(m.relabel(&swap_xy), m);
        let p = random_perm(9, 3);
        let r = m.relabel(&p);
        assert!(r.validate().is_ok());
        assert_eq!(tallies(r.flat_sizes()), tallies(m.flat_sizes()));
        let not_aut = [1, 2, 0, 3, 4, 5, 6, 7, 8];
        assert!(!m.is_automorphism(&not_aut));
    }

    #[test]
    fn appendix_matroids_are_valid_and_simplicial() {
        let ms = appendix();
        assert_eq!(ms.len(), 11);
        for m in &ms {
            assert!(m.validate().is_ok());
            assert_eq!(sigma(m), 0);
        }
        let ns: Vec<usize> = ms.iter().map(Rank3Matroid::n).collect();
        assert_eq!(ns, [16, 21, 21, 21, 21, 23, 23, 23, 23, 23, 23]);
        assert_eq!(ms[0].flat_sizes().len(), 38);
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(near_pencil(4).to_string(), "n=4 [{1,2,3}]");
    }
}
