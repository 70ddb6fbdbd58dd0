//! Intersection-lattice invariants of rank-3 central arrangements.
//!
//! Everything here is computed from the rank-2 flats (the points of the
//! projective arrangement) and their multiplicities. The characteristic
//! polynomial of a central essential rank-3 arrangement has the closed form
//! `t^3 - n t^2 + b t - c` with `b = sum_v (|A_v| - 1)` and `c = b - n + 1`,
//! so no general Möbius recursion is needed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{self, det3, Field, ProjError, ProjTriple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lines {0} and {1} coincide")]
    DuplicateLines(usize, usize),
    #[error("arrangement is not essential (all lines are concurrent or fewer than 3 lines)")]
    NotEssential,
    #[error(transparent)]
    Proj(#[from] ProjError),
}

/// A finite list of distinct lines in the projective plane over `F`.
#[derive(Debug, Clone)]
pub struct Arrangement<F: Field> {
    field: F,
    lines: Vec<ProjTriple<F::Elem>>,
}

impl<F: Field> Arrangement<F> {
    pub fn new(field: F, lines: Vec<ProjTriple<F::Elem>>) -> Result<Self, LatticeError> {
        let mut seen: HashMap<&ProjTriple<F::Elem>, usize> = HashMap::with_capacity(lines.len());
        for (i, l) in lines.iter().enumerate() {
            if let Some(&j) = seen.get(l) {
                return Err(LatticeError::DuplicateLines(j, i));
            }
            seen.insert(l, i);
        }
        Ok(Arrangement { field, lines })
    }

    /// Skips the distinctness check; the caller has already established it.
    pub(crate) fn new_unchecked(field: F, lines: Vec<ProjTriple<F::Elem>>) -> Self {
        Arrangement { field, lines }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn lines(&self) -> &[ProjTriple<F::Elem>] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn into_lines(self) -> Vec<ProjTriple<F::Elem>> {
        self.lines
    }

    /// True iff the coordinate matrix has rank 3.
    pub fn is_essential(&self) -> bool {
        if self.lines.len() < 3 {
            return false;
        }
        // two distinct lines span a rank-2 space; look for a third outside it
        let (a, b) = (self.lines[0].coords(), self.lines[1].coords());
        self.lines[2..]
            .iter()
            .any(|l| !self.field.is_zero(&det3(&self.field, a, b, l.coords())))
    }

    pub fn intersection_profile(&self) -> IntersectionProfile<F::Elem> {
        let n = self.lines.len();
        let mut groups: HashMap<ProjTriple<F::Elem>, Vec<usize>> = HashMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let p = field::meet(&self.field, &self.lines[i], &self.lines[j])
                    .expect("lines are distinct");
                let inc = groups.entry(p).or_default();
                if inc.last() != Some(&i) && !inc.contains(&i) {
                    inc.push(i);
                }
                inc.push(j);
            }
        }
        let mut points: Vec<PointFlat<F::Elem>> = groups
            .into_iter()
            .map(|(point, mut lines)| {
                lines.sort_unstable();
                lines.dedup();
                PointFlat { point, lines }
            })
            .collect();
        points.sort_by(|a, b| a.point.cmp(&b.point));
        IntersectionProfile { n, points }
    }
}

/// A rank-2 flat: a point together with the sorted indices of its lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointFlat<E> {
    pub point: ProjTriple<E>,
    pub lines: Vec<usize>,
}

/// The rank-2 flats of an arrangement, ordered lexicographically by point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionProfile<E> {
    n: usize,
    points: Vec<PointFlat<E>>,
}

impl<E> IntersectionProfile<E> {
    pub fn points(&self) -> &[PointFlat<E>] {
        &self.points
    }

    /// Number of points of each multiplicity.
    pub fn tallies(&self) -> BTreeMap<usize, usize> {
        tallies(self.flat_sizes())
    }

    /// Checks that every pair of lines lies in exactly one point.
    pub fn check_pair_cover(&self) -> bool {
        let n = self.n;
        let mut seen = vec![false; n * n];
        for p in &self.points {
            if p.lines.len() < 2 {
                return false;
            }
            for (k, &a) in p.lines.iter().enumerate() {
                for &b in &p.lines[k + 1..] {
                    if std::mem::replace(&mut seen[a * n + b], true) {
                        return false;
                    }
                }
            }
        }
        (0..n).all(|a| (a + 1..n).all(|b| seen[a * n + b]))
    }
}

/// Anything that knows its line count and the sizes of all its rank-2 flats
/// (double points included).
pub trait FlatSizes {
    fn line_count(&self) -> usize;
    fn flat_sizes(&self) -> Vec<usize>;
}

impl<E> FlatSizes for IntersectionProfile<E> {
    fn line_count(&self) -> usize {
        self.n
    }

    fn flat_sizes(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.lines.len()).collect()
    }
}

pub fn tallies(sizes: impl IntoIterator<Item = usize>) -> BTreeMap<usize, usize> {
    let mut t = BTreeMap::new();
    for s in sizes {
        *t.entry(s).or_insert(0) += 1;
    }
    t
}

/// `3 + sum_v (|A_v| - 3)`; zero exactly for (combinatorially) simplicial
/// arrangements.
pub fn sigma(p: &impl FlatSizes) -> i64 {
    3 + p.flat_sizes().iter().map(|&m| m as i64 - 3).sum::<i64>()
}

/// Number of line-point incidences, `sum_H (points on H)`.
pub fn incidences(p: &impl FlatSizes) -> i64 {
    p.flat_sizes().iter().map(|&m| m as i64).sum()
}

fn essential(p: &impl FlatSizes) -> bool {
    p.line_count() >= 3 && p.flat_sizes().len() >= 2
}

/// Characteristic polynomial `(t - 1)(t^2 - (n-1) t + (b - n + 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharPoly {
    pub n: i64,
    pub b: i64,
}

impl CharPoly {
    /// Coefficients of `t^3, t^2, t, 1`.
    pub fn coefficients(&self) -> [i64; 4] {
        [1, -self.n, self.b, -(self.b - self.n + 1)]
    }

    /// `(e + f, e f)` for the quadratic factor `t^2 - (e + f) t + e f`.
    pub fn quadratic(&self) -> (i64, i64) {
        (self.n - 1, self.b - self.n + 1)
    }

    pub fn eval(&self, t: i64) -> i64 {
        let [a3, a2, a1, a0] = self.coefficients();
        ((a3 * t + a2) * t + a1) * t + a0
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, p) = self.quadratic();
        let lin = match s {
            0 => String::new(),
            1 => " - t".to_string(),
            -1 => " + t".to_string(),
            s if s > 0 => format!(" - {s}t"),
            s => format!(" + {}t", -s),
        };
        let cst = match p {
            0 => String::new(),
            p if p > 0 => format!(" + {p}"),
            p => format!(" - {}", -p),
        };
        write!(f, "(t - 1)(t^2{lin}{cst})")
    }
}

pub fn char_poly(p: &impl FlatSizes) -> Result<CharPoly, LatticeError> {
    if !essential(p) {
        return Err(LatticeError::NotEssential);
    }
    let b = p.flat_sizes().iter().map(|&m| m as i64 - 1).sum();
    Ok(CharPoly {
        n: p.line_count() as i64,
        b,
    })
}

/// Chamber count of a real realization, `(-1)^3 chi(-1)`.
pub fn zaslavsky_chambers(chi: &CharPoly) -> i64 {
    -chi.eval(-1)
}

/// Chamber count from the Euler characteristic of the projective plane:
/// twice the number of regions `1 + E - V`.
pub fn euler_chambers(p: &impl FlatSizes) -> i64 {
    2 * (1 + incidences(p) - p.flat_sizes().len() as i64)
}

/// Simpliciality via `3 |K(A)| = 2 sum_H |K(A^H)|` with `|K(A^H)| = 2 p_H`.
pub fn simplicial_by_chambers(p: &impl FlatSizes) -> Result<bool, LatticeError> {
    let chambers = zaslavsky_chambers(&char_poly(p)?);
    Ok(3 * chambers == 4 * incidences(p))
}

/// `m(L) = (f - e)^2 = (e + f)^2 - 4 e f`, negative when the roots are not real.
pub fn m_invariant(chi: &CharPoly) -> i64 {
    let (s, p) = chi.quadratic();
    s * s - 4 * p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfplane::PrimeField;
    use crate::numberfield::NumberField;

    fn gf_arr(q: u64, lines: &[(i64, i64, i64)]) -> Arrangement<PrimeField> {
        let f = PrimeField::new(q).unwrap();
        let ls = lines.iter().map(|&(a, b, c)| f.triple(a, b, c).unwrap()).collect();
        Arrangement::new(f, ls).unwrap()
    }

    fn axes() -> Arrangement<PrimeField> {
        gf_arr(101, &[(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    }

    // lines x + k y = 0 share the point (0:0:1); z = 0 is the transversal
    fn near_pencil(n: usize) -> Arrangement<PrimeField> {
        let mut ls: Vec<_> = (0..n as i64 - 1).map(|k| (1, k, 0)).collect();
        ls.push((0, 0, 1));
        gf_arr(101, &ls)
    }

    fn generic(n: usize) -> Arrangement<PrimeField> {
        // points of the moment curve, dualized: no three concurrent for small n
        let ls: Vec<_> = (1..=n as i64).map(|k| (1, k, k * k)).collect();
        gf_arr(101, &ls)
    }

    #[test]
    fn duplicate_lines_rejected() {
        let f = PrimeField::new(7).unwrap();
        let l = vec![f.triple(1, 2, 3).unwrap(), f.triple(2, 4, 6).unwrap()];
        assert!(matches!(Arrangement::new(f, l), Err(LatticeError::DuplicateLines(0, 1))));
    }

    #[test]
    fn axes_profile() {
        let p = axes().intersection_profile();
        assert_eq!(p.tallies(), BTreeMap::from([(2, 3)]));
        assert!(p.check_pair_cover());
        assert_eq!(sigma(&p), 0);
        let chi = char_poly(&p).unwrap();
        assert_eq!(chi, CharPoly { n: 3, b: 3 });
        assert_eq!(chi.coefficients(), [1, -3, 3, -1]);
        assert_eq!(chi.to_string(), "(t - 1)(t^2 - 2t + 1)");
        assert_eq!(zaslavsky_chambers(&chi), 8);
        assert_eq!(euler_chambers(&p), 8);
        assert!(simplicial_by_chambers(&p).unwrap());
        assert_eq!(m_invariant(&chi), 0);
        assert!(axes().is_essential());
    }

    #[test]
    fn profile_points_are_sorted() {
        let p = generic(6).intersection_profile();
        assert!(p.points().windows(2).all(|w| w[0].point < w[1].point));
    }

    #[test]
    fn near_pencils() {
        let p5 = near_pencil(5).intersection_profile();
        assert_eq!(p5.tallies(), BTreeMap::from([(2, 4), (4, 1)]));
        for n in 3..12 {
            let p = near_pencil(n).intersection_profile();
            assert_eq!(sigma(&p), 0, "n = {n}");
            assert!(simplicial_by_chambers(&p).unwrap());
        }
        // n = 4: one triple point and three double points
        let p4 = near_pencil(4).intersection_profile();
        let chi = char_poly(&p4).unwrap();
        assert_eq!(chi.b, 5);
        assert_eq!(zaslavsky_chambers(&chi), 12);
        assert_eq!(euler_chambers(&p4), 12);
    }

    #[test]
    fn generic_arrangements() {
        for n in 3..9usize {
            let p = generic(n).intersection_profile();
            let pairs = (n * (n - 1) / 2) as i64;
            assert_eq!(sigma(&p), 3 - pairs);
            assert_eq!(p.tallies(), BTreeMap::from([(2, pairs as usize)]));
        }
        let p4 = generic(4).intersection_profile();
        // 3 * 14 != 4 * 12
        assert_eq!(zaslavsky_chambers(&char_poly(&p4).unwrap()), 14);
        assert!(!simplicial_by_chambers(&p4).unwrap());
    }

    #[test]
    fn pencil_is_not_essential() {
        let pencil = gf_arr(101, &[(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 2, 0)]);
        assert!(!pencil.is_essential());
        let p = pencil.intersection_profile();
        assert_eq!(char_poly(&p), Err(LatticeError::NotEssential));
        assert!(simplicial_by_chambers(&p).is_err());
    }

    #[test]
    fn m_invariant_examples() {
        // (t - 1)(t^2 - 34 t + 305)
        let chi = CharPoly { n: 35, b: 339 };
        assert_eq!(chi.to_string(), "(t - 1)(t^2 - 34t + 305)");
        assert_eq!(m_invariant(&chi), -64);
        assert_eq!(zaslavsky_chambers(&chi), 680);
        // (t - 1)(t - 4)(t - 6) = (t - 1)(t^2 - 10 t + 24): n = 11, b = 34
        assert_eq!(m_invariant(&CharPoly { n: 11, b: 34 }), 4);
        // (t - 1)(t - k)^2 with k = 3: n = 7, b = 15
        assert_eq!(m_invariant(&CharPoly { n: 7, b: 15 }), 0);
    }

    #[test]
    fn works_over_rationals() {
        let q = NumberField::rational();
        let t = |a: i64, b: i64, c: i64| {
            field::normalize(&q, [q.from_i64(a), q.from_i64(b), q.from_i64(c)]).unwrap()
        };
        // B3-type: x, y, z, x +- y, x +- z, y +- z
        let lines = vec![
            t(1, 0, 0), t(0, 1, 0), t(0, 0, 1),
            t(1, 1, 0), t(1, -1, 0), t(1, 0, 1),
            t(1, 0, -1), t(0, 1, 1), t(0, 1, -1),
        ];
        let a = Arrangement::new(q, lines).unwrap();
        let p = a.intersection_profile();
        assert_eq!(p.tallies(), BTreeMap::from([(2, 6), (3, 4), (4, 3)]));
        assert_eq!(sigma(&p), 0);
        let chi = char_poly(&p).unwrap();
        // exponents 1, 3, 5
        assert_eq!(chi.quadratic(), (8, 15));
        assert_eq!(m_invariant(&chi), 4);
        assert_eq!(zaslavsky_chambers(&chi), 48);
        assert_eq!(euler_chambers(&p), 48);
    }
}
