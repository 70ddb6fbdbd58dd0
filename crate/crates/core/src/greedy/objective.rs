//! Integer-valued objectives on intersection profiles. A score of zero means
//! the target property holds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lattice::{char_poly, m_invariant, sigma, FlatSizes, IntersectionProfile};

/// Added to the distance when `m(L)` is negative, so that any real-rooted
/// characteristic polynomial beats every complex one.
pub const NEGATIVE_M_PENALTY: u64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    Simplicial,
    FreeCandidate,
    DoublePoints,
    /// An `(n_k)` configuration on all `n` lines.
    NkConfig { k: usize },
}

impl Objective {
    pub fn score<E>(&self, p: &IntersectionProfile<E>) -> u64 {
        match *self {
            Objective::Simplicial => score_simplicial(p),
            Objective::FreeCandidate => score_free_candidate(p),
            Objective::DoublePoints => score_double_points(p),
            Objective::NkConfig { k } => score_nk_config(p, k),
        }
    }

    /// The score from multiplicities alone, for objectives that need nothing
    /// else.
    pub fn score_sizes(&self, p: &impl FlatSizes) -> Option<u64> {
        match *self {
            Objective::Simplicial => Some(score_simplicial(p)),
            Objective::FreeCandidate => Some(score_free_candidate(p)),
            Objective::DoublePoints => Some(score_double_points(p)),
            Objective::NkConfig { .. } => None,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Simplicial => f.write_str("simplicial"),
            Objective::FreeCandidate => f.write_str("free"),
            Objective::DoublePoints => f.write_str("double-points"),
            Objective::NkConfig { k } => write!(f, "nk:{k}"),
        }
    }
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "simplicial" => Ok(Objective::Simplicial),
            "free" => Ok(Objective::FreeCandidate),
            "double-points" => Ok(Objective::DoublePoints),
            _ => match s.strip_prefix("nk:").map(str::parse) {
                Some(Ok(k)) if k >= 2 => Ok(Objective::NkConfig { k }),
                _ => Err(format!(
                    "unknown objective {s:?} (expected simplicial, free, double-points or nk:<k>)"
                )),
            },
        }
    }
}

pub fn score_simplicial(p: &impl FlatSizes) -> u64 {
    sigma(p).unsigned_abs()
}

/// Zero when `m(L)` is a non-negative square, otherwise the distance to the
/// nearest square (plus [`NEGATIVE_M_PENALTY`] for negative `m`).
pub fn score_free_candidate(p: &impl FlatSizes) -> u64 {
    let Ok(chi) = char_poly(p) else {
        return u64::MAX;
    };
    let m = m_invariant(&chi);
    if m < 0 {
        return m.unsigned_abs() + NEGATIVE_M_PENALTY;
    }
    distance_to_square(m as u64)
}

fn distance_to_square(m: u64) -> u64 {
    let r = isqrt(m);
    (m - r * r).min((r + 1) * (r + 1) - m)
}

fn isqrt(m: u64) -> u64 {
    let mut r = (m as f64).sqrt() as u64;
    while r * r > m {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= m {
        r += 1;
    }
    r
}

pub fn score_double_points(p: &impl FlatSizes) -> u64 {
    p.flat_sizes().iter().filter(|&&m| m == 2).count() as u64
}

/// Greedily picks `n` intersection points, preferring multiplicity `k` and
/// lines that still have fewer than `k` chosen points, then sums how far
/// every line and every chosen point is from carrying exactly `k`.
/// Missing points count `k` each.
pub fn score_nk_config<E>(p: &IntersectionProfile<E>, k: usize) -> u64 {
    let n = p.line_count();
    let pts = p.points();
    let mut on_line = vec![0usize; n];
    let mut taken = vec![false; pts.len()];
    let mut point_cost = 0u64;
    let mut chosen = 0;
    while chosen < n {
        let mut best: Option<(i64, usize)> = None;
        for (i, pt) in pts.iter().enumerate() {
            if taken[i] {
                continue;
            }
            let fits = pt.lines.iter().filter(|&&l| on_line[l] < k).count() as i64;
            let gain = 2 * fits - pt.lines.len() as i64 - (pt.lines.len() as i64 - k as i64).abs();
            if best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, i));
            }
        }
        let Some((_, i)) = best else { break };
        taken[i] = true;
        chosen += 1;
        point_cost += pts[i].lines.len().abs_diff(k) as u64;
        for &l in &pts[i].lines {
            on_line[l] += 1;
        }
    }
    let line_cost: u64 = on_line.iter().map(|&c| c.abs_diff(k) as u64).sum();
    line_cost + point_cost + ((n - chosen) * k) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfplane::PrimeField;
    use crate::lattice::{Arrangement, CharPoly};

    fn profile(q: u64, lines: &[(i64, i64, i64)]) -> IntersectionProfile<crate::gfplane::Fq> {
        let f = PrimeField::new(q).unwrap();
        let ls = lines.iter().map(|&(a, b, c)| f.triple(a, b, c).unwrap()).collect();
        Arrangement::new(f, ls).unwrap().intersection_profile()
    }

    struct Sizes(usize, Vec<usize>);

    impl FlatSizes for Sizes {
        fn line_count(&self) -> usize {
            self.0
        }
        fn flat_sizes(&self) -> Vec<usize> {
            self.1.clone()
        }
    }

    #[test]
    fn simplicial_scores() {
        let generic = profile(101, &[(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3)]);
        assert_eq!(score_simplicial(&generic), 7);
        // near-pencil: four lines through (0:0:1) plus the line at infinity
        let np = profile(101, &[(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 2, 0), (0, 0, 1)]);
        assert_eq!(score_simplicial(&np), 0);
        assert_eq!(score_double_points(&np), 4);
    }

    #[test]
    fn free_candidate_scores() {
        // (t - 1)(t - 4)(t - 6): n = 11, b - n + 1 = 24, m = 4
        let chi = CharPoly { n: 11, b: 34 };
        assert_eq!(m_invariant(&chi), 4);
        assert_eq!(chi.quadratic(), (10, 24));
        let s = Sizes(11, [vec![4; 8], vec![3; 5]].concat());
        assert_eq!(s.flat_sizes().iter().map(|m| m - 1).sum::<usize>(), 34);
        assert_eq!(score_free_candidate(&s), 0);
        assert_eq!(distance_to_square(3), 1);
        assert_eq!(distance_to_square(7), 2);
        assert_eq!(distance_to_square(0), 0);
    }

    #[test]
    fn negative_m_is_penalized() {
        // 35 lines with chi = (t - 1)(t^2 - 34 t + 305): m = 34^2 - 4 * 305 = -64
        let chi = CharPoly { n: 35, b: 339 };
        assert_eq!(m_invariant(&chi), -64);
        let sizes = [vec![2; 339 - 2 * 100 - 3 * 35], vec![3; 100], vec![4; 35]].concat();
        let s = Sizes(35, sizes);
        assert_eq!(s.flat_sizes().iter().map(|m| m - 1).sum::<usize>(), 339);
        assert_eq!(score_free_candidate(&s), 64 + NEGATIVE_M_PENALTY);
    }

    #[test]
    fn double_points_of_generic_and_fano() {
        let generic = profile(101, &[(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3), (1, 5, 11)]);
        assert_eq!(score_double_points(&generic), 15);
        let f2 = PrimeField::new(2).unwrap();
        let fano = Arrangement::new(f2, f2.enumerate_plane()).unwrap().intersection_profile();
        assert_eq!(score_double_points(&fano), 0);
        assert_eq!(score_nk_config(&fano, 3), 0);
    }

    #[test]
    fn pappus_is_a_93_configuration() {
        // points A1..A3 on y = 0, B1..B3 on y = 1 (affine), Pappus line through
        // the three cross joins; lines are the 6 cross joins, the two carriers
        // and the Pappus line, all over Q embedded in F_101
        let f = PrimeField::new(101).unwrap();
        let pt = |x: i64, y: i64| f.triple(x, y, 1).unwrap();
        let a = [pt(0, 0), pt(1, 0), pt(3, 0)];
        let b = [pt(0, 1), pt(2, 1), pt(5, 1)];
        let join = |p: &crate::gfplane::GfTriple, q: &crate::gfplane::GfTriple| crate::field::join(&f, p, q).unwrap();
        let meet = |p: &crate::gfplane::GfTriple, q: &crate::gfplane::GfTriple| crate::field::meet(&f, p, q).unwrap();
        let c1 = meet(&join(&a[0], &b[1]), &join(&a[1], &b[0]));
        let c2 = meet(&join(&a[0], &b[2]), &join(&a[2], &b[0]));
        let lines = vec![
            join(&a[0], &a[1]),
            join(&b[0], &b[1]),
            join(&a[0], &b[1]),
            join(&a[1], &b[0]),
            join(&a[0], &b[2]),
            join(&a[2], &b[0]),
            join(&a[1], &b[2]),
            join(&a[2], &b[1]),
            join(&c1, &c2),
        ];
        let p = Arrangement::new(f, lines).unwrap().intersection_profile();
        assert_eq!(p.tallies()[&3], 9);
        assert_eq!(score_nk_config(&p, 3), 0);
    }

    #[test]
    fn pencil_is_far_from_a_configuration() {
        let p = profile(101, &[(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 2, 0), (1, 3, 0)]);
        assert!(score_nk_config(&p, 3) >= 10);
    }

    #[test]
    fn objective_names_round_trip() {
        for o in [
            Objective::Simplicial,
            Objective::FreeCandidate,
            Objective::DoublePoints,
            Objective::NkConfig { k: 4 },
        ] {
            assert_eq!(o.to_string().parse::<Objective>().unwrap(), o);
        }
        assert!("nk:1".parse::<Objective>().is_err());
        assert!("fast".parse::<Objective>().is_err());
    }
}
