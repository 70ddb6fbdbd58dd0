//! Realization spaces of rank-3 matroids.
//!
//! A generating set of lines is fixed; a projective frame among them gets
//! constant coordinates, the other generators get variables, and every other
//! line is built by cross products (join of two points, each the meet of two
//! known lines). Every triple of lines then yields a determinant that must
//! vanish (dependent triple) or must not vanish (independent triple).

pub mod poly;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::field::{det3, normalize, Field, ProjTriple};
use crate::gfplane::{GfTriple, PrimeField};
use crate::matroid::{closure, generation_number, generation_upper_bound, Rank3Matroid};
use crate::numberfield::Rational;
pub use poly::{power_table, ModPoly, MultiPoly};

/// Largest number of variables `ff_point_count` will scan exhaustively.
pub const MAX_SCAN_VARS: usize = 6;

/// Subset budget for the exact generating-set search before falling back to
/// the greedy bound.
const GENERATION_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("generators do not generate the matroid (line {missing} unreachable, 0-based)")]
    ClosureIncomplete { missing: usize },
    #[error("invalid generator choice: {0}")]
    BadGenerators(String),
    #[error("derived line {line} (0-based) has identically zero coordinates")]
    Degenerate { line: usize },
    #[error("dependent triple ({a}, {b}, {c}) (0-based) gives a nonzero constant determinant")]
    Inconsistent { a: usize, b: usize, c: usize },
    #[error("{0} variables exceed the exhaustive scan limit of {MAX_SCAN_VARS}")]
    TooManyVariables(usize),
    #[error("a coefficient denominator vanishes modulo {0}")]
    BadPrime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizationMismatch {
    #[error("expected {expected} coordinate triples, got {got}")]
    Length { expected: usize, got: usize },
    #[error("lines {0} and {1} (0-based) coincide")]
    Duplicate(usize, usize),
    #[error("dependent triple ({0}, {1}, {2}) (0-based) has nonzero determinant")]
    MismatchDependent(usize, usize, usize),
    #[error("independent triple ({0}, {1}, {2}) (0-based) has zero determinant")]
    MismatchIndependent(usize, usize, usize),
}

/// Ordered generating lines; the first `prefix` are in general position and
/// receive the constant frame coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorChoice {
    pub lines: Vec<usize>,
    pub prefix: usize,
}

impl GeneratorChoice {
    /// Checks labels, generation and that the prefix is in general position
    /// (at most four lines, no three through a common point).
    pub fn new(m: &Rank3Matroid, lines: Vec<usize>, prefix: usize) -> Result<Self, ModuliError> {
        let bad = |s: &str| Err(ModuliError::BadGenerators(s.to_string()));
        if prefix > lines.len() || prefix > 4 {
            return bad("prefix longer than the generator list or the frame");
        }
        let mut seen = HashSet::new();
        if lines.iter().any(|&l| l >= m.n() || !seen.insert(l)) {
            return bad("labels out of range or repeated");
        }
        if !general_position(m, &lines[..prefix]) {
            return bad("prefix is not in general position");
        }
        let reached = closure(m, &lines);
        if reached.len() < m.n() {
            let missing = (0..m.n()).find(|x| reached.binary_search(x).is_err()).expect("some missing");
            return Err(ModuliError::ClosureIncomplete { missing });
        }
        Ok(GeneratorChoice { lines, prefix })
    }
}

fn general_position(m: &Rank3Matroid, s: &[usize]) -> bool {
    (0..s.len()).all(|i| {
        (i + 1..s.len()).all(|j| (j + 1..s.len()).all(|k| !m.is_dependent(s[i], s[j], s[k])))
    })
}

/// Orderings of a minimal generating set are compared by the ideal they
/// produce when there are at most this many generators.
const ORDERING_SEARCH_MAX: usize = 6;

/// A minimal generating set, ordered so that the realization ideal comes
/// out simplest: lowest degree, then fewest terms, then homogeneous
/// generators, then the lexicographically smallest ordering. Larger sets
/// fall back to the first general-position subset as the frame.
pub fn choose_generators(m: &Rank3Matroid) -> GeneratorChoice {
    let g = minimal_generators(m);
    let frame = best_frame(m, &g);
    if g.len() <= ORDERING_SEARCH_MAX && frame.len() == 4 {
        if let Some(best) = simplest_ordering(m, &g) {
            return best;
        }
    }
    let mut lines = frame.clone();
    lines.extend(g.iter().filter(|x| !frame.contains(x)));
    GeneratorChoice {
        prefix: frame.len(),
        lines,
    }
}

fn minimal_generators(m: &Rank3Matroid) -> Vec<usize> {
    let mut g = match generation_number(m, Some(GENERATION_BUDGET)) {
        Ok(gen) => gen.witness,
        Err(_) => generation_upper_bound(m).witness,
    };
    // drop anything the rest already generates
    let mut i = 0;
    while i < g.len() {
        let mut rest = g.clone();
        rest.remove(i);
        if closure(m, &rest).len() == m.n() {
            g = rest;
        } else {
            i += 1;
        }
    }
    g.sort_unstable();
    g
}

fn simplest_ordering(m: &Rank3Matroid, g: &[usize]) -> Option<GeneratorChoice> {
    let mut best: Option<((u32, usize, usize), GeneratorChoice)> = None;
    for lines in permutations(g) {
        if !general_position(m, &lines[..4]) {
            continue;
        }
        let choice = GeneratorChoice { lines, prefix: 4 };
        let Ok(sc) = symbolic_coordinates(m, &choice) else { continue };
        let Ok(ideal) = realization_ideal(m, &sc) else { continue };
        let v = &ideal.v_gens;
        let score = (
            v.iter().filter_map(MultiPoly::total_degree).max().unwrap_or(0),
            v.iter().map(MultiPoly::len).sum(),
            v.iter().filter(|p| !p.is_homogeneous()).count(),
        );
        // permutations arrive in lexicographic order, so ties keep the first
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, choice));
        }
    }
    best.map(|(_, c)| c)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn best_frame(m: &Rank3Matroid, g: &[usize]) -> Vec<usize> {
    for size in (1..=g.len().min(4)).rev() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let s: Vec<usize> = idx.iter().map(|&i| g[i]).collect();
            if general_position(m, &s) {
                return s;
            }
            // next combination
            let mut k = size;
            while k > 0 && idx[k - 1] == g.len() - size + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Vec::new()
}

/// How an extra generator's coordinates were pinned down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gauge {
    pub line: usize,
    /// Coordinate set to 1 (the matroid forces it nonzero).
    pub one: Option<usize>,
    /// Coordinates set to 0 (the line passes through that frame vertex).
    pub zeros: Vec<usize>,
    /// Variable index (0-based) of each remaining coordinate.
    pub vars: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub line: usize,
    /// The two points joined, each given by the pair of lines meeting there.
    pub via: [(usize, usize); 2],
}

pub type PolyTriple = [MultiPoly; 3];

#[derive(Debug, Clone)]
pub struct SymbolicCoords {
    pub nvars: usize,
    pub coords: Vec<PolyTriple>,
    pub generators: GeneratorChoice,
    pub gauge: Vec<Gauge>,
    pub derivation: Vec<Derivation>,
}

fn cross(a: &PolyTriple, b: &PolyTriple) -> PolyTriple {
    let m = |x: &MultiPoly, y: &MultiPoly, z: &MultiPoly, w: &MultiPoly| &(x * y) - &(z * w);
    [
        m(&a[1], &b[2], &a[2], &b[1]),
        m(&a[2], &b[0], &a[0], &b[2]),
        m(&a[0], &b[1], &a[1], &b[0]),
    ]
}

fn dot(a: &PolyTriple, b: &PolyTriple) -> MultiPoly {
    let s = &(&a[0] * &b[0]) + &(&a[1] * &b[1]);
    &s + &(&a[2] * &b[2])
}

fn degree(t: &PolyTriple) -> u32 {
    t.iter().filter_map(MultiPoly::total_degree).max().unwrap_or(0)
}

/// Removes the common integer content and common monomial factor of a triple.
fn reduce_triple(t: PolyTriple) -> PolyTriple {
    let nvars = t[0].nvars();
    let mono = t
        .iter()
        .filter(|p| !p.is_zero())
        .map(MultiPoly::monomial_content)
        .reduce(|a, b| a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect())
        .unwrap_or_else(|| vec![0; nvars]);
    let factor = content_factor(t.iter().flat_map(|p| p.terms_grlex().into_iter().map(|(_, c)| c)));
    t.map(|p| p.strip_monomial(&mono).scale(&factor))
}

/// The positive rational that makes the given coefficients coprime integers.
fn content_factor<'a>(coeffs: impl Iterator<Item = &'a Rational>) -> Rational {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for c in coeffs {
        g = g.gcd(c.numer());
        l = l.lcm(c.denom());
    }
    if g.is_zero() {
        Rational::one()
    } else {
        Rational::new(l, g)
    }
}

/// Builds coordinates for every line from the generators.
pub fn symbolic_coordinates(m: &Rank3Matroid, gens: &GeneratorChoice) -> Result<SymbolicCoords, ModuliError> {
    let n = m.n();
    let gens = GeneratorChoice::new(m, gens.lines.clone(), gens.prefix)?;
    let frame: [[i64; 3]; 4] = [[0, 0, 1], [0, 1, 0], [1, 0, 0], [1, 1, 1]];
    let prefix = &gens.lines[..gens.prefix];
    // frame vertex e_j is the meet of these two prefix lines
    let vertex_lines: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

    // allocate variables first so every polynomial shares one ring
    let mut gauge = Vec::new();
    let mut nvars = 0;
    for &l in &gens.lines[gens.prefix..] {
        let mut g = Gauge {
            line: l,
            one: None,
            zeros: Vec::new(),
            vars: Vec::new(),
        };
        for (j, &(p, r)) in vertex_lines.iter().enumerate() {
            if gens.prefix < 3 {
                break;
            }
            if m.is_dependent(l, prefix[p], prefix[r]) {
                g.zeros.push(j);
            } else if g.one.is_none() {
                g.one = Some(j);
            }
        }
        for j in 0..3 {
            if g.one != Some(j) && !g.zeros.contains(&j) {
                g.vars.push((j, nvars));
                nvars += 1;
            }
        }
        gauge.push(g);
    }

    let mut coords: Vec<Option<PolyTriple>> = vec![None; n];
    for (i, &l) in prefix.iter().enumerate() {
        coords[l] = Some(frame[i].map(|v| MultiPoly::from_i64(nvars, v)));
    }
    for g in &gauge {
        let mut t: PolyTriple = [0; 3].map(|_| MultiPoly::zero(nvars));
        if let Some(j) = g.one {
            t[j] = MultiPoly::from_i64(nvars, 1);
        }
        for &(j, v) in &g.vars {
            t[j] = MultiPoly::var(nvars, v);
        }
        coords[g.line] = Some(t);
    }

    let mut derivation = Vec::new();
    loop {
        if coords.iter().all(Option::is_some) {
            break;
        }
        // best known point of every flat with two known lines
        let points: Vec<Option<((usize, usize), PolyTriple, u32)>> = m
            .flats()
            .iter()
            .map(|f| {
                let known: Vec<usize> = f.iter().copied().filter(|&x| coords[x].is_some()).collect();
                let mut best: Option<(u32, (usize, usize))> = None;
                for (i, &a) in known.iter().enumerate() {
                    for &b in &known[i + 1..] {
                        let d = degree(coords[a].as_ref().unwrap()) + degree(coords[b].as_ref().unwrap());
                        if best.is_none_or(|(bd, _)| d < bd) {
                            best = Some((d, (a, b)));
                        }
                    }
                }
                best.map(|(_, (a, b))| {
                    let p = reduce_triple(cross(coords[a].as_ref().unwrap(), coords[b].as_ref().unwrap()));
                    let d = degree(&p);
                    ((a, b), p, d)
                })
            })
            .collect();
        let mut fresh = Vec::new();
        for x in (0..n).filter(|&x| coords[x].is_none()) {
            let through: Vec<usize> = m
                .line_flats(x)
                .iter()
                .copied()
                .filter(|&f| points[f].is_some())
                .collect();
            let mut best: Option<(u32, usize, usize)> = None;
            for (i, &f) in through.iter().enumerate() {
                for &h in &through[i + 1..] {
                    let d = points[f].as_ref().unwrap().2 + points[h].as_ref().unwrap().2;
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, f, h));
                    }
                }
            }
            if let Some((_, f, h)) = best {
                let (pf, ph) = (points[f].as_ref().unwrap(), points[h].as_ref().unwrap());
                let t = reduce_triple(cross(&pf.1, &ph.1));
                if t.iter().all(MultiPoly::is_zero) {
                    return Err(ModuliError::Degenerate { line: x });
                }
                fresh.push((x, t));
                derivation.push(Derivation {
                    line: x,
                    via: [pf.0, ph.0],
                });
            }
        }
        if fresh.is_empty() {
            let missing = coords.iter().position(Option::is_none).expect("some missing");
            return Err(ModuliError::ClosureIncomplete { missing });
        }
        for (x, t) in fresh {
            coords[x] = Some(t);
        }
    }
    Ok(SymbolicCoords {
        nvars,
        coords: coords.into_iter().map(Option::unwrap).collect(),
        generators: gens,
        gauge,
        derivation,
    })
}

impl SymbolicCoords {
    /// Concrete coordinates over `F_q` at a parameter point; `None` if some
    /// line degenerates to the zero vector.
    pub fn specialize(&self, field: &PrimeField, point: &[u64]) -> Option<Vec<GfTriple>> {
        let q = field.q();
        self.coords
            .iter()
            .map(|t| {
                let raw = t
                    .each_ref()
                    .map(|p| field.elem_u(p.to_mod(q).expect("integral coordinates").eval(point)));
                normalize(field, raw).ok()
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct RealizationIdeal {
    pub nvars: usize,
    /// Must vanish. Normalized, deduplicated, identically zero ones dropped.
    pub v_gens: Vec<MultiPoly>,
    /// Must not vanish. Normalized and deduplicated.
    pub e_gens: Vec<MultiPoly>,
    pub generators: GeneratorChoice,
    pub gauge: Vec<Gauge>,
}

impl RealizationIdeal {
    /// True when some non-vanishing condition is identically zero.
    pub fn e_contains_zero(&self) -> bool {
        self.e_gens.iter().any(MultiPoly::is_zero)
    }
}

pub fn realization_ideal(m: &Rank3Matroid, sc: &SymbolicCoords) -> Result<RealizationIdeal, ModuliError> {
    let n = m.n();
    let mut v_gens = Vec::new();
    let mut e_gens = Vec::new();
    let mut v_seen = HashSet::new();
    let mut e_seen = HashSet::new();
    for b in 0..n {
        for c in b + 1..n {
            let bc = cross(&sc.coords[b], &sc.coords[c]);
            for a in 0..b {
                let d = dot(&sc.coords[a], &bc).normalized();
                if m.is_dependent(a, b, c) {
                    if d.is_zero() {
                        continue;
                    }
                    if d.is_constant() {
                        return Err(ModuliError::Inconsistent { a, b, c });
                    }
                    if v_seen.insert(d.clone()) {
                        v_gens.push(d);
                    }
                } else if e_seen.insert(d.clone()) {
                    e_gens.push(d);
                }
            }
        }
    }
    Ok(RealizationIdeal {
        nvars: sc.nvars,
        v_gens,
        e_gens,
        generators: sc.generators.clone(),
        gauge: sc.gauge.clone(),
    })
}

/// Checks that the labeled lines realize `m` exactly over `field`.
pub fn verify_realization<F: Field>(
    m: &Rank3Matroid,
    field: &F,
    coords: &[ProjTriple<F::Elem>],
) -> Result<(), RealizationMismatch> {
    let n = m.n();
    if coords.len() != n {
        return Err(RealizationMismatch::Length {
            expected: n,
            got: coords.len(),
        });
    }
    for a in 0..n {
        for b in a + 1..n {
            if coords[a] == coords[b] {
                return Err(RealizationMismatch::Duplicate(a, b));
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let z = field.is_zero(&det3(field, coords[a].coords(), coords[b].coords(), coords[c].coords()));
                match (m.is_dependent(a, b, c), z) {
                    (true, false) => return Err(RealizationMismatch::MismatchDependent(a, b, c)),
                    (false, true) => return Err(RealizationMismatch::MismatchIndependent(a, b, c)),
                    _ => {}
                }
            }
        }
    }
    Ok(())
}

struct ModIdeal {
    q: u64,
    nvars: usize,
    max_exp: u32,
    v: Vec<ModPoly>,
    e: Vec<ModPoly>,
}

impl ModIdeal {
    fn new(ideal: &RealizationIdeal, q: u64) -> Result<Self, ModuliError> {
        if ideal.nvars > MAX_SCAN_VARS {
            return Err(ModuliError::TooManyVariables(ideal.nvars));
        }
        let conv = |ps: &[MultiPoly]| -> Result<Vec<ModPoly>, ModuliError> {
            ps.iter()
                .map(|p| p.to_mod(q).ok_or(ModuliError::BadPrime(q)))
                .collect()
        };
        let v = conv(&ideal.v_gens)?;
        let e = conv(&ideal.e_gens)?;
        let max_exp = v.iter().chain(&e).map(ModPoly::max_exp).max().unwrap_or(0);
        Ok(ModIdeal {
            q,
            nvars: ideal.nvars,
            max_exp,
            v,
            e,
        })
    }

    fn point(&self, mut i: u64) -> Vec<u64> {
        let mut x = vec![0; self.nvars];
        for slot in x.iter_mut() {
            *slot = i % self.q;
            i /= self.q;
        }
        x
    }

    fn holds(&self, x: &[u64]) -> bool {
        let pw = power_table(x, self.max_exp, self.q);
        self.v.iter().all(|p| p.eval_powers(&pw) == 0) && self.e.iter().all(|p| p.eval_powers(&pw) != 0)
    }

    fn size(&self) -> u64 {
        self.q.pow(self.nvars as u32)
    }
}

/// Number of points of `F_q^k` where every `v_gens` vanishes and no `e_gens` does.
pub fn ff_point_count(ideal: &RealizationIdeal, q: u64, exec: Execution) -> Result<u64, ModuliError> {
    let mi = ModIdeal::new(ideal, q)?;
    Ok(exec.sum_range(mi.size(), |i| mi.holds(&mi.point(i)) as u64))
}

/// The points counted by [`ff_point_count`], in scan order (first variable
/// varies fastest).
pub fn ff_solutions(ideal: &RealizationIdeal, q: u64) -> Result<Vec<Vec<u64>>, ModuliError> {
    let mi = ModIdeal::new(ideal, q)?;
    Ok((0..mi.size())
        .map(|i| mi.point(i))
        .filter(|x| mi.holds(x))
        .collect())
}
