//! Randomized greedy search for line arrangements over prime fields.
//!
//! Each step joins two random intersection points, swaps the new line in for
//! a random unprotected line and keeps the result if the objective improves.
//! A protected prefix of fixed lines can force an algebraic element (a root
//! of a given polynomial) or generic elements into the arrangement.

pub mod objective;

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::{Hash, Hasher};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::field::{self, Field};
use crate::gfplane::{Fq, GfTriple, PrimeField};
use crate::intpoly::IntPoly;
use crate::lattice::{Arrangement, FlatSizes, IntersectionProfile};

pub use objective::{
    score_double_points, score_free_candidate, score_nk_config, score_simplicial, Objective,
};

pub const DEFAULT_MAX_ITERS: u64 = 50_000;
pub const DEFAULT_RESTARTS: u32 = 20;
pub const DEFAULT_RETRIES: u32 = 64;

/// Draws allowed per requested line when filling the initial arrangement.
const DRAWS_PER_LINE: usize = 1_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreedyError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("{w} is not a root of {g} modulo {q}")]
    NotARoot { w: u64, g: String, q: u64 },
    #[error("could not draw {wanted} distinct lines from the coefficient palette")]
    PaletteExhausted { wanted: usize },
}

/// Lines fixed at initialization and never removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Prefix {
    None,
    /// `(0:0:1), (0:1:0), (1:0:0), (1:1:1), (1:0:w)` with `g(w) = 0`.
    Algebraic { w: u64, g: IntPoly },
    /// The four frame lines, then `m` lines `(1 : w_{j mod k} : j div k)`;
    /// `m` defaults to `k + 1`.
    Transcendental { ws: Vec<u64>, m: Option<usize> },
}

/// Where the coefficients of unprotected initial lines come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Palette {
    /// Uniform over the field.
    Uniform,
    /// Uniform over a list of small integers.
    Small(Vec<i64>),
    /// `a + b w` over the listed pairs, with `w` taken from the prefix.
    Algebraic(Vec<(i64, i64)>),
}

impl Palette {
    /// `{±a ± b w : a, b ∈ {0, 1, 2}}`.
    pub fn algebraic_default() -> Self {
        let mut pairs = Vec::new();
        for a in -2..=2 {
            for b in -2..=2 {
                pairs.push((a, b));
            }
        }
        Palette::Algebraic(pairs)
    }

    pub fn small_default() -> Self {
        Palette::Small((-2..=2).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Acceptance {
    /// Keep a candidate only if its score is strictly lower.
    Strict,
    /// Also keep equal scores, unless the arrangement was visited among the
    /// last `tabu` accepted states.
    NonIncreasing { tabu: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub q: u64,
    pub objective: Objective,
    pub prefix: Prefix,
    pub palette: Palette,
    pub max_iters: u64,
    pub restarts: u32,
    pub retries: u32,
    pub acceptance: Acceptance,
    pub seed: u64,
}

impl SearchConfig {
    /// Plain mode with the default budget and the palette matching the prefix.
    pub fn new(n: usize, q: u64, objective: Objective, prefix: Prefix, seed: u64) -> Self {
        let palette = match prefix {
            Prefix::None => Palette::Uniform,
            Prefix::Algebraic { .. } => Palette::algebraic_default(),
            Prefix::Transcendental { .. } => Palette::small_default(),
        };
        SearchConfig {
            n,
            q,
            objective,
            prefix,
            palette,
            max_iters: DEFAULT_MAX_ITERS,
            restarts: DEFAULT_RESTARTS,
            retries: DEFAULT_RETRIES,
            acceptance: Acceptance::Strict,
            seed,
        }
    }

    pub fn field(&self) -> Result<PrimeField, GreedyError> {
        PrimeField::new(self.q).map_err(|e| GreedyError::InvalidConfig(e.to_string()))
    }

    /// The protected lines, checked against the field and the line count.
    pub fn prefix_lines(&self) -> Result<Vec<GfTriple>, GreedyError> {
        let f = self.field()?;
        let t = |a: i64, b: i64, c: i64| f.triple(a, b, c).expect("nonzero");
        let frame = vec![t(0, 0, 1), t(0, 1, 0), t(1, 0, 0), t(1, 1, 1)];
        let lines = match &self.prefix {
            Prefix::None => Vec::new(),
            Prefix::Algebraic { w, g } => {
                if g.eval_mod(*w, self.q) != 0 {
                    return Err(GreedyError::NotARoot {
                        w: *w,
                        g: g.display_in("X"),
                        q: self.q,
                    });
                }
                let mut l = frame;
                l.push(t(1, 0, *w as i64));
                l
            }
            Prefix::Transcendental { ws, m } => {
                if ws.is_empty() {
                    return Err(GreedyError::InvalidConfig("no transcendental elements given".into()));
                }
                let m = m.unwrap_or(ws.len() + 1);
                let mut l = frame;
                for j in 0..m {
                    l.push(t(1, ws[j % ws.len()] as i64, (j / ws.len()) as i64));
                }
                l
            }
        };
        let distinct: HashSet<&GfTriple> = lines.iter().collect();
        if distinct.len() < lines.len() {
            return Err(GreedyError::InvalidConfig("protected lines coincide".into()));
        }
        Ok(lines)
    }

    pub fn validate(&self) -> Result<(), GreedyError> {
        let f = self.field()?;
        if self.n < 3 {
            return Err(GreedyError::InvalidConfig(format!("need at least 3 lines, got {}", self.n)));
        }
        if self.n as u64 > f.plane_size() {
            return Err(GreedyError::InvalidConfig(format!(
                "{} lines do not fit in a plane with {} lines",
                self.n,
                f.plane_size()
            )));
        }
        let protected = self.prefix_lines()?.len();
        if protected >= self.n {
            return Err(GreedyError::InvalidConfig(format!(
                "protected prefix of {protected} lines leaves nothing to move in {} lines",
                self.n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub arrangement: Arrangement<PrimeField>,
    pub score: u64,
    /// Steps taken over all restarts.
    pub iterations: u64,
    /// Scores after each accepted step of the reported restart.
    pub trace: Vec<u64>,
    pub restarts_used: u32,
    pub terminated: bool,
    pub protected: usize,
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The protected prefix followed by distinct palette lines, essential.
pub fn random_initial(cfg: &SearchConfig, rng: &mut impl Rng) -> Result<Arrangement<PrimeField>, GreedyError> {
    cfg.validate()?;
    let f = cfg.field()?;
    let prefix = cfg.prefix_lines()?;
    let w = match &cfg.prefix {
        Prefix::Algebraic { w, .. } => Some(*w),
        _ => None,
    };
    let coeff = |rng: &mut dyn rand::RngCore| -> Fq {
        match &cfg.palette {
            Palette::Uniform => f.elem_u(rng.gen_range(0..cfg.q)),
            Palette::Small(vals) => f.elem(*vals.choose(rng).expect("nonempty palette")),
            Palette::Algebraic(pairs) => {
                let (a, b) = *pairs.choose(rng).expect("nonempty palette");
                let wf = f.elem_u(w.unwrap_or(0));
                f.add(&f.elem(a), &f.mul(&f.elem(b), &wf))
            }
        }
    };
    let mut budget = DRAWS_PER_LINE * cfg.n;
    loop {
        let mut lines = prefix.clone();
        let mut seen: HashSet<GfTriple> = lines.iter().cloned().collect();
        while lines.len() < cfg.n {
            if budget == 0 {
                return Err(GreedyError::PaletteExhausted { wanted: cfg.n });
            }
            budget -= 1;
            let raw = [coeff(rng), coeff(rng), coeff(rng)];
            if let Ok(l) = field::normalize(&f, raw) {
                if seen.insert(l.clone()) {
                    lines.push(l);
                }
            }
        }
        let arr = Arrangement::new_unchecked(f, lines);
        if arr.is_essential() {
            return Ok(arr);
        }
    }
}

/// Replace line `out` by `line`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub out: usize,
    pub line: GfTriple,
}

/// Joins two random intersection points (the join must be new) and picks a
/// random line outside the first `protected` to give way. `None` if
/// `retries` draws found no new join.
pub fn draw_move(
    arr: &Arrangement<PrimeField>,
    profile: &IntersectionProfile<Fq>,
    protected: usize,
    retries: u32,
    rng: &mut impl Rng,
) -> Option<Move> {
    let pts = profile.points();
    if pts.len() < 2 || protected >= arr.len() {
        return None;
    }
    for _ in 0..retries {
        let i = rng.gen_range(0..pts.len());
        let j = rng.gen_range(0..pts.len() - 1);
        let j = if j >= i { j + 1 } else { j };
        let line = field::join(arr.field(), &pts[i].point, &pts[j].point).expect("distinct points");
        if arr.lines().contains(&line) {
            continue;
        }
        let out = rng.gen_range(protected..arr.len());
        return Some(Move { out, line });
    }
    None
}

pub fn apply_move(arr: &Arrangement<PrimeField>, mv: &Move) -> Arrangement<PrimeField> {
    let mut lines = arr.lines().to_vec();
    lines[mv.out] = mv.line.clone();
    Arrangement::new_unchecked(*arr.field(), lines)
}

/// One candidate arrangement, or `None` when no move was found.
pub fn greedy_step(
    arr: &Arrangement<PrimeField>,
    profile: &IntersectionProfile<Fq>,
    protected: usize,
    retries: u32,
    rng: &mut impl Rng,
) -> Option<Arrangement<PrimeField>> {
    draw_move(arr, profile, protected, retries, rng).map(|mv| apply_move(arr, &mv))
}

/// Point multiplicities of the current arrangement, enough to get the
/// multiplicity tally after a move from `n - 1` meets instead of `n^2 / 2`.
struct SizeIndex {
    size_of: HashMap<GfTriple, usize>,
    /// Profile point indices on each line.
    on_line: Vec<Vec<usize>>,
    /// `tally[m]` = number of points of multiplicity `m`.
    tally: Vec<usize>,
}

impl SizeIndex {
    fn new(n: usize, profile: &IntersectionProfile<Fq>) -> Self {
        let mut size_of = HashMap::with_capacity(profile.points().len());
        let mut on_line = vec![Vec::new(); n];
        let mut tally = vec![0; n + 1];
        for (i, pt) in profile.points().iter().enumerate() {
            size_of.insert(pt.point.clone(), pt.lines.len());
            tally[pt.lines.len()] += 1;
            for &l in &pt.lines {
                on_line[l].push(i);
            }
        }
        SizeIndex { size_of, on_line, tally }
    }

    fn tally_after(&self, arr: &Arrangement<PrimeField>, profile: &IntersectionProfile<Fq>, mv: &Move) -> Vec<usize> {
        let f = arr.field();
        let mut t = self.tally.clone();
        // the new line meets each kept line; count kept lines per point
        let mut through: HashMap<GfTriple, usize> = HashMap::with_capacity(arr.len());
        for (j, l) in arr.lines().iter().enumerate() {
            if j != mv.out {
                let p = field::meet(f, &mv.line, l).expect("new line is not in the arrangement");
                *through.entry(p).or_default() += 1;
            }
        }
        for &pi in &self.on_line[mv.out] {
            let pt = &profile.points()[pi];
            if through.contains_key(&pt.point) {
                continue;
            }
            let m = pt.lines.len();
            t[m] -= 1;
            if m > 2 {
                t[m - 1] += 1;
            }
        }
        for (p, k) in through {
            if let Some(&old) = self.size_of.get(&p) {
                t[old] -= 1;
            }
            t[k + 1] += 1;
        }
        t
    }
}

/// Flat sizes given as a multiplicity tally.
struct Tally<'a> {
    n: usize,
    counts: &'a [usize],
}

impl FlatSizes for Tally<'_> {
    fn line_count(&self) -> usize {
        self.n
    }

    fn flat_sizes(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(m, &c)| std::iter::repeat_n(m, c))
            .collect()
    }
}

/// Records `h` unless it is already among the last `len` states.
fn remember(tabu: &mut VecDeque<u64>, len: usize, h: u64) -> bool {
    if tabu.contains(&h) {
        return false;
    }
    tabu.push_back(h);
    if tabu.len() > len {
        tabu.pop_front();
    }
    true
}

fn state_hash(arr: &Arrangement<PrimeField>) -> u64 {
    let mut sorted = arr.lines().to_vec();
    sorted.sort();
    let mut h = std::collections::hash_map::DefaultHasher::new();
    sorted.hash(&mut h);
    h.finish()
}

/// Greedy descent with restarts. Returns the first restart that reaches
/// score zero, or else the best final arrangement over all restarts.
pub fn greedy_run(cfg: &SearchConfig) -> Result<SearchOutcome, GreedyError> {
    cfg.validate()?;
    let protected = cfg.prefix_lines()?.len();
    let n = cfg.n;
    let mut rng = rng_for(cfg.seed);
    let mut iterations = 0u64;
    let mut best: Option<SearchOutcome> = None;
    for restart in 0..cfg.restarts.max(1) {
        let mut arr = random_initial(cfg, &mut rng)?;
        let mut profile = arr.intersection_profile();
        let mut sizes = SizeIndex::new(n, &profile);
        let mut score = cfg.objective.score(&profile);
        let mut trace = Vec::new();
        let mut tabu: VecDeque<u64> = VecDeque::new();
        let mut steps = 0u64;
        while score > 0 && steps < cfg.max_iters {
            steps += 1;
            let Some(mv) = draw_move(&arr, &profile, protected, cfg.retries, &mut rng) else {
                continue;
            };
            let t = sizes.tally_after(&arr, &profile, &mv);
            // all lines through one point: rank 2
            if t[n] > 0 {
                continue;
            }
            let (cs, full) = match cfg.objective.score_sizes(&Tally { n, counts: &t }) {
                Some(cs) => (cs, None),
                None => {
                    let cp = apply_move(&arr, &mv).intersection_profile();
                    (cfg.objective.score(&cp), Some(cp))
                }
            };
            let take = match cfg.acceptance {
                Acceptance::Strict => cs < score,
                Acceptance::NonIncreasing { tabu: len } => {
                    cs < score || (cs == score && remember(&mut tabu, len, state_hash(&apply_move(&arr, &mv))))
                }
            };
            if take {
                arr = apply_move(&arr, &mv);
                profile = full.unwrap_or_else(|| arr.intersection_profile());
                sizes = SizeIndex::new(n, &profile);
                score = cs;
                trace.push(cs);
            }
        }
        iterations += steps;
        let outcome = SearchOutcome {
            arrangement: arr,
            score,
            iterations,
            trace,
            restarts_used: restart + 1,
            terminated: score == 0,
            protected,
        };
        if outcome.terminated {
            return Ok(outcome);
        }
        if best.as_ref().is_none_or(|b| outcome.score < b.score) {
            best = Some(outcome);
        }
    }
    let mut out = best.expect("at least one restart");
    out.iterations = iterations;
    out.restarts_used = cfg.restarts.max(1);
    Ok(out)
}

/// One search per `(q, w)`: `w = None` runs plain mode, otherwise `w` replaces
/// the element of the template's algebraic or transcendental prefix (a plain
/// template with a `w` runs transcendental mode on that single element). Each run
/// is seeded from the template seed, `q` and `w`, so results do not depend on
/// scheduling. Only terminated runs are returned, in plan order; plan entries
/// whose configuration is invalid (e.g. `w` not a root of `g`) are skipped.
pub fn prime_sweep(plan: &[(u64, Option<u64>)], template: &SearchConfig, exec: Execution) -> Vec<(u64, Option<u64>, SearchOutcome)> {
    let jobs: Vec<(u64, Option<u64>)> = plan.to_vec();
    let results = exec.map(jobs, |(q, w)| {
        let cfg = sweep_config(template, q, w);
        greedy_run(&cfg).ok().filter(|o| o.terminated).map(|o| (q, w, o))
    });
    results.into_iter().flatten().collect()
}

/// The configuration `prime_sweep` uses for one plan entry.
pub fn sweep_config(template: &SearchConfig, q: u64, w: Option<u64>) -> SearchConfig {
    let mut cfg = template.clone();
    cfg.q = q;
    cfg.prefix = match (&template.prefix, w) {
        (_, None) => Prefix::None,
        (Prefix::Transcendental { m, .. }, Some(w)) => Prefix::Transcendental { ws: vec![w], m: *m },
        (Prefix::Algebraic { g, .. }, Some(w)) => Prefix::Algebraic { w, g: g.clone() },
        (Prefix::None, Some(w)) => Prefix::Transcendental { ws: vec![w], m: None },
    };
    if cfg.prefix == Prefix::None && cfg.palette != Palette::Uniform {
        cfg.palette = Palette::Uniform;
    }
    cfg.seed = mix_seed(template.seed, q, w.unwrap_or(u64::MAX));
    cfg
}

fn mix_seed(seed: u64, q: u64, w: u64) -> u64 {
    // splitmix64 finalizer over the combined words
    let mut z = seed ^ q.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ w.rotate_left(32);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Every `w in F_q` that is a root of `g`, for building sweep plans.
pub fn roots_plan(primes: &[u64], g: &IntPoly) -> Vec<(u64, Option<u64>)> {
    let mut plan = Vec::new();
    for &q in primes {
        if let Ok(f) = PrimeField::new(q) {
            plan.extend(f.poly_roots(g).into_iter().map(|r| (q, Some(r.value()))));
        }
    }
    plan
}

pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&p| crate::gfplane::is_prime(p)).collect()
}

/// True when `w` is a root of no nonzero polynomial of degree below 10 with
/// coefficients in `{-2, ..., 2}`.
pub fn is_quite_transcendental(w: u64, q: u64) -> bool {
    !has_small_relation(w, q, 9, 2)
}

/// Whether some nonzero polynomial of degree at most `max_degree` with
/// coefficients bounded by `bound` in absolute value vanishes at `w`.
/// Meet in the middle: low-degree halves are tabulated, high halves looked up.
pub fn has_small_relation(w: u64, q: u64, max_degree: u32, bound: i64) -> bool {
    let q128 = q as i128;
    let pw: Vec<i128> = (0..=max_degree).map(|i| modpow(w as i128, i, q128)).collect();
    let split = (max_degree as usize).div_ceil(2);
    let (low, high) = pw.split_at(split);
    // values of nonzero low halves, plus whether zero arises from one
    let mut low_vals = HashSet::new();
    let mut low_zero_nontrivial = false;
    for_each_vector(low.len(), bound, |c| {
        if c.iter().all(|&x| x == 0) {
            return;
        }
        let v = combine(c, low, q128);
        if v == 0 {
            low_zero_nontrivial = true;
        }
        low_vals.insert(v);
    });
    if low_zero_nontrivial {
        return true;
    }
    let mut found = false;
    for_each_vector(high.len(), bound, |c| {
        if found || c.iter().all(|&x| x == 0) {
            return;
        }
        let v = combine(c, high, q128);
        // v = 0 pairs with the all-zero low half
        if v == 0 || low_vals.contains(&((q128 - v) % q128)) {
            found = true;
        }
    });
    found
}

fn combine(c: &[i64], pw: &[i128], q: i128) -> i128 {
    c.iter().zip(pw).map(|(&a, &p)| a as i128 * p).sum::<i128>().rem_euclid(q)
}

fn modpow(b: i128, mut e: u32, q: i128) -> i128 {
    let mut r = 1 % q;
    let mut b = b.rem_euclid(q);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

fn for_each_vector(len: usize, bound: i64, mut f: impl FnMut(&[i64])) {
    let mut c = vec![-bound; len];
    loop {
        f(&c);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            if c[i] < bound {
                c[i] += 1;
                break;
            }
            c[i] = -bound;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::tallies;
    use proptest::prelude::*;

    fn golden() -> IntPoly {
        IntPoly::from_descending(&[1, -1, -1])
    }

    #[test]
    fn config_validation() {
        let ok = SearchConfig::new(6, 101, Objective::Simplicial, Prefix::None, 1);
        assert!(ok.validate().is_ok());
        let small = SearchConfig { n: 2, ..ok.clone() };
        assert!(matches!(small.validate(), Err(GreedyError::InvalidConfig(_))));
        let too_many = SearchConfig { n: 8, q: 2, ..ok.clone() };
        assert!(too_many.validate().is_err());
        let bad_q = SearchConfig { q: 100, ..ok.clone() };
        assert!(bad_q.validate().is_err());
        let prefix_fills = SearchConfig::new(5, 14639, Objective::Simplicial, Prefix::Algebraic { w: 9420, g: golden() }, 1);
        assert!(prefix_fills.validate().is_err());
        let not_root = SearchConfig::new(15, 14639, Objective::Simplicial, Prefix::Algebraic { w: 9421, g: golden() }, 1);
        assert!(matches!(not_root.validate(), Err(GreedyError::NotARoot { .. })));
    }

    #[test]
    fn algebraic_initial_keeps_frame() {
        let cfg = SearchConfig::new(15, 14639, Objective::Simplicial, Prefix::Algebraic { w: 9420, g: golden() }, 3);
        let arr = random_initial(&cfg, &mut rng_for(3)).unwrap();
        let f = PrimeField::new(14639).unwrap();
        let want = [(0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1), (1, 0, 9420)];
        for (l, &(a, b, c)) in arr.lines().iter().zip(&want) {
            assert_eq!(*l, f.triple(a, b, c).unwrap());
        }
        assert_eq!(arr.len(), 15);
        assert!(Arrangement::new(f, arr.lines().to_vec()).is_ok());
    }

    #[test]
    fn transcendental_prefix() {
        let cfg = SearchConfig::new(12, 55441, Objective::Simplicial, Prefix::Transcendental { ws: vec![31816], m: None }, 0);
        let lines = cfg.prefix_lines().unwrap();
        let f = PrimeField::new(55441).unwrap();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[3], f.triple(1, 1, 1).unwrap());
        assert_eq!(lines[4], f.triple(1, 31816, 0).unwrap());
        assert_eq!(lines[5], f.triple(1, 31816, 1).unwrap());
        let arr = random_initial(&cfg, &mut rng_for(0)).unwrap();
        assert_eq!(&arr.lines()[..6], &lines[..]);
    }

    #[test]
    fn tiny_palette_runs_out() {
        let mut cfg = SearchConfig::new(10, 101, Objective::Simplicial, Prefix::None, 0);
        cfg.palette = Palette::Small(vec![0, 1]);
        // only 7 nonzero 0/1 triples exist
        assert!(matches!(
            random_initial(&cfg, &mut rng_for(0)),
            Err(GreedyError::PaletteExhausted { wanted: 10 })
        ));
    }

    #[test]
    fn zero_budget_returns_initial() {
        let mut cfg = SearchConfig::new(8, 101, Objective::Simplicial, Prefix::None, 42);
        cfg.max_iters = 0;
        cfg.restarts = 1;
        let out = greedy_run(&cfg).unwrap();
        assert!(!out.terminated);
        assert_eq!(out.iterations, 0);
        let init = random_initial(&cfg, &mut rng_for(42)).unwrap();
        assert_eq!(out.arrangement.lines(), init.lines());
    }

    #[test]
    fn runs_are_deterministic() {
        let cfg = SearchConfig {
            max_iters: 2_000,
            restarts: 2,
            ..SearchConfig::new(9, 211, Objective::Simplicial, Prefix::None, 7)
        };
        let a = greedy_run(&cfg).unwrap();
        let b = greedy_run(&cfg).unwrap();
        assert_eq!(a.arrangement.lines(), b.arrangement.lines());
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn small_simplicial_search_terminates() {
        let cfg = SearchConfig {
            max_iters: 5_000,
            ..SearchConfig::new(7, 101, Objective::Simplicial, Prefix::None, 1)
        };
        let out = greedy_run(&cfg).unwrap();
        assert!(out.terminated);
        assert_eq!(score_simplicial(&out.arrangement.intersection_profile()), 0);
    }

    #[test]
    fn non_increasing_acceptance_still_descends() {
        let cfg = SearchConfig {
            max_iters: 3_000,
            restarts: 3,
            acceptance: Acceptance::NonIncreasing { tabu: 50 },
            ..SearchConfig::new(7, 101, Objective::Simplicial, Prefix::None, 5)
        };
        let out = greedy_run(&cfg).unwrap();
        assert!(out.trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn sweep_is_reproducible_and_skips_bad_entries() {
        let template = SearchConfig {
            max_iters: 3_000,
            restarts: 2,
            ..SearchConfig::new(8, 53, Objective::Simplicial, Prefix::Algebraic { w: 0, g: golden() }, 9)
        };
        assert!(prime_sweep(&[], &template, Execution::Parallel).is_empty());
        let primes = primes_between(53, 80);
        let mut plan = roots_plan(&primes, &golden());
        // 0 is never a root of X^2 - X - 1
        plan.push((59, Some(0)));
        let seq = prime_sweep(&plan, &template, Execution::Sequential);
        let par = prime_sweep(&plan, &template, Execution::Parallel);
        assert_eq!(seq.len(), par.len());
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!((a.0, a.1), (b.0, b.1));
            assert_eq!(a.2.arrangement.lines(), b.2.arrangement.lines());
            assert!(a.2.terminated);
        }
        assert!(seq.iter().all(|(_, w, _)| *w != Some(0)));
    }

    #[test]
    fn roots_plan_finds_golden_ratio() {
        let plan = roots_plan(&[14639], &golden());
        assert!(plan.contains(&(14639, Some(9420))));
        assert_eq!(plan.len(), 2);
    }

    #[test]
    fn transcendence_predicate() {
        assert!(crate::gfplane::is_prime(55441));
        // 31816 in F_55441 has no relation of degree <= 6, but
        // -1 - X - 2X^2 - X^3 + X^5 - X^6 - 2X^7 vanishes there
        assert!(!has_small_relation(31816, 55441, 6, 2));
        let rel = IntPoly::new(vec![-1, -1, -2, -1, 0, 1, -1, -2]);
        assert_eq!(rel.eval_mod(31816, 55441), 0);
        assert!(!is_quite_transcendental(31816, 55441));
        // 5^10 candidate polynomials against ~10^5 residues: relations are typical
        assert!(!is_quite_transcendental(12345, 104729));
        // the golden ratio satisfies X^2 - X - 1
        assert!(!is_quite_transcendental(9420, 14639));
        assert!(!is_quite_transcendental(0, 55441));
        assert!(!is_quite_transcendental(2, 55441));
    }

    #[test]
    fn small_relation_matches_brute_force() {
        // every polynomial of degree <= 3 with coefficients in {-1, 0, 1}
        let q = 101u64;
        for w in 0..q {
            let mut brute = false;
            for code in 1..81u32 {
                let mut c = [0i64; 4];
                let mut x = code;
                for slot in c.iter_mut() {
                    *slot = (x % 3) as i64 - 1;
                    x /= 3;
                }
                if c.iter().all(|&v| v == 0) {
                    continue;
                }
                let v: i64 = c.iter().enumerate().map(|(i, &a)| a * (w.pow(i as u32) % q) as i64).sum();
                if v.rem_euclid(q as i64) == 0 {
                    brute = true;
                }
            }
            assert_eq!(has_small_relation(w, q, 3, 1), brute, "w = {w}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn steps_preserve_shape(seed in any::<u64>()) {
            let cfg = SearchConfig::new(10, 14639, Objective::Simplicial, Prefix::Algebraic { w: 9420, g: golden() }, seed);
            let mut rng = rng_for(seed);
            let mut arr = random_initial(&cfg, &mut rng).unwrap();
            let prefix = cfg.prefix_lines().unwrap();
            for _ in 0..200 {
                let p = arr.intersection_profile();
                if let Some(next) = greedy_step(&arr, &p, prefix.len(), DEFAULT_RETRIES, &mut rng) {
                    prop_assert_eq!(next.len(), 10);
                    prop_assert!(Arrangement::new(*next.field(), next.lines().to_vec()).is_ok());
                    prop_assert_eq!(&next.lines()[..5], &prefix[..]);
                    // the swapped-in line passes through two existing points
                    let fresh: Vec<_> = next.lines().iter().filter(|l| !arr.lines().contains(l)).collect();
                    prop_assert_eq!(fresh.len(), 1);
                    let on = p.points().iter().filter(|pt| field::incident(next.field(), fresh[0], &pt.point)).count();
                    prop_assert!(on >= 2);
                    arr = next;
                }
            }
        }

        #[test]
        fn tally_after_move_matches_rebuild(seed in any::<u64>(), n in 4usize..12, q in prop::sample::select(vec![7u64, 11, 13, 53])) {
            let cfg = SearchConfig::new(n, q, Objective::Simplicial, Prefix::None, seed);
            let mut rng = rng_for(seed);
            let mut arr = random_initial(&cfg, &mut rng).unwrap();
            for _ in 0..30 {
                let p = arr.intersection_profile();
                let Some(mv) = draw_move(&arr, &p, 0, DEFAULT_RETRIES, &mut rng) else { break };
                let fast = SizeIndex::new(n, &p).tally_after(&arr, &p, &mv);
                let next = apply_move(&arr, &mv);
                let want = next.intersection_profile().tallies();
                let got = tallies(Tally { n, counts: &fast }.flat_sizes());
                prop_assert_eq!(got, want);
                arr = next;
            }
        }

        #[test]
        fn accepted_scores_strictly_decrease(seed in any::<u64>()) {
            let cfg = SearchConfig {
                max_iters: 400,
                restarts: 1,
                ..SearchConfig::new(8, 97, Objective::DoublePoints, Prefix::None, seed)
            };
            let out = greedy_run(&cfg).unwrap();
            prop_assert!(out.trace.windows(2).all(|w| w[1] < w[0]));
            prop_assert_eq!(out.terminated, out.score == 0);
            prop_assert_eq!(out.score, score_double_points(&out.arrangement.intersection_profile()));
            prop_assert!(out.arrangement.is_essential());
        }
    }
}
