//! Closure under "intersect two known lines, join two known points", and
//! the least number of lines whose closure is everything.

use super::{MatroidError, Rank3Matroid};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    pub g: usize,
    /// 0-based lines whose closure is the whole matroid.
    pub witness: Vec<usize>,
}

/// Lines reachable from `seed`. A line is added once it passes through two
/// distinct points, each spanned by two lines already known.
pub fn closure(m: &Rank3Matroid, seed: &[usize]) -> Vec<usize> {
    let mut known = vec![false; m.n()];
    for &s in seed {
        known[s] = true;
    }
    close_in_place(m, &mut known);
    (0..m.n()).filter(|&x| known[x]).collect()
}

fn close_in_place(m: &Rank3Matroid, known: &mut [bool]) -> usize {
    let mut count = known.iter().filter(|&&k| k).count();
    loop {
        let spanned: Vec<bool> = m
            .flats()
            .iter()
            .map(|f| f.iter().filter(|&&x| known[x]).count() >= 2)
            .collect();
        let fresh: Vec<usize> = (0..m.n())
            .filter(|&x| !known[x])
            .filter(|&x| m.line_flats(x).iter().filter(|&&f| spanned[f]).count() >= 2)
            .collect();
        if fresh.is_empty() {
            return count;
        }
        count += fresh.len();
        for x in fresh {
            known[x] = true;
        }
    }
}

fn by_degree(m: &Rank3Matroid) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m.n()).collect();
    order.sort_by_key(|&x| {
        let weight: usize = m.line_flats(x).iter().map(|&f| m.flats()[f].len()).sum();
        (std::cmp::Reverse(weight), x)
    });
    order
}

/// Exact generation number. Subsets are tried by increasing size, lines of
/// high flat degree first; `budget` caps the number of closures computed.
pub fn generation_number(m: &Rank3Matroid, budget: Option<u64>) -> Result<Generation, MatroidError> {
    let n = m.n();
    let order = by_degree(m);
    let mut spent = 0u64;
    let mut known = vec![false; n];
    for k in 1..=n {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if budget.is_some_and(|b| spent >= b) {
                return Err(MatroidError::Timeout(spent));
            }
            spent += 1;
            known.iter_mut().for_each(|v| *v = false);
            for &i in &idx {
                known[order[i]] = true;
            }
            if close_in_place(m, &mut known) == n {
                let mut witness: Vec<usize> = idx.iter().map(|&i| order[i]).collect();
                witness.sort_unstable();
                return Ok(Generation { g: k, witness });
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    unreachable!("the full set generates itself")
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Greedy upper bound: repeatedly add the line that enlarges the closure most.
pub fn generation_upper_bound(m: &Rank3Matroid) -> Generation {
    let n = m.n();
    let order = by_degree(m);
    let mut chosen: Vec<usize> = Vec::new();
    let mut known = vec![false; n];
    let mut have = 0;
    while have < n {
        let mut best: Option<(usize, usize)> = None;
        for &x in order.iter().filter(|&&x| !known[x]) {
            let mut trial = known.clone();
            trial[x] = true;
            let got = close_in_place(m, &mut trial);
            if best.is_none_or(|(_, b)| got > b) {
                best = Some((x, got));
            }
        }
        let (x, _) = best.expect("some line is still unknown");
        chosen.push(x);
        known[x] = true;
        have = close_in_place(m, &mut known);
    }
    chosen.sort_unstable();
    Generation {
        g: chosen.len(),
        witness: chosen,
    }
}
