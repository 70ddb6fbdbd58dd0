//! Isomorphism by backtracking: lines are assigned in most-constrained-first
//! order, candidates must share the line signature, and every assignment
//! keeps the induced map between stored flats a partial bijection that
//! preserves sizes.

use super::Rank3Matroid;

const NONE: usize = usize::MAX;

struct Search<'a> {
    a: &'a Rank3Matroid,
    b: &'a Rank3Matroid,
    /// `cand[x]` lists the lines of `b` compatible with line `x` of `a`.
    cand: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
    fmap: Vec<usize>,
    rmap: Vec<usize>,
    assigned: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(a: &'a Rank3Matroid, b: &'a Rank3Matroid) -> Option<Self> {
        if a.n() != b.n() || a.flats().len() != b.flats().len() {
            return None;
        }
        let mut sa: Vec<usize> = a.flats().iter().map(Vec::len).collect();
        let mut sb: Vec<usize> = b.flats().iter().map(Vec::len).collect();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        let sig_b: Vec<Vec<usize>> = (0..b.n()).map(|y| b.line_signature(y)).collect();
        let cand: Vec<Vec<usize>> = (0..a.n())
            .map(|x| {
                let s = a.line_signature(x);
                (0..b.n()).filter(|&y| sig_b[y] == s).collect()
            })
            .collect();
        if cand.iter().any(Vec::is_empty) {
            return None;
        }
        Some(Search {
            a,
            b,
            cand,
            map: vec![NONE; a.n()],
            used: vec![false; b.n()],
            fmap: vec![NONE; a.flats().len()],
            rmap: vec![NONE; b.flats().len()],
            assigned: Vec::with_capacity(a.n()),
        })
    }

    /// Tries `x -> y`; on success returns the flats newly paired by it.
    fn assign(&mut self, x: usize, y: usize) -> Option<Vec<usize>> {
        let mut fresh = Vec::new();
        for &xp in &self.assigned {
            let yp = self.map[xp];
            match (self.a.flat_of(x, xp), self.b.flat_of(y, yp)) {
                (None, None) => {}
                (Some(f), Some(g)) if self.a.flats()[f].len() == self.b.flats()[g].len() => {
                    if self.fmap[f] == NONE && self.rmap[g] == NONE {
                        self.fmap[f] = g;
                        self.rmap[g] = f;
                        fresh.push(f);
                    } else if self.fmap[f] != g {
                        self.unpair(&fresh);
                        return None;
                    }
                }
                _ => {
                    self.unpair(&fresh);
                    return None;
                }
            }
        }
        self.map[x] = y;
        self.used[y] = true;
        self.assigned.push(x);
        Some(fresh)
    }

    fn unassign(&mut self, x: usize, fresh: &[usize]) {
        self.unpair(fresh);
        self.used[self.map[x]] = false;
        self.map[x] = NONE;
        self.assigned.pop();
    }

    fn unpair(&mut self, fresh: &[usize]) {
        for &f in fresh {
            self.rmap[self.fmap[f]] = NONE;
            self.fmap[f] = NONE;
        }
    }

    fn feasible(&mut self, x: usize) -> Vec<usize> {
        let cands = self.cand[x].clone();
        let mut ok = Vec::new();
        for y in cands {
            if self.used[y] {
                continue;
            }
            if let Some(fresh) = self.assign(x, y) {
                self.unassign(x, &fresh);
                ok.push(y);
            }
        }
        ok
    }

    /// Depth-first search; `visit` returns false to stop.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if self.assigned.len() == self.a.n() {
            return visit(&self.map);
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        for x in 0..self.a.n() {
            if self.map[x] != NONE {
                continue;
            }
            let ys = self.feasible(x);
            if ys.is_empty() {
                return true;
            }
            if best.as_ref().is_none_or(|(_, b)| ys.len() < b.len()) {
                let done = ys.len() == 1;
                best = Some((x, ys));
                if done {
                    break;
                }
            }
        }
        let (x, ys) = best.expect("an unassigned line exists");
        for y in ys {
            if let Some(fresh) = self.assign(x, y) {
                let go_on = self.run(visit);
                self.unassign(x, &fresh);
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

/// A relabeling `p` with `a.relabel(p) == b`, if one exists.
pub fn is_isomorphic(a: &Rank3Matroid, b: &Rank3Matroid) -> Option<Vec<usize>> {
    let mut s = Search::new(a, b)?;
    let mut found = None;
    s.run(&mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

/// Every automorphism, stopping after `limit` of them.
pub fn all_automorphisms(m: &Rank3Matroid, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if let Some(mut s) = Search::new(m, m) {
        s.run(&mut |p| {
            out.push(p.to_vec());
            out.len() < limit
        });
    }
    out
}
