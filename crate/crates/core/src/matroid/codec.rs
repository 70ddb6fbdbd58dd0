//! Dependent-triple index codec: a matroid is written as the sorted list of
//! 1-based positions of its dependent triples in the lexicographic list of
//! all `(a, b, c)` with `1 <= a < b < c <= n`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{MatroidError, Rank3Matroid};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleIndexCode {
    pub n: usize,
    pub indices: Vec<u64>,
}

impl fmt::Display for TripleIndexCode {
    /// `n=NN, [i1, i2, ...]`, the body of an appendix line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, [", self.n)?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("]")
    }
}

pub fn triple_count(n: usize) -> u64 {
    let n = n as u64;
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

fn pairs_after(n: u64, x: u64) -> u64 {
    // triples whose first element is x (1-based): C(n - x, 2)
    let r = n - x;
    r * r.saturating_sub(1) / 2
}

/// 1-based lex rank of a 1-based triple `a < b < c`.
pub fn rank_triple(n: usize, a: usize, b: usize, c: usize) -> u64 {
    debug_assert!(1 <= a && a < b && b < c && c <= n);
    let (n, a, b, c) = (n as u64, a as u64, b as u64, c as u64);
    let mut r = 0;
    for x in 1..a {
        r += pairs_after(n, x);
    }
    for y in a + 1..b {
        r += n - y;
    }
    r + (c - b)
}

/// Inverse of [`rank_triple`].
pub fn unrank_triple(n: usize, index: u64) -> Option<(usize, usize, usize)> {
    if index == 0 || index > triple_count(n) {
        return None;
    }
    let nn = n as u64;
    let mut r = index - 1;
    let mut a = 1;
    while r >= pairs_after(nn, a) {
        r -= pairs_after(nn, a);
        a += 1;
    }
    let mut b = a + 1;
    while r >= nn - b {
        r -= nn - b;
        b += 1;
    }
    let c = b + 1 + r;
    Some((a as usize, b as usize, c as usize))
}

pub fn encode_triples(m: &Rank3Matroid) -> TripleIndexCode {
    let n = m.n();
    let mut indices = Vec::new();
    for f in m.flats() {
        for (i, &a) in f.iter().enumerate() {
            for (j, &b) in f.iter().enumerate().skip(i + 1) {
                for &c in &f[j + 1..] {
                    indices.push(rank_triple(n, a + 1, b + 1, c + 1));
                }
            }
        }
    }
    indices.sort_unstable();
    TripleIndexCode { n, indices }
}

/// Rebuilds the flats by merging dependent triples, then checks that every
/// triple inside a merged flat was listed.
pub fn decode_triples(code: &TripleIndexCode) -> Result<Rank3Matroid, MatroidError> {
    let n = code.n;
    let max = triple_count(n);
    let mut prev = 0u64;
    for &i in &code.indices {
        if i == 0 || i > max {
            return Err(MatroidError::InvalidIndex { index: i, max });
        }
        if i <= prev {
            return Err(MatroidError::UnsortedIndices { index: i });
        }
        prev = i;
    }
    // pair[x * n + y] names the growing flat that currently holds {x, y}
    let mut flats: Vec<Vec<usize>> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut pair = vec![usize::MAX; n * n];
    let listed: HashSet<u64> = code.indices.iter().copied().collect();
    for &i in &code.indices {
        let (a, b, c) = unrank_triple(n, i).expect("checked range");
        let (a, b, c) = (a - 1, b - 1, c - 1);
        let mut ids: Vec<usize> = [(a, b), (a, c), (b, c)]
            .iter()
            .map(|&(x, y)| pair[x * n + y])
            .filter(|&f| f != usize::MAX)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        let target = match ids.first() {
            Some(&t) => t,
            None => {
                flats.push(Vec::new());
                alive.push(true);
                flats.len() - 1
            }
        };
        let mut members: Vec<usize> = vec![a, b, c];
        for &f in &ids[ids.len().min(1)..] {
            members.extend(std::mem::take(&mut flats[f]));
            alive[f] = false;
        }
        members.extend(std::mem::take(&mut flats[target]));
        members.sort_unstable();
        members.dedup();
        for (k, &x) in members.iter().enumerate() {
            for &y in &members[k + 1..] {
                pair[x * n + y] = target;
                pair[y * n + x] = target;
            }
        }
        flats[target] = members;
    }
    let flats: Vec<Vec<usize>> = flats
        .into_iter()
        .zip(alive)
        .filter_map(|(f, ok)| ok.then_some(f))
        .collect();
    for f in &flats {
        for (i, &a) in f.iter().enumerate() {
            for (j, &b) in f.iter().enumerate().skip(i + 1) {
                for &c in &f[j + 1..] {
                    if !listed.contains(&rank_triple(n, a + 1, b + 1, c + 1)) {
                        return Err(MatroidError::InconsistentMatroid {
                            a: a + 1,
                            b: b + 1,
                            c: c + 1,
                        });
                    }
                }
            }
        }
    }
    Rank3Matroid::new(n, flats)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixEntry {
    pub label: String,
    pub code: TripleIndexCode,
}

/// Parses lines of the form `(k): n=NN, [ i1, i2, ... ]`. TeX math delimiters,
/// line-break markers and trailing commas are ignored; blank lines and lines
/// starting with `#` are skipped.
pub fn parse_appendix(text: &str) -> Result<Vec<AppendixEntry>, String> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let cleaned: String = raw.replace("\\\\", " ").replace('$', " ");
        let line = cleaned.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |what: &str| format!("line {}: {what}", lineno + 1);
        let (label, rest) = line.split_once(':').ok_or_else(|| err("missing ':'"))?;
        let label = label.trim().trim_start_matches('(').trim_end_matches(')').trim();
        let (head, list) = rest.split_once('[').ok_or_else(|| err("missing '['"))?;
        let n = head
            .trim()
            .trim_end_matches(',')
            .trim()
            .strip_prefix("n")
            .map(|s| s.trim_start().trim_start_matches('=').trim())
            .ok_or_else(|| err("missing n="))?
            .parse::<usize>()
            .map_err(|_| err("bad n"))?;
        let list = list.split(']').next().unwrap_or_default();
        let indices = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u64>().map_err(|_| err("bad index")))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(AppendixEntry {
            label: label.to_string(),
            code: TripleIndexCode { n, indices },
        });
    }
    Ok(out)
}
