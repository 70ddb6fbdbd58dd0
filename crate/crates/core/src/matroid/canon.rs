//! Canonical labeling and automorphism group by individualization and
//! refinement.
//!
//! Line colorings are refined until equitable with respect to the stored
//! flats and the double points. The search tree individualizes one line of
//! the first non-singleton cell at a time; every leaf is a labeling, scored by
//! the triple-index code of the relabeled matroid. Equal codes at two leaves
//! give an automorphism, which prunes the rest of that subtree and every
//! later sibling in an already-seen orbit. The key is the smallest code over
//! the leaves that survive pruning, which is an isomorphism invariant.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{encode_triples, Rank3Matroid};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalKey {
    pub n: usize,
    pub indices: Vec<u64>,
}

impl CanonicalKey {
    /// Big-endian `u32` words: `n`, then each index.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 * (self.indices.len() + 1));
        out.extend_from_slice(&(self.n as u32).to_be_bytes());
        for &i in &self.indices {
            out.extend_from_slice(&(i as u32).to_be_bytes());
        }
        out
    }
}

impl fmt::Display for CanonicalKey {
    /// Lowercase hex of [`CanonicalKey::to_bytes`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.to_bytes() {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    /// Permutations of line labels; `g[x]` is the image of `x`.
    pub generators: Vec<Vec<usize>>,
    pub order: BigUint,
}

fn rerank<T: Ord + Clone>(keys: &[T]) -> (Vec<u32>, usize) {
    let mut uniq = keys.to_vec();
    uniq.sort();
    uniq.dedup();
    let ranks = keys
        .iter()
        .map(|k| uniq.binary_search(k).expect("present") as u32)
        .collect();
    (ranks, uniq.len())
}

fn cell_count(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |c| c as usize + 1)
}

fn refine(m: &Rank3Matroid, mut colors: Vec<u32>) -> Vec<u32> {
    let n = m.n();
    let mut cells = cell_count(&colors);
    loop {
        if cells == n {
            return colors;
        }
        let sigs: Vec<(u32, Vec<Vec<u32>>, Vec<u32>)> = (0..n)
            .map(|x| {
                let mut through: Vec<Vec<u32>> = m
                    .line_flats(x)
                    .iter()
                    .map(|&f| {
                        let mut c: Vec<u32> = m.flats()[f]
                            .iter()
                            .filter(|&&y| y != x)
                            .map(|&y| colors[y])
                            .collect();
                        c.sort_unstable();
                        c
                    })
                    .collect();
                through.sort();
                let mut doubles: Vec<u32> = (0..n)
                    .filter(|&y| y != x && m.flat_of(x, y).is_none())
                    .map(|y| colors[y])
                    .collect();
                doubles.sort_unstable();
                (colors[x], through, doubles)
            })
            .collect();
        let (next, k) = rerank(&sigs);
        if k == cells {
            return colors;
        }
        colors = next;
        cells = k;
    }
}

fn individualize(m: &Rank3Matroid, colors: &[u32], v: usize) -> Vec<u32> {
    let keys: Vec<(u32, bool)> = colors
        .iter()
        .enumerate()
        .map(|(x, &c)| (c, x != v))
        .collect();
    refine(m, rerank(&keys).0)
}

struct Leaf {
    path: Vec<usize>,
    labeling: Vec<usize>,
    code: Vec<u64>,
}

struct Tree<'a> {
    m: &'a Rank3Matroid,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Vec<usize>>,
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// `g` with `lab_b[g[x]] = lab_a[x]`, i.e. the automorphism carrying leaf `a`
/// onto leaf `b`.
fn leaf_map(lab_a: &[usize], lab_b: &[usize]) -> Vec<usize> {
    let mut inv_b = vec![0; lab_b.len()];
    for (x, &p) in lab_b.iter().enumerate() {
        inv_b[p] = x;
    }
    lab_a.iter().map(|&p| inv_b[p]).collect()
}

struct Orbits {
    parent: Vec<usize>,
}

impl Orbits {
    fn new<'g>(n: usize, gens: impl Iterator<Item = &'g Vec<usize>>) -> Self {
        let mut o = Orbits {
            parent: (0..n).collect(),
        };
        for g in gens {
            for (x, &y) in g.iter().enumerate() {
                let (a, b) = (o.find(x), o.find(y));
                if a != b {
                    o.parent[a.max(b)] = a.min(b);
                }
            }
        }
        o
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}

fn fixes(g: &[usize], prefix: &[usize]) -> bool {
    prefix.iter().all(|&p| g[p] == p)
}

impl Tree<'_> {
    /// Returns `Some(level)` to abandon everything below depth `level`.
    fn explore(&mut self, colors: Vec<u32>, path: &mut Vec<usize>) -> Option<usize> {
        let n = self.m.n();
        if cell_count(&colors) == n {
            return self.leaf(&colors, path);
        }
        let mut size = vec![0usize; n];
        for &c in &colors {
            size[c as usize] += 1;
        }
        let target = (0..n).find(|&c| size[c] > 1).expect("not discrete") as u32;
        let cell: Vec<usize> = (0..n).filter(|&x| colors[x] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for v in cell {
            if !tried.is_empty() {
                let mut orb = Orbits::new(n, self.gens.iter().filter(|g| fixes(g, path)));
                let rv = orb.find(v);
                if tried.iter().any(|&u| orb.find(u) == rv) {
                    continue;
                }
            }
            tried.push(v);
            let child = individualize(self.m, &colors, v);
            path.push(v);
            let jump = self.explore(child, path);
            path.pop();
            if let Some(level) = jump {
                if level < path.len() {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, colors: &[u32], path: &[usize]) -> Option<usize> {
        let labeling: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
        let code = encode_triples(&self.m.relabel(&labeling)).indices;
        let leaf = Leaf {
            path: path.to_vec(),
            labeling,
            code,
        };
        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                path: leaf.path.clone(),
                labeling: leaf.labeling.clone(),
                code: leaf.code.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if leaf.code == first.code {
            let g = leaf_map(&first.labeling, &leaf.labeling);
            let level = common_prefix(&first.path, &leaf.path);
            self.push_gen(g);
            return Some(level);
        }
        let best = self.best.as_ref().expect("set with first");
        if leaf.code == best.code {
            let g = leaf_map(&best.labeling, &leaf.labeling);
            let level = common_prefix(&best.path, &leaf.path);
            self.push_gen(g);
            return Some(level);
        }
        if leaf.code < best.code {
            self.best = Some(leaf);
        }
        None
    }

    fn push_gen(&mut self, g: Vec<usize>) {
        if g.iter().enumerate().any(|(x, &y)| x != y) {
            debug_assert!(self.m.is_automorphism(&g));
            self.gens.push(g);
        }
    }
}

struct Outcome {
    key: CanonicalKey,
    labeling: Vec<usize>,
    group: AutGroup,
}

fn search(m: &Rank3Matroid) -> Outcome {
    let n = m.n();
    if m.flats().is_empty() {
        // every relabeling gives the empty code
        let mut order = BigUint::from(1u32);
        for k in 2..=n {
            order *= BigUint::from(k);
        }
        let generators = match n {
            0 | 1 => Vec::new(),
            2 => vec![vec![1, 0]],
            _ => vec![
                (0..n).map(|x| (x + 1) % n).collect(),
                (0..n).map(|x| [1, 0].get(x).copied().unwrap_or(x)).collect(),
            ],
        };
        return Outcome {
            key: CanonicalKey {
                n,
                indices: Vec::new(),
            },
            labeling: (0..n).collect(),
            group: AutGroup { generators, order },
        };
    }
    let mut tree = Tree {
        m,
        first: None,
        best: None,
        gens: Vec::new(),
    };
    let root = refine(m, vec![0; n]);
    tree.explore(root, &mut Vec::new());
    let first = tree.first.expect("at least one leaf");
    let mut order = BigUint::from(1u32);
    for i in 0..first.path.len() {
        let prefix = &first.path[..i];
        let mut orb = Orbits::new(n, tree.gens.iter().filter(|g| fixes(g, prefix)));
        let r = orb.find(first.path[i]);
        let size = (0..n).filter(|&x| orb.find(x) == r).count();
        order *= BigUint::from(size);
    }
    let best = tree.best.expect("at least one leaf");
    Outcome {
        key: CanonicalKey {
            n,
            indices: best.code,
        },
        labeling: best.labeling,
        group: AutGroup {
            generators: tree.gens,
            order,
        },
    }
}

pub fn canonical_key(m: &Rank3Matroid) -> CanonicalKey {
    search(m).key
}

/// The key together with a labeling `p` such that `m.relabel(p)` encodes to it.
pub fn canonical_form(m: &Rank3Matroid) -> (CanonicalKey, Vec<usize>) {
    let o = search(m);
    (o.key, o.labeling)
}

pub fn automorphism_group(m: &Rank3Matroid) -> AutGroup {
    search(m).group
}
