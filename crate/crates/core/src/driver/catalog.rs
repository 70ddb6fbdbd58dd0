//! Append-only catalog of discovered matroids, keyed by canonical form.
//!
//! On disk it is a JSON-lines event log: `{"entry": {...}}` for a new
//! isomorphism class and `{"hit": "<key>"}` each time a known class is found
//! again. Replaying the log rebuilds the in-memory state.

use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use crate::lattice::{char_poly, m_invariant, sigma};
use crate::matroid::{automorphism_group, canonical_form, encode_triples, Rank3Matroid, TripleIndexCode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discovery {
    pub q: u64,
    pub w: Option<u64>,
    pub seed: u64,
    pub iterations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub key: String,
    pub n: usize,
    pub sigma: i64,
    pub chi: Option<String>,
    pub m: Option<i64>,
    pub aut_order: String,
    /// Triple-index code of the canonical relabeling.
    pub code: TripleIndexCode,
    pub discovery: Option<Discovery>,
    pub field: Option<String>,
    pub arrangement: Option<PathBuf>,
    #[serde(default = "one")]
    pub hits: u64,
}

fn one() -> u64 {
    1
}

impl CatalogEntry {
    pub fn describe(m: &Rank3Matroid) -> Self {
        let (key, perm) = canonical_form(m);
        let chi = char_poly(m).ok();
        CatalogEntry {
            key: key.to_string(),
            n: m.n(),
            sigma: sigma(m),
            chi: chi.map(|c| c.to_string()),
            m: chi.as_ref().map(m_invariant),
            aut_order: automorphism_group(m).order.to_string(),
            code: encode_triples(&m.relabel(&perm)),
            discovery: None,
            field: None,
            arrangement: None,
            hits: 1,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Event {
    Entry(CatalogEntry),
    Hit(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insert {
    Inserted,
    Duplicate { hits: u64 },
}

#[derive(Debug, Default)]
pub struct Catalog {
    path: Option<PathBuf>,
    entries: Vec<CatalogEntry>,
    index: HashMap<String, usize>,
}

impl Catalog {
    pub fn in_memory() -> Self {
        Catalog::default()
    }

    /// Opens (creating if missing) the log at `path` and replays it.
    pub fn open(path: &Path) -> anyhow::Result<Self> {
        let mut cat = Catalog {
            path: Some(path.to_path_buf()),
            ..Catalog::default()
        };
        if path.exists() {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            for (k, line) in BufReader::new(file).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let event: Event =
                    serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), k + 1))?;
                match event {
                    Event::Entry(e) => {
                        if cat.index.contains_key(&e.key) {
                            bail!("{}:{}: duplicate entry {}", path.display(), k + 1, e.key);
                        }
                        cat.push(e);
                    }
                    Event::Hit(key) => match cat.index.get(&key) {
                        Some(&i) => cat.entries[i].hits += 1,
                        None => bail!("{}:{}: hit for unknown key {key}", path.display(), k + 1),
                    },
                }
            }
        }
        Ok(cat)
    }

    fn push(&mut self, e: CatalogEntry) {
        self.index.insert(e.key.clone(), self.entries.len());
        self.entries.push(e);
    }

    fn append(&self, event: &Event) -> anyhow::Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening {}", path.display()))?;
        writeln!(file, "{}", serde_json::to_string(event)?)?;
        Ok(())
    }

    /// Adds a new class, or counts another hit on an existing one. The first
    /// entry seen for a class is the one kept.
    pub fn insert(&mut self, mut entry: CatalogEntry) -> anyhow::Result<Insert> {
        if let Some(&i) = self.index.get(&entry.key) {
            self.append(&Event::Hit(entry.key.clone()))?;
            self.entries[i].hits += 1;
            return Ok(Insert::Duplicate {
                hits: self.entries[i].hits,
            });
        }
        entry.hits = 1;
        let event = Event::Entry(entry);
        self.append(&event)?;
        let Event::Entry(entry) = event else { unreachable!() };
        self.push(entry);
        Ok(Insert::Inserted)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&CatalogEntry> {
        self.index.get(key).map(|&i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct classes per line count.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for e in &self.entries {
            *h.entry(e.n).or_insert(0) += 1;
        }
        h
    }

    pub fn stats_csv(&self) -> String {
        let mut out = String::from("n,count\n");
        for (n, c) in self.histogram() {
            out.push_str(&format!("{n},{c}\n"));
        }
        out
    }
}
