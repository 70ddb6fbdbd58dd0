use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use super::arrfile::{ArrangementFile, LoadedArrangement};
use super::catalog::{Catalog, CatalogEntry, Discovery, Insert};
use super::ideal_io::IdealText;
use super::report::Report;
use crate::exec::{with_workers, Execution};
use crate::greedy::{
    greedy_run, primes_between, Acceptance, Objective, Prefix, SearchConfig, SearchOutcome, DEFAULT_MAX_ITERS,
    DEFAULT_RESTARTS,
};
use crate::gfplane::PrimeField;
use crate::intpoly::IntPoly;
use crate::matroid::{
    automorphism_group, canonical_form, canonical_key, decode_triples, encode_triples, generation_number,
    is_isomorphic, parse_appendix, AppendixEntry, Rank3Matroid,
};
use crate::moduli::{
    choose_generators, ff_point_count, realization_ideal, symbolic_coordinates, verify_realization,
};

#[derive(Debug, Parser)]
#[command(name = "simparr", version, about = "Simplicial line arrangements and rank-3 matroids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Plain,
    Algebraic,
    Transcendental,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedy search for arrangements over prime fields.
    Search(SearchArgs),
    /// Print the combinatorial invariants of an arrangement file.
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decode triple-index codes and list dependent flats (1-based).
    Decode { spec: String },
    /// Print the triple-index code of a matroid.
    Encode {
        spec: String,
        /// Relabel into canonical form first.
        #[arg(long)]
        canonical: bool,
    },
    /// Test two matroids for isomorphism.
    Iso { a: String, b: String },
    /// Automorphism group order and generators.
    Aut { spec: String },
    /// Generation number and a witness.
    Genset {
        spec: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Realization ideal in the standard frame.
    Moduli {
        spec: String,
        /// Write the ideal here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Count F_q solutions for these primes.
        #[arg(long, value_delimiter = ',')]
        count: Vec<u64>,
    },
    /// Check that an arrangement file realizes a matroid line by line.
    RealizeCheck { spec: String, file: PathBuf },
    /// Per-n class counts of a catalog as CSV.
    Stats { catalog: PathBuf },
}

#[derive(Debug, clap::Args)]
pub struct SearchArgs {
    #[arg(long, default_value = "simplicial")]
    pub objective: Objective,
    #[arg(long)]
    pub n: usize,
    /// Field size; ignored when --primes is given.
    #[arg(long, default_value_t = 101)]
    pub q: u64,
    /// Prefix element(s). Algebraic mode defaults to every root of the minpoly.
    #[arg(long)]
    pub w: Vec<u64>,
    #[arg(long, default_value = "X^2-X-1")]
    pub minpoly: IntPoly,
    #[arg(long, value_enum, default_value_t = Mode::Plain)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent runs per field, with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub runs: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: u64,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: u32,
    #[arg(long, env = "SIMPARR_WORKERS")]
    pub workers: Option<usize>,
    /// Catalog log to append hits to.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sweep primes: `lo..hi` or a comma-separated list.
    #[arg(long)]
    pub primes: Option<String>,
    /// Accept moves that keep the score, with a tabu list.
    #[arg(long)]
    pub accept_equal: bool,
    #[arg(long, default_value_t = 64, requires = "accept_equal")]
    pub tabu: usize,
    /// Save an arrangement file for every new class.
    #[arg(long)]
    pub arrangements_dir: Option<PathBuf>,
}

pub fn run<I, T>(args: I, out: &mut dyn Write) -> anyhow::Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    match cli.command {
        Command::Search(a) => search(&a, out),
        Command::Verify { file, json } => {
            let loaded = ArrangementFile::read(&file)?.load()?;
            let (m, _) = loaded.matroid();
            let report = Report::new(&m, loaded.is_essential(), Some(loaded.describe_field()));
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                write!(out, "{report}")?;
            }
            Ok(())
        }
        Command::Decode { spec } => {
            for e in load_codes(&spec)? {
                let m = decode_triples(&e.code).with_context(|| format!("decoding ({})", e.label))?;
                writeln!(out, "({}): {m}", e.label)?;
            }
            Ok(())
        }
        Command::Encode { spec, canonical } => {
            let m = load_matroid(&spec)?.0;
            let m = if canonical { m.relabel(&canonical_form(&m).1) } else { m };
            writeln!(out, "{}", encode_triples(&m))?;
            Ok(())
        }
        Command::Iso { a, b } => {
            let (ma, mb) = (load_matroid(&a)?.0, load_matroid(&b)?.0);
            match is_isomorphic(&ma, &mb) {
                Some(p) => writeln!(out, "isomorphic: {}", one_based(&p))?,
                None => writeln!(out, "not isomorphic")?,
            }
            Ok(())
        }
        Command::Aut { spec } => {
            let g = automorphism_group(&load_matroid(&spec)?.0);
            writeln!(out, "order: {}", g.order)?;
            for p in &g.generators {
                writeln!(out, "generator: {}", one_based(p))?;
            }
            Ok(())
        }
        Command::Genset { spec, budget } => {
            let gen = generation_number(&load_matroid(&spec)?.0, budget)?;
            writeln!(out, "g: {}", gen.g)?;
            writeln!(out, "witness: {}", one_based(&gen.witness))?;
            Ok(())
        }
        Command::Moduli { spec, out: path, count } => moduli(&spec, path.as_deref(), &count, out),
        Command::RealizeCheck { spec, file } => {
            let m = load_matroid(&spec)?.0;
            let res = match ArrangementFile::read(&file)?.load()? {
                LoadedArrangement::Prime(a) => verify_realization(&m, a.field(), a.lines()),
                LoadedArrangement::Number(a) => verify_realization(&m, a.field(), a.lines()),
            };
            match res {
                Ok(()) => writeln!(out, "realizes")?,
                Err(e) => bail!("does not realize: {e}"),
            }
            Ok(())
        }
        Command::Stats { catalog } => {
            write!(out, "{}", Catalog::open(&catalog)?.stats_csv())?;
            Ok(())
        }
    }
}

fn one_based(xs: &[usize]) -> String {
    xs.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ")
}

/// Triple-index codes from `appendix:K`, `appendix` (all eleven) or a file of
/// `(label): n=.., [..]` lines (labels optional).
pub fn load_codes(spec: &str) -> anyhow::Result<Vec<AppendixEntry>> {
    let all = || parse_appendix(crate::data::APPENDIX_MATROIDS).map_err(|e| anyhow!(e));
    if spec == "appendix" {
        return all();
    }
    if let Some(k) = spec.strip_prefix("appendix:") {
        let k: usize = k.parse().with_context(|| format!("bad index in {spec:?}"))?;
        return all()?
            .into_iter()
            .nth(k.wrapping_sub(1))
            .map(|e| vec![e])
            .ok_or_else(|| anyhow!("no bundled matroid ({k})"));
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    let labeled: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            let t = l.trim();
            if t.starts_with('n') {
                format!("({}): {t}", i + 1)
            } else {
                l.to_string()
            }
        })
        .collect();
    let codes = parse_appendix(&labeled.join("\n")).map_err(|e| anyhow!("{spec}: {e}"))?;
    if codes.is_empty() {
        bail!("{spec}: no codes found");
    }
    Ok(codes)
}

/// A matroid from `appendix:K`, a code file (first entry) or an arrangement
/// file, together with the field of the arrangement when there is one.
pub fn load_matroid(spec: &str) -> anyhow::Result<(Rank3Matroid, Option<String>)> {
    if !spec.starts_with("appendix") {
        let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
        if text.lines().any(|l| l.trim_start().starts_with("field")) {
            let loaded = text.parse::<ArrangementFile>()?.load()?;
            return Ok((loaded.matroid().0, Some(loaded.describe_field())));
        }
    }
    let e = load_codes(spec)?.remove(0);
    Ok((decode_triples(&e.code)?, None))
}

fn moduli(spec: &str, path: Option<&Path>, count: &[u64], out: &mut dyn Write) -> anyhow::Result<()> {
    let m = load_matroid(spec)?.0;
    let sc = symbolic_coordinates(&m, &choose_generators(&m))?;
    let ideal = realization_ideal(&m, &sc)?;
    let text = IdealText::from_ideal(&ideal, Some(&canonical_key(&m).to_string())).render();
    match path {
        Some(p) => std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => write!(out, "{text}")?,
    }
    for &q in count {
        let c = ff_point_count(&ideal, q, Execution::Parallel)?;
        writeln!(out, "q={q} solutions={c}")?;
    }
    Ok(())
}

fn parse_primes(s: &str) -> anyhow::Result<Vec<u64>> {
    let primes = match s.split_once("..") {
        Some((lo, hi)) => primes_between(lo.trim().parse()?, hi.trim().parse()?),
        None => s
            .split(',')
            .map(|p| p.trim().parse::<u64>().with_context(|| format!("bad prime {p:?}")))
            .collect::<Result<_, _>>()?,
    };
    if primes.is_empty() {
        bail!("no primes in {s:?}");
    }
    Ok(primes)
}

/// One configuration per field, prefix element and run.
pub fn search_jobs(a: &SearchArgs) -> anyhow::Result<Vec<SearchConfig>> {
    let primes = match &a.primes {
        Some(s) => parse_primes(s)?,
        None => vec![a.q],
    };
    let mut prefixes = Vec::new();
    for &q in &primes {
        match a.mode {
            Mode::Plain => prefixes.push((q, Prefix::None)),
            Mode::Algebraic => {
                let ws = if a.w.is_empty() {
                    let f = PrimeField::new(q)?;
                    f.poly_roots(&a.minpoly).into_iter().map(|r| r.value()).collect()
                } else {
                    a.w.clone()
                };
                prefixes.extend(ws.into_iter().map(|w| {
                    (q, Prefix::Algebraic {
                        w,
                        g: a.minpoly.clone(),
                    })
                }));
            }
            Mode::Transcendental => {
                if a.w.is_empty() {
                    bail!("transcendental mode needs at least one --w");
                }
                prefixes.push((q, Prefix::Transcendental { ws: a.w.clone(), m: None }));
            }
        }
    }
    let mut jobs = Vec::new();
    for (q, prefix) in prefixes {
        for r in 0..a.runs {
            let mut cfg = SearchConfig::new(a.n, q, a.objective, prefix.clone(), a.seed.wrapping_add(r));
            cfg.max_iters = a.max_iters;
            cfg.restarts = a.restarts;
            if a.accept_equal {
                cfg.acceptance = Acceptance::NonIncreasing { tabu: a.tabu };
            }
            cfg.validate()?;
            jobs.push(cfg);
        }
    }
    Ok(jobs)
}

fn search(a: &SearchArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let jobs = search_jobs(a)?;
    let results: Vec<(SearchConfig, anyhow::Result<SearchOutcome>)> = with_workers(a.workers, || {
        Execution::Parallel.map(jobs, |cfg| {
            let r = greedy_run(&cfg).map_err(anyhow::Error::from);
            (cfg, r)
        })
    });
    let mut catalog = match &a.out {
        Some(p) => Some(Catalog::open(p)?),
        None => None,
    };
    if let Some(dir) = &a.arrangements_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut hits = 0;
    for (cfg, res) in results {
        let o = res?;
        let w = match &cfg.prefix {
            Prefix::Algebraic { w, .. } => Some(*w),
            Prefix::Transcendental { ws, .. } => ws.first().copied(),
            Prefix::None => None,
        };
        let w_str = w.map_or("-".to_string(), |w| w.to_string());
        write!(
            out,
            "q={} w={w_str} seed={} score={} iterations={} restarts={}",
            cfg.q, cfg.seed, o.score, o.iterations, o.restarts_used
        )?;
        if !o.terminated {
            writeln!(out)?;
            continue;
        }
        hits += 1;
        let m = Rank3Matroid::from_profile(&o.arrangement.intersection_profile());
        let mut entry = CatalogEntry::describe(&m);
        entry.discovery = Some(Discovery {
            q: cfg.q,
            w,
            seed: cfg.seed,
            iterations: o.iterations,
        });
        entry.field = Some(format!("F_{}", cfg.q));
        write!(out, " key={}", entry.key)?;
        let status = match &mut catalog {
            Some(cat) => {
                let fresh = cat.get(&entry.key).is_none();
                if fresh {
                    if let Some(dir) = &a.arrangements_dir {
                        let path = dir.join(format!("n{}_{}.txt", m.n(), &entry.key[..16.min(entry.key.len())]));
                        let mut file = ArrangementFile::prime(&o.arrangement);
                        file.comments.push(format!("key {}", entry.key));
                        file.comments.push(format!("seed {} q {} w {w_str}", cfg.seed, cfg.q));
                        std::fs::write(&path, file.to_string())
                            .with_context(|| format!("writing {}", path.display()))?;
                        entry.arrangement = Some(path);
                    }
                }
                match cat.insert(entry)? {
                    Insert::Inserted => "new".to_string(),
                    Insert::Duplicate { hits } => format!("known hits={hits}"),
                }
            }
            None => String::new(),
        };
        writeln!(out, " {status}")?;
    }
    writeln!(out, "terminated: {hits}")?;
    Ok(())
}
