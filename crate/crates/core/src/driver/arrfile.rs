//! Text format for arrangements:
//!
//! ```text
//! # comment
//! field = prime 14639            (or: rational, or: number)
//! minpoly = X^4 - 3X^3 + 1       (number fields only)
//! variable = w                   (number fields only, default w)
//! (1 : 0 : w^2-1)
//! ```
//!
//! Coordinates are kept as written, so files round-trip unchanged apart from
//! whitespace normalization.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::field::{normalize, Field, ProjTriple};
use crate::gfplane::PrimeField;
use crate::intpoly::IntPoly;
use crate::lattice::{Arrangement, FlatSizes, IntersectionProfile, LatticeError};
use crate::matroid::Rank3Matroid;
use crate::numberfield::NumberField;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("coordinate {coord:?} of line {index}: {reason}")]
    Coordinate { index: usize, coord: String, reason: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldSpec {
    Prime(u64),
    Rational,
    Number { minpoly: IntPoly, var: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementFile {
    pub comments: Vec<String>,
    pub field: FieldSpec,
    pub lines: Vec<[String; 3]>,
}

/// An arrangement over whichever field the file names.
#[derive(Debug, Clone)]
pub enum LoadedArrangement {
    Prime(Arrangement<PrimeField>),
    Number(Arrangement<NumberField>),
}

impl LoadedArrangement {
    pub fn len(&self) -> usize {
        match self {
            LoadedArrangement::Prime(a) => a.len(),
            LoadedArrangement::Number(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_essential(&self) -> bool {
        match self {
            LoadedArrangement::Prime(a) => a.is_essential(),
            LoadedArrangement::Number(a) => a.is_essential(),
        }
    }

    pub fn describe_field(&self) -> String {
        match self {
            LoadedArrangement::Prime(a) => a.field().describe(),
            LoadedArrangement::Number(a) => a.field().describe(),
        }
    }

    /// Multiplicities and the matroid, the only things downstream code needs.
    pub fn matroid(&self) -> (Rank3Matroid, Vec<usize>) {
        fn go<E>(p: IntersectionProfile<E>) -> (Rank3Matroid, Vec<usize>) {
            (Rank3Matroid::from_profile(&p), p.flat_sizes())
        }
        match self {
            LoadedArrangement::Prime(a) => go(a.intersection_profile()),
            LoadedArrangement::Number(a) => go(a.intersection_profile()),
        }
    }
}

impl ArrangementFile {
    pub fn read(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        text.parse()
    }

    pub fn from_lines<F: Field>(field: FieldSpec, lines: &[ProjTriple<F::Elem>], fmt_elem: impl Fn(&F::Elem) -> String) -> Self {
        ArrangementFile {
            comments: Vec::new(),
            field,
            lines: lines
                .iter()
                .map(|l| {
                    let c = l.coords();
                    [fmt_elem(&c[0]), fmt_elem(&c[1]), fmt_elem(&c[2])]
                })
                .collect(),
        }
    }

    pub fn prime(arr: &Arrangement<PrimeField>) -> Self {
        ArrangementFile::from_lines::<PrimeField>(FieldSpec::Prime(arr.field().q()), arr.lines(), |e| e.to_string())
    }

    pub fn load(&self) -> Result<LoadedArrangement, FileError> {
        match &self.field {
            FieldSpec::Prime(q) => {
                let f = PrimeField::new(*q).map_err(|e| FileError::Syntax {
                    line: 0,
                    reason: e.to_string(),
                })?;
                let lines = self.parse_lines(&f, |s| {
                    s.parse::<i64>().map(|v| f.elem(v)).map_err(|_| "not an integer".to_string())
                })?;
                Ok(LoadedArrangement::Prime(Arrangement::new(f, lines)?))
            }
            FieldSpec::Rational => {
                let f = NumberField::rational();
                let lines = self.parse_lines(&f, |s| f.parse_elem(s).map_err(|e| e.to_string()))?;
                Ok(LoadedArrangement::Number(Arrangement::new(f, lines)?))
            }
            FieldSpec::Number { minpoly, var } => {
                let f = NumberField::new(minpoly.clone(), var.clone()).map_err(|e| FileError::Syntax {
                    line: 0,
                    reason: e.to_string(),
                })?;
                let lines = self.parse_lines(&f, |s| f.parse_elem(s).map_err(|e| e.to_string()))?;
                Ok(LoadedArrangement::Number(Arrangement::new(f, lines)?))
            }
        }
    }

    fn parse_lines<F: Field>(
        &self,
        f: &F,
        elem: impl Fn(&str) -> Result<F::Elem, String>,
    ) -> Result<Vec<ProjTriple<F::Elem>>, FileError> {
        let mut out = Vec::with_capacity(self.lines.len());
        for (index, coords) in self.lines.iter().enumerate() {
            let mut raw = Vec::with_capacity(3);
            for c in coords {
                raw.push(elem(c).map_err(|reason| FileError::Coordinate {
                    index,
                    coord: c.clone(),
                    reason,
                })?);
            }
            let raw: [F::Elem; 3] = raw.try_into().expect("three coordinates");
            out.push(normalize(f, raw).map_err(|e| FileError::Coordinate {
                index,
                coord: coords.join(" : "),
                reason: e.to_string(),
            })?);
        }
        Ok(out)
    }
}

impl FromStr for ArrangementFile {
    type Err = FileError;

    fn from_str(text: &str) -> Result<Self, FileError> {
        let mut comments = Vec::new();
        let mut kind: Option<(usize, String)> = None;
        let mut minpoly: Option<IntPoly> = None;
        let mut var: Option<String> = None;
        let mut lines = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let syntax = |reason: &str| FileError::Syntax {
                line: k + 1,
                reason: reason.to_string(),
            };
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                if lines.is_empty() && kind.is_none() {
                    comments.push(c.trim().to_string());
                }
                continue;
            }
            if let Some(body) = line.strip_prefix('(') {
                let body = body.strip_suffix(')').ok_or_else(|| syntax("missing ')'"))?;
                let parts: Vec<String> = body.split(':').map(|p| p.trim().to_string()).collect();
                let triple: [String; 3] = parts.try_into().map_err(|_| syntax("expected three coordinates"))?;
                if triple.iter().any(String::is_empty) {
                    return Err(syntax("empty coordinate"));
                }
                lines.push(triple);
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| syntax("expected 'key = value' or '(a : b : c)'"))?;
            let value = value.trim();
            match key.trim() {
                "field" => kind = Some((k + 1, value.to_string())),
                "minpoly" => {
                    minpoly = Some(value.parse().map_err(|e: crate::intpoly::ParsePolyError| syntax(&e.to_string()))?)
                }
                "variable" => var = Some(value.to_string()),
                other => return Err(syntax(&format!("unknown key {other:?}"))),
            }
        }
        let (kline, kind) = kind.ok_or(FileError::Syntax {
            line: 0,
            reason: "no 'field =' line".into(),
        })?;
        let bad = |reason: &str| FileError::Syntax {
            line: kline,
            reason: reason.to_string(),
        };
        let mut words = kind.split_whitespace();
        let field = match (words.next(), words.next(), words.next()) {
            (Some("prime"), Some(q), None) => FieldSpec::Prime(q.parse().map_err(|_| bad("bad prime"))?),
            (Some("rational"), None, None) => FieldSpec::Rational,
            (Some("number"), None, None) => FieldSpec::Number {
                minpoly: minpoly.take().ok_or_else(|| bad("number field needs 'minpoly ='"))?,
                var: var.take().unwrap_or_else(|| "w".to_string()),
            },
            _ => return Err(bad("expected 'prime <q>', 'rational' or 'number'")),
        };
        if minpoly.is_some() || var.is_some() {
            return Err(bad("'minpoly'/'variable' only apply to number fields"));
        }
        Ok(ArrangementFile { comments, field, lines })
    }
}

impl fmt::Display for ArrangementFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.comments {
            writeln!(f, "# {c}")?;
        }
        match &self.field {
            FieldSpec::Prime(q) => writeln!(f, "field = prime {q}")?,
            FieldSpec::Rational => writeln!(f, "field = rational")?,
            FieldSpec::Number { minpoly, var } => {
                writeln!(f, "field = number")?;
                writeln!(f, "minpoly = {}", minpoly.display_in("X"))?;
                writeln!(f, "variable = {var}")?;
            }
        }
        for [a, b, c] in &self.lines {
            writeln!(f, "({a} : {b} : {c})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bundled_files_parse() {
        for (text, n) in [
            (crate::data::ARR35_K2, 35),
            (crate::data::B3, 9),
            (crate::data::H3_FF, 15),
        ] {
            let file: ArrangementFile = text.parse().unwrap();
            assert_eq!(file.lines.len(), n);
            let loaded = file.load().unwrap();
            assert_eq!(loaded.len(), n);
            assert!(loaded.is_essential());
            let again: ArrangementFile = file.to_string().parse().unwrap();
            assert_eq!(again, file);
        }
    }

    #[test]
    fn errors_name_the_problem() {
        let err = |t: &str| t.parse::<ArrangementFile>().unwrap_err().to_string();
        assert!(err("(1 : 0 : 0)\n").contains("no 'field"));
        assert!(err("field = prime 7\n(1 : 0)\n").contains("three coordinates"));
        assert!(err("field = number\n(1 : 0 : 0)\n").contains("minpoly"));
        assert!(err("field = prime 7\ncolour = red\n").contains("unknown key"));
        let dup: ArrangementFile = "field = prime 7\n(1 : 0 : 0)\n(2 : 0 : 0)\n".parse().unwrap();
        assert!(matches!(dup.load(), Err(FileError::Lattice(LatticeError::DuplicateLines(0, 1)))));
        let zero: ArrangementFile = "field = prime 7\n(7 : 0 : 14)\n".parse().unwrap();
        assert!(matches!(zero.load(), Err(FileError::Coordinate { index: 0, .. })));
        let junk: ArrangementFile = "field = rational\n(1 : x : 0)\n".parse().unwrap();
        assert!(junk.load().is_err());
    }

    #[test]
    fn prime_arrangement_round_trips() {
        let f = PrimeField::new(53).unwrap();
        let lines = vec![f.triple(1, 2, 3).unwrap(), f.triple(0, 1, 5).unwrap(), f.triple(0, 0, 1).unwrap()];
        let arr = Arrangement::new(f, lines.clone()).unwrap();
        let file = ArrangementFile::prime(&arr);
        match file.to_string().parse::<ArrangementFile>().unwrap().load().unwrap() {
            LoadedArrangement::Prime(a) => assert_eq!(a.lines(), &lines[..]),
            LoadedArrangement::Number(_) => panic!("wrong field"),
        }
    }

    proptest! {
        #[test]
        fn text_round_trip(coords in prop::collection::vec((-50i64..50, -50i64..50, 1i64..50), 1..8)) {
            let file = ArrangementFile {
                comments: vec!["generated".into()],
                field: FieldSpec::Rational,
                lines: coords.iter().map(|&(a, b, c)| [a.to_string(), format!("{b}/7"), c.to_string()]).collect(),
            };
            let back: ArrangementFile = file.to_string().parse().unwrap();
            prop_assert_eq!(back, file);
        }
    }
}
