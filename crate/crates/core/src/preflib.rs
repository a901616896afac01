//! PREFLIB strict-order files: `.soc` (complete) and `.soi` (incomplete).
//!
//! A file is a block of `# KEY: value` metadata lines followed by one
//! `<multiplicity>: <c1>,<c2>,...` line per distinct order, candidates
//! numbered from 1. In `.soi` files the candidates missing from an order
//! share the last position.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{AlternativeRegistry, Profile, Vote};

pub const NUMBER_ALTERNATIVES: &str = "NUMBER ALTERNATIVES";
pub const NUMBER_VOTERS: &str = "NUMBER VOTERS";
pub const NUMBER_UNIQUE_ORDERS: &str = "NUMBER UNIQUE ORDERS";
pub const DATA_TYPE: &str = "DATA TYPE";
const ALTERNATIVE_NAME: &str = "ALTERNATIVE NAME ";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreflibKind {
    Soc,
    Soi,
}

impl PreflibKind {
    pub fn extension(self) -> &'static str {
        match self {
            PreflibKind::Soc => "soc",
            PreflibKind::Soi => "soi",
        }
    }
}

impl fmt::Display for PreflibKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for PreflibKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "soc" => Ok(PreflibKind::Soc),
            "soi" => Ok(PreflibKind::Soi),
            "toc" | "toi" => Err(Error::UnsupportedFormat(format!(
                "data type {s} has ties; only .soc and .soi are supported"
            ))),
            other => Err(Error::UnsupportedFormat(format!(
                "data type {other:?} is not .soc or .soi"
            ))),
        }
    }
}

/// The raw content of a file: metadata in file order (unknown keys kept)
/// and `(multiplicity, 1-based candidate sequence)` orders.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PreflibDocument {
    pub metadata: Vec<(String, String)>,
    pub orders: Vec<(u64, Vec<usize>)>,
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

/// `declared` is the alternative count from the metadata, when present.
fn parse_order_line(
    line_no: usize,
    line: &str,
    declared: Option<usize>,
) -> Result<(u64, Vec<usize>)> {
    if line.contains('{') || line.contains('}') {
        return Err(Error::UnsupportedFormat(format!(
            "line {line_no} contains a tie group; orders with ties (.toc/.toi) are not supported"
        )));
    }
    let Some((mult, body)) = line.split_once(':') else {
        return parse_err(line_no, "expected '<multiplicity>: <candidates>'");
    };
    let mult: i64 = match mult.trim().parse() {
        Ok(v) => v,
        Err(_) => return parse_err(line_no, format!("invalid multiplicity {:?}", mult.trim())),
    };
    if mult <= 0 {
        return parse_err(
            line_no,
            format!("multiplicity must be positive, got {mult}"),
        );
    }
    let body = body.trim();
    let mut seq = Vec::new();
    if !body.is_empty() {
        for tok in body.split(',') {
            let tok = tok.trim();
            let Ok(c) = tok.parse::<usize>() else {
                return parse_err(line_no, format!("invalid candidate number {tok:?}"));
            };
            if c == 0 || declared.is_some_and(|n| c > n) {
                let upper = declared.map_or(String::new(), |n| n.to_string());
                return parse_err(line_no, format!("candidate {c} outside 1..={upper}"));
            }
            if seq.contains(&c) {
                return parse_err(line_no, format!("candidate {c} appears twice in one order"));
            }
            seq.push(c);
        }
    }
    Ok((mult as u64, seq))
}

impl PreflibDocument {
    /// Splits a file into metadata and orders without interpreting either.
    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = PreflibDocument::default();
        let mut declared = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if !doc.orders.is_empty() {
                    return parse_err(line_no, "metadata line after the first order");
                }
                let (key, value) = rest.split_once(':').unwrap_or((rest, ""));
                doc.metadata
                    .push((key.trim().to_string(), value.trim().to_string()));
                continue;
            }
            if doc.metadata.is_empty() && !line.contains(':') {
                return Err(Error::UnsupportedFormat(
                    "legacy headerless PREFLIB format; convert the file to the '# KEY: value' header style"
                        .into(),
                ));
            }
            if doc.orders.is_empty() {
                declared = doc.numeric(NUMBER_ALTERNATIVES)?.map(|n| n as usize);
            }
            doc.orders.push(parse_order_line(line_no, line, declared)?);
        }
        Ok(doc)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(key))
            .map(|(_, v)| v.as_str())
    }

    fn numeric(&self, key: &str) -> Result<Option<u64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| {
                Error::Validation(format!("metadata {key} has non-numeric value {v:?}"))
            }),
        }
    }

    pub fn kind(&self) -> Result<Option<PreflibKind>> {
        self.get(DATA_TYPE).map(str::parse).transpose()
    }

    /// `ALTERNATIVE NAME i` entries, as `(i, name)`.
    fn names(&self) -> Result<Vec<(usize, &str)>> {
        self.metadata
            .iter()
            .filter_map(|(k, v)| {
                let idx = k
                    .to_ascii_uppercase()
                    .strip_prefix(ALTERNATIVE_NAME)?
                    .trim()
                    .to_string();
                Some(
                    idx.parse::<usize>()
                        .map(|i| (i, v.as_str()))
                        .map_err(|_| Error::Validation(format!("bad alternative number in {k:?}"))),
                )
            })
            .collect()
    }

    pub fn num_alternatives(&self) -> Result<usize> {
        if let Some(n) = self.numeric(NUMBER_ALTERNATIVES)? {
            return Ok(n as usize);
        }
        let from_names = self.names()?.iter().map(|&(i, _)| i).max().unwrap_or(0);
        let from_orders = self
            .orders
            .iter()
            .flat_map(|(_, s)| s.iter().copied())
            .max()
            .unwrap_or(0);
        Ok(from_names.max(from_orders))
    }

    /// Interprets the document: labels, range and duplicate checks, and
    /// consistency with declared counts.
    pub fn to_profile(&self) -> Result<Profile> {
        let n = self.num_alternatives()?;
        if n == 0 {
            return Err(Error::Validation(
                "the file declares no alternatives".into(),
            ));
        }
        let mut labels: Vec<String> = (1..=n).map(|i| format!("Candidate {i}")).collect();
        for (i, name) in self.names()? {
            if i == 0 || i > n {
                return Err(Error::Validation(format!(
                    "alternative name {i} outside 1..={n}"
                )));
            }
            labels[i - 1] = name.to_string();
        }
        let registry =
            AlternativeRegistry::new(labels).map_err(|e| Error::Validation(e.to_string()))?;
        let kind = self.kind()?;

        let mut entries = Vec::with_capacity(self.orders.len());
        for (j, (mult, seq)) in self.orders.iter().enumerate() {
            if *mult == 0 {
                return Err(Error::Validation(format!(
                    "order {} has multiplicity 0",
                    j + 1
                )));
            }
            if seq.contains(&0) {
                return Err(Error::Validation(format!(
                    "order {} uses candidate 0",
                    j + 1
                )));
            }
            let vote = Vote::new(seq.iter().map(|c| c - 1).collect(), n)
                .map_err(|e| Error::Validation(format!("order {}: {e}", j + 1)))?;
            if kind == Some(PreflibKind::Soc) && !vote.is_complete() {
                return Err(Error::Validation(format!(
                    "order {} ranks {} of {n} candidates in a .soc file",
                    j + 1,
                    seq.len()
                )));
            }
            entries.push((vote, *mult));
        }
        if entries.is_empty() {
            return Err(Error::Validation("the file contains no orders".into()));
        }
        let total: u64 = entries.iter().map(|(_, c)| c).sum();
        if let Some(declared) = self.numeric(NUMBER_VOTERS)? {
            if declared != total {
                return Err(Error::Validation(format!(
                    "{NUMBER_VOTERS} declares {declared} but the orders sum to {total}"
                )));
            }
        }
        if let Some(declared) = self.numeric(NUMBER_UNIQUE_ORDERS)? {
            if declared as usize != entries.len() {
                return Err(Error::Validation(format!(
                    "{NUMBER_UNIQUE_ORDERS} declares {declared} but the file lists {}",
                    entries.len()
                )));
            }
        }
        Profile::new(registry, entries)
    }

    /// Canonical document for a profile: standard metadata, orders merged,
    /// sorted by descending multiplicity then by candidate sequence.
    pub fn from_profile(profile: &Profile, kind: PreflibKind) -> Result<Self> {
        if kind == PreflibKind::Soc && !profile.is_complete() {
            return Err(Error::Input(
                "a .soc file needs every vote complete; use .soi".into(),
            ));
        }
        let mut orders: Vec<(u64, Vec<usize>)> = profile
            .canonical_entries()
            .into_iter()
            .map(|(v, c)| (c, v.ranked().iter().map(|a| a + 1).collect()))
            .collect();
        orders.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let mut metadata = vec![
            (DATA_TYPE.to_string(), kind.to_string()),
            (
                NUMBER_ALTERNATIVES.to_string(),
                profile.num_alternatives().to_string(),
            ),
            (NUMBER_VOTERS.to_string(), profile.num_voters().to_string()),
            (NUMBER_UNIQUE_ORDERS.to_string(), orders.len().to_string()),
        ];
        for (i, label) in profile.registry().labels().iter().enumerate() {
            metadata.push((format!("{ALTERNATIVE_NAME}{}", i + 1), label.clone()));
        }
        Ok(Self { metadata, orders })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            if v.is_empty() {
                out.push_str(&format!("# {k}\n"));
            } else {
                out.push_str(&format!("# {k}: {v}\n"));
            }
        }
        for (mult, seq) in &self.orders {
            let seq: Vec<String> = seq.iter().map(usize::to_string).collect();
            out.push_str(&format!("{mult}: {}\n", seq.join(",")));
        }
        out
    }
}

pub fn parse(text: &str) -> Result<Profile> {
    PreflibDocument::parse(text)?.to_profile()
}

pub fn serialize(profile: &Profile, kind: PreflibKind) -> Result<String> {
    Ok(PreflibDocument::from_profile(profile, kind)?.render())
}

pub fn load(path: impl AsRef<Path>) -> Result<Profile> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_complete_file() {
        let p =
            parse("# NUMBER ALTERNATIVES: 3\n# NUMBER VOTERS: 2\n1: 1,2,3\n1: 3,2,1\n").unwrap();
        assert_eq!(p.num_alternatives(), 3);
        assert_eq!(p.num_voters(), 2);
        assert!(p.is_complete());
        assert_eq!(p.registry().label(0), "Candidate 1");
    }

    #[test]
    fn incomplete_tail() {
        let p = parse("# NUMBER ALTERNATIVES: 4\n1: 2,1\n").unwrap();
        let (vote, count) = &p.entries()[0];
        assert_eq!(*count, 1);
        assert_eq!(vote.ranked(), &[1, 0]);
        assert!(!vote.is_ranked(2) && !vote.is_ranked(3));
    }

    #[test]
    fn whitespace_tolerance() {
        let p = parse("#NUMBER ALTERNATIVES:3\n  2 :  3 , 1,2  \n").unwrap();
        assert_eq!(p.entries()[0].0.ranked(), &[2, 0, 1]);
        assert_eq!(p.num_voters(), 2);
    }

    #[test]
    fn documented_errors() {
        let ties = parse("# NUMBER ALTERNATIVES: 3\n1: {1,2},3\n").unwrap_err();
        assert!(matches!(&ties, Error::UnsupportedFormat(m) if m.contains(".toc/.toi")));
        let dup = parse("# NUMBER ALTERNATIVES: 3\n1: 1,2,3\n1: 1,1\n").unwrap_err();
        assert_eq!(
            dup,
            Error::Parse {
                line: 3,
                message: "candidate 1 appears twice in one order".into()
            }
        );
        let range = parse("# NUMBER ALTERNATIVES: 3\n\n1: 1,4\n").unwrap_err();
        assert!(matches!(range, Error::Parse { line: 3, .. }));
        assert!(matches!(
            parse("# NUMBER ALTERNATIVES: 3\n0: 1,2,3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse("# NUMBER ALTERNATIVES: 3\n-2: 1,2,3\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse("# NUMBER ALTERNATIVES: 3\n# NUMBER VOTERS: 5\n1: 1,2,3\n"),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse("3\n1,a\n2,b\n3,c\n"),
            Err(Error::UnsupportedFormat(_))
        ));
        assert!(matches!(
            parse("# DATA TYPE: toc\n1: 1\n"),
            Err(Error::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn round_trip_fixture_a() {
        let a = fixtures::fixture_a();
        let text = serialize(&a, PreflibKind::Soc).unwrap();
        assert_eq!(parse(&text).unwrap(), a);
        assert!(text.lines().any(|l| l == "# ALTERNATIVE NAME 1: x"));
    }

    #[test]
    fn soc_rejects_incomplete() {
        let p = parse("# NUMBER ALTERNATIVES: 4\n1: 2,1\n").unwrap();
        assert!(matches!(
            serialize(&p, PreflibKind::Soc),
            Err(Error::Input(_))
        ));
        let text = serialize(&p, PreflibKind::Soi).unwrap();
        assert_eq!(parse(&text).unwrap(), p);
    }

    #[test]
    fn unknown_metadata_is_preserved() {
        let text = "# TITLE: demo\n# NUMBER ALTERNATIVES: 2\n# NOTE\n1: 1,2\n";
        let doc = PreflibDocument::parse(text).unwrap();
        assert_eq!(doc.get("TITLE"), Some("demo"));
        assert_eq!(doc.render(), text);
    }

    #[test]
    fn orders_are_sorted() {
        let p = Profile::from_labeled(&["a", "b"], &[("b>a", 1), ("a>b", 1), ("b>a", 2)]).unwrap();
        let doc = PreflibDocument::from_profile(&p, PreflibKind::Soc).unwrap();
        assert_eq!(doc.orders, vec![(3, vec![2, 1]), (1, vec![1, 2])]);
    }
}
