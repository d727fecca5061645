//! Re-derivation of norms and flags from a written output directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::config::ModelKind;
use crate::harness::report::{derive_norms, ProfileRow, AVERAGE_TAG, PROFILE_HEADER};

/// Norms of one profile block; `tag` is the sweep label, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockNorms {
    pub tag: Option<String>,
    pub norms: Vec<(String, f64)>,
    pub flags: Vec<(String, bool)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompareOutcome {
    pub blocks: Vec<BlockNorms>,
    /// Keys whose stored value is missing or differs from the re-derived one.
    pub mismatches: Vec<String>,
}

impl CompareOutcome {
    pub fn consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_row(rec: &csv::StringRecord, line: usize) -> Result<ProfileRow> {
    if rec.len() != 6 {
        return Err(parse_err(
            line,
            format!("expected 6 columns, got {}", rec.len()),
        ));
    }
    let num = |i: usize| -> Result<f64> {
        rec[i].parse::<f64>().map_err(|_| {
            parse_err(
                line,
                format!(
                    "column {} is not a number: `{}`",
                    PROFILE_HEADER[i], &rec[i]
                ),
            )
        })
    };
    let model = ModelKind::parse(&rec[0])
        .ok_or_else(|| parse_err(line, format!("unknown model `{}`", &rec[0])))?;
    Ok(ProfileRow {
        model,
        t: num(2)?,
        z: num(3)?,
        r: if &rec[4] == AVERAGE_TAG {
            None
        } else {
            Some(num(4)?)
        },
        value: num(5)?,
    })
}

/// Splits `profile.csv` into `# tag` blocks and parses their rows.
pub fn read_profile(path: &Path) -> Result<Vec<(Option<String>, Vec<ProfileRow>)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == PROFILE_HEADER.join(",") => {}
        _ => return Err(parse_err(1, "missing or unexpected profile.csv header")),
    }
    let mut blocks: Vec<(Option<String>, Vec<ProfileRow>)> = vec![(None, Vec::new())];
    for (i, line) in lines {
        if let Some(tag) = line.strip_prefix('#') {
            blocks.push((Some(tag.trim().to_string()), Vec::new()));
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(line.as_bytes());
        let rec = rdr
            .records()
            .next()
            .ok_or_else(|| parse_err(i + 1, "empty record"))?
            .map_err(|e| parse_err(i + 1, e.to_string()))?;
        blocks.last_mut().unwrap().1.push(parse_row(&rec, i + 1)?);
    }
    if blocks.len() > 1 && blocks[0].1.is_empty() {
        blocks.remove(0);
    }
    Ok(blocks)
}

/// `summary.kv` entries keyed by `(section, key)`; unsectioned keys use the empty section.
pub fn read_summary(path: &Path) -> Result<BTreeMap<(String, String), String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = BTreeMap::new();
    let mut section = String::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        if let Some(s) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = s.to_string();
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| parse_err(i + 1, "expected key=value"))?;
        out.insert((section.clone(), k.to_string()), v.to_string());
    }
    Ok(out)
}

/// Recomputes norms and flags from `dir/profile.csv` and checks them against `dir/summary.kv`.
pub fn compare(dir: &Path) -> Result<CompareOutcome> {
    let blocks = read_profile(&dir.join("profile.csv"))?;
    let summary = read_summary(&dir.join("summary.kv"))?;
    let mut out = CompareOutcome::default();
    for (tag, rows) in blocks {
        let (norms, flags) = derive_norms(&rows);
        let section = tag.clone().unwrap_or_default();
        let label = |k: &str| match &tag {
            Some(t) => format!("[{t}] {k}"),
            None => k.to_string(),
        };
        for (k, v) in &norms {
            match summary.get(&(section.clone(), k.clone())) {
                Some(s) if s.parse::<f64>().ok() == Some(*v) => {}
                Some(s) => out
                    .mismatches
                    .push(format!("{}: stored {s}, derived {v}", label(k))),
                None => out
                    .mismatches
                    .push(format!("{}: missing from summary", label(k))),
            }
        }
        for (k, v) in &flags {
            match summary.get(&(section.clone(), k.clone())) {
                Some(s) if s == &v.to_string() => {}
                Some(s) => out
                    .mismatches
                    .push(format!("{}: stored {s}, derived {v}", label(k))),
                None => out
                    .mismatches
                    .push(format!("{}: missing from summary", label(k))),
            }
        }
        out.blocks.push(BlockNorms { tag, norms, flags });
    }
    Ok(out)
}
