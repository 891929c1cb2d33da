//! Corpus ingestion, dataset splits, label files and model persistence.
//!
//! A corpus is UTF-8 text with one JSON record per line:
//!
//! ```text
//! {"id": "cnn-0001", "body": "Full article text ...", "reference": ["Highlight one.", "Highlight two."]}
//! ```
//!
//! An optional `labels` array (one 0/1 entry per body sentence) carries
//! labels computed by external tools.

mod model_file;

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{seed, Error, Result};

pub use model_file::{
    from_model_bytes, load_model, save_model, to_model_bytes, ModelFile, ModelKind, FORMAT_VERSION,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub id: String,
    pub body: String,
    pub reference: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<u8>>,
}

fn parse_record(line_no: usize, line: &str) -> Result<RawDocument> {
    let doc: RawDocument = serde_json::from_str(line).map_err(|e| Error::Parse {
        line: line_no,
        message: e.to_string(),
    })?;
    if doc.id.trim().is_empty() {
        return Err(Error::Parse {
            line: line_no,
            message: "empty `id`".into(),
        });
    }
    if doc.body.trim().is_empty() {
        return Err(Error::Parse {
            line: line_no,
            message: format!("document `{}` has an empty `body`", doc.id),
        });
    }
    if let Some(labels) = &doc.labels {
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("document `{}` has a label outside {{0,1}}", doc.id),
            });
        }
    }
    Ok(doc)
}

/// Parses corpus text. Blank lines are skipped; line numbers are 1-based.
pub fn parse_corpus(text: &str) -> Result<Vec<RawDocument>> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l))
        .collect();
    let parsed: Vec<Result<RawDocument>> = lines
        .par_iter()
        .map(|&(no, line)| parse_record(no, line))
        .collect();
    let docs = parsed.into_iter().collect::<Result<Vec<_>>>()?;
    let mut seen = HashSet::new();
    for (doc, &(no, _)) in docs.iter().zip(&lines) {
        if !seen.insert(doc.id.as_str()) {
            return Err(Error::Validation(format!(
                "duplicate document id `{}` at line {no}",
                doc.id
            )));
        }
    }
    Ok(docs)
}

/// Loads a corpus file, preserving file order.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<RawDocument>> {
    parse_corpus(&fs::read_to_string(path)?)
}

pub fn write_corpus(path: impl AsRef<Path>, docs: &[RawDocument]) -> Result<()> {
    let mut out = fs::File::create(path)?;
    for doc in docs {
        serde_json::to_writer(&mut out, doc)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSplit {
    pub train: Vec<String>,
    pub validation: Vec<String>,
    pub test: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subset {
    Train,
    Validation,
    Test,
}

impl CorpusSplit {
    pub fn ids(&self, subset: Subset) -> &[String] {
        match subset {
            Subset::Train => &self.train,
            Subset::Validation => &self.validation,
            Subset::Test => &self.test,
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

/// Seeded shuffle, then floor-and-remainder sizing: each part gets
/// `floor(ratio * n)` ids and leftovers go to the largest fractional parts
/// (earlier parts win ties). Within a part, ids keep their input order.
pub fn split_corpus(ids: &[String], ratios: [f64; 3], seed: u64) -> Result<CorpusSplit> {
    if ids.is_empty() {
        return Err(Error::Validation("cannot split an empty id list".into()));
    }
    if ratios.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::Validation(format!(
            "split ratios must be positive, got {ratios:?}"
        )));
    }
    let total: f64 = ratios.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Validation(format!(
            "split ratios must sum to 1, got {total}"
        )));
    }
    let n = ids.len();
    let exact: Vec<f64> = ratios.iter().map(|r| r * n as f64).collect();
    let mut sizes: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let mut left = n - sizes.iter().sum::<usize>();
    for &k in order.iter().cycle() {
        if left == 0 {
            break;
        }
        sizes[k] += 1;
        left -= 1;
    }

    let mut positions: Vec<usize> = (0..n).collect();
    positions.shuffle(&mut seed::rng(seed, "split", ""));
    let mut parts: Vec<Vec<usize>> = Vec::with_capacity(3);
    let mut offset = 0;
    for size in sizes {
        let mut part = positions[offset..offset + size].to_vec();
        part.sort_unstable();
        parts.push(part);
        offset += size;
    }
    let pick = |p: &Vec<usize>| p.iter().map(|&i| ids[i].clone()).collect();
    Ok(CorpusSplit {
        train: pick(&parts[0]),
        validation: pick(&parts[1]),
        test: pick(&parts[2]),
    })
}

/// Per-document sentence labels, one JSON record per line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub id: String,
    pub labels: Vec<u8>,
}

pub fn write_labels(path: impl AsRef<Path>, records: &[LabelRecord]) -> Result<()> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.push(b'\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_labels(path: impl AsRef<Path>) -> Result<Vec<LabelRecord>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}
