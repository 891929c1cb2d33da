//! Sentence scoring, budgeted selection and the Lead/Oracle baselines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::features::extract_features;
use crate::gam::AdditiveModel;
use crate::preprocess::Document;
use crate::{Error, Result};

/// Summary length limit. Words are counted as non-punctuation tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "limit", rename_all = "snake_case")]
pub enum SummaryBudget {
    Sentences(usize),
    Words(usize),
}

impl SummaryBudget {
    pub fn validate(self) -> Result<Self> {
        match self {
            SummaryBudget::Sentences(0) | SummaryBudget::Words(0) => {
                Err(Error::Validation("summary budget must be at least 1".into()))
            }
            b => Ok(b),
        }
    }
}

impl Default for SummaryBudget {
    fn default() -> Self {
        SummaryBudget::Sentences(3)
    }
}

impl fmt::Display for SummaryBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SummaryBudget::Sentences(k) => write!(f, "sentences:{k}"),
            SummaryBudget::Words(w) => write!(f, "words:{w}"),
        }
    }
}

impl FromStr for SummaryBudget {
    type Err = Error;

    /// Parses `sentences:K` or `words:W`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("bad budget `{s}`; expected sentences:K or words:W"));
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        let value: usize = value.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "sentences" => SummaryBudget::Sentences(value),
            "words" => SummaryBudget::Words(value),
            _ => return Err(bad()),
        }
        .validate()
    }
}

/// Greedy budget filter over an ordered candidate list: sentences are taken
/// in order until the first one that no longer fits.
pub fn apply_budget(order: &[usize], doc: &Document, budget: SummaryBudget) -> Vec<usize> {
    let mut picked = Vec::new();
    match budget {
        SummaryBudget::Sentences(k) => picked.extend(order.iter().take(k)),
        SummaryBudget::Words(w) => {
            let mut total = 0;
            for &i in order {
                let len = doc.sentences[i].term_count();
                if total + len > w {
                    break;
                }
                total += len;
                picked.push(i);
            }
        }
    }
    picked.sort_unstable();
    picked
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub id: String,
    pub indices: Vec<usize>,
    pub sentences: Vec<String>,
}

impl Summary {
    pub fn from_indices(doc: &Document, indices: Vec<usize>) -> Self {
        let sentences = indices.iter().map(|&i| doc.sentences[i].raw.clone()).collect();
        Self {
            id: doc.id.clone(),
            indices,
            sentences,
        }
    }

    pub fn text(&self) -> String {
        self.sentences.join(" ")
    }
}

pub fn score_sentences(model: &AdditiveModel, doc: &Document) -> Vec<f64> {
    extract_features(doc)
        .iter()
        .map(|f| model.predict_proba(f.as_slice()))
        .collect()
}

/// Indices by descending score, ties toward the earlier sentence.
pub fn rank(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

pub fn select_sentences(scores: &[f64], doc: &Document, budget: SummaryBudget) -> Result<Summary> {
    if doc.is_empty() {
        return Err(Error::Selection(format!("document `{}` has no sentences", doc.id)));
    }
    if scores.len() != doc.len() {
        return Err(Error::Selection(format!(
            "document `{}`: {} scores for {} sentences",
            doc.id,
            scores.len(),
            doc.len()
        )));
    }
    Ok(Summary::from_indices(doc, apply_budget(&rank(scores), doc, budget)))
}

pub fn summarize(model: &AdditiveModel, doc: &Document, budget: SummaryBudget) -> Result<Summary> {
    select_sentences(&score_sentences(model, doc), doc, budget)
}

pub fn lead_baseline(doc: &Document, budget: SummaryBudget) -> Summary {
    let order: Vec<usize> = (0..doc.len()).collect();
    Summary::from_indices(doc, apply_budget(&order, doc, budget))
}

/// Label-1 sentences in document order, clipped by the budget.
pub fn oracle_baseline(doc: &Document, labels: &[u8], budget: SummaryBudget) -> Result<Summary> {
    if labels.len() != doc.len() {
        return Err(Error::Selection(format!(
            "document `{}`: {} labels for {} sentences",
            doc.id,
            labels.len(),
            doc.len()
        )));
    }
    let order: Vec<usize> = (0..doc.len()).filter(|&i| labels[i] == 1).collect();
    if order.is_empty() {
        log::info!("document `{}` has no oracle sentences; summary is empty", doc.id);
    }
    Ok(Summary::from_indices(doc, apply_budget(&order, doc, budget)))
}
