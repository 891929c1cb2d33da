//! Greedy ROUGE oracle labels and class balancing.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::features::{extract_features, feature_names, FeatureVector};
use crate::preprocess::Document;
use crate::rouge::{rouge_n, tokenize};
use crate::summarizer::SummaryBudget;
use crate::{seed, Error, Result};

/// The oracle objective: mean of ROUGE-1 F and ROUGE-2 F.
pub fn oracle_objective(candidate: &[Vec<String>], reference: &[Vec<String>]) -> f64 {
    (rouge_n(candidate, reference, 1).f1 + rouge_n(candidate, reference, 2).f1) / 2.0
}

fn fits(doc: &Document, selected: &[usize], extra: usize, budget: SummaryBudget) -> bool {
    match budget {
        SummaryBudget::Sentences(k) => selected.len() < k,
        SummaryBudget::Words(w) => {
            let used: usize = selected.iter().map(|&i| doc.sentences[i].term_count()).sum();
            used + doc.sentences[extra].term_count() <= w
        }
    }
}

/// Greedy forward selection on the oracle objective.
///
/// Each step adds the sentence with the largest objective gain (earliest on
/// ties) among those that still fit the budget; selection stops when no
/// sentence gives a positive gain.
pub fn greedy_oracle_labels(doc: &Document, budget: SummaryBudget) -> Result<Vec<u8>> {
    let reference: Vec<Vec<String>> = doc
        .reference_sentences
        .iter()
        .map(|s| tokenize(&s.raw, false))
        .filter(|t| !t.is_empty())
        .collect();
    if reference.is_empty() {
        return Err(Error::Labeling {
            id: doc.id.clone(),
            message: "reference summary is empty".into(),
        });
    }
    let sentences: Vec<Vec<String>> = doc.sentences.iter().map(|s| tokenize(&s.raw, false)).collect();
    let mut selected: Vec<usize> = Vec::new();
    let mut current = 0.0;
    loop {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..sentences.len() {
            if selected.contains(&i) || !fits(doc, &selected, i, budget) {
                continue;
            }
            let mut trial = selected.clone();
            trial.push(i);
            trial.sort_unstable();
            let cand: Vec<Vec<String>> = trial.iter().map(|&k| sentences[k].clone()).collect();
            let score = oracle_objective(&cand, &reference);
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((i, score));
            }
        }
        match best {
            Some((i, score)) if score > current => {
                selected.push(i);
                current = score;
            }
            _ => break,
        }
    }
    let mut labels = vec![0u8; doc.len()];
    for i in selected {
        labels[i] = 1;
    }
    Ok(labels)
}

/// Labels for every document, in input order.
pub fn label_documents(docs: &[Document], budget: SummaryBudget) -> Result<Vec<Vec<u8>>> {
    docs.par_iter()
        .map(|d| greedy_oracle_labels(d, budget))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSentence {
    pub doc_id: String,
    pub sentence_index: usize,
    pub features: FeatureVector,
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainingSet {
    pub sentences: Vec<LabeledSentence>,
}

impl TrainingSet {
    /// Feature rows for `docs` with matching labels.
    pub fn build(docs: &[Document], labels: &[Vec<u8>]) -> Result<Self> {
        if docs.len() != labels.len() {
            return Err(Error::Validation(format!(
                "{} documents but {} label lists",
                docs.len(),
                labels.len()
            )));
        }
        let per_doc: Vec<Vec<LabeledSentence>> = docs
            .par_iter()
            .zip(labels)
            .map(|(doc, labels)| {
                if labels.len() != doc.len() {
                    return Err(Error::Labeling {
                        id: doc.id.clone(),
                        message: format!("{} labels for {} sentences", labels.len(), doc.len()),
                    });
                }
                Ok(extract_features(doc)
                    .into_iter()
                    .zip(labels)
                    .enumerate()
                    .map(|(i, (features, &label))| LabeledSentence {
                        doc_id: doc.id.clone(),
                        sentence_index: i,
                        features,
                        label,
                    })
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            sentences: per_doc.into_iter().flatten().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// `(negatives, positives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.sentences.iter().filter(|s| s.label == 1).count();
        (self.len() - pos, pos)
    }

    pub fn to_dataset(&self) -> Result<Dataset> {
        let rows: Vec<&[f64]> = self.sentences.iter().map(|s| s.features.as_slice()).collect();
        Dataset::from_rows(
            feature_names(),
            &rows,
            self.sentences.iter().map(|s| s.label).collect(),
        )
    }
}

/// Keeps every minority sentence and a seeded random sample of the
/// majority class of the same size. Kept items stay in input order.
pub fn undersample(set: &TrainingSet, root_seed: u64) -> Result<TrainingSet> {
    let (neg, pos) = set.class_counts();
    if neg == 0 || pos == 0 {
        return Err(Error::Balancing(format!(
            "undersampling needs both classes, got {pos} positive and {neg} negative"
        )));
    }
    let majority = if pos > neg { 1 } else { 0 };
    let mut majority_idx: Vec<usize> = (0..set.len())
        .filter(|&i| set.sentences[i].label == majority)
        .collect();
    let mut rng = seed::rng(root_seed, "undersample", "");
    majority_idx.shuffle(&mut rng);
    let mut keep = vec![false; set.len()];
    for &i in majority_idx.iter().take(pos.min(neg)) {
        keep[i] = true;
    }
    let sentences = set
        .sentences
        .iter()
        .zip(keep)
        .filter(|(s, k)| *k || s.label != majority)
        .map(|(s, _)| s.clone())
        .collect();
    Ok(TrainingSet { sentences })
}
