//! End-to-end glue: preprocessing a corpus, labeling, dataset assembly,
//! training by model kind, and repeated train/evaluate runs.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusSplit, ModelFile, ModelKind, RawDocument, Subset};
use crate::dataset::Dataset;
use crate::ebm::{self, EbmConfig};
use crate::eval::{evaluate_rouge, sentence_f1, EvalReport, F1Averaging};
use crate::gam::logistic::{train_logistic, LogisticConfig};
use crate::gaminet::{self, GaminetConfig};
use crate::oracle::{greedy_oracle_labels, undersample, TrainingSet};
use crate::preprocess::{preprocess_document, Document};
use crate::summarizer::{summarize, Summary, SummaryBudget};
use crate::{seed, Error, Result};

/// Preprocesses every document, in input order.
pub fn preprocess_corpus(raw: &[RawDocument]) -> Result<Vec<Document>> {
    raw.par_iter().map(preprocess_document).collect()
}

/// Per-document labels: supplied labels when a record carries them,
/// otherwise greedy oracle labels.
pub fn corpus_labels(raw: &[RawDocument], docs: &[Document], budget: SummaryBudget) -> Result<Vec<Vec<u8>>> {
    raw.par_iter()
        .zip(docs)
        .map(|(r, d)| match &r.labels {
            Some(l) if l.len() == d.len() => Ok(l.clone()),
            Some(l) => Err(Error::Labeling {
                id: r.id.clone(),
                message: format!("{} supplied labels for {} sentences", l.len(), d.len()),
            }),
            None => greedy_oracle_labels(d, budget),
        })
        .collect()
}

/// Documents with their labels, addressable by id.
#[derive(Debug, Clone)]
pub struct LabeledCorpus {
    pub docs: Vec<Document>,
    pub labels: Vec<Vec<u8>>,
    index: HashMap<String, usize>,
}

impl LabeledCorpus {
    pub fn new(docs: Vec<Document>, labels: Vec<Vec<u8>>) -> Result<Self> {
        if docs.len() != labels.len() {
            return Err(Error::Validation(format!(
                "{} documents but {} label lists",
                docs.len(),
                labels.len()
            )));
        }
        let index = docs.iter().enumerate().map(|(k, d)| (d.id.clone(), k)).collect();
        Ok(Self { docs, labels, index })
    }

    pub fn from_raw(raw: &[RawDocument], budget: SummaryBudget) -> Result<Self> {
        let docs = preprocess_corpus(raw)?;
        let labels = corpus_labels(raw, &docs, budget)?;
        Self::new(docs, labels)
    }

    /// Documents and labels for `ids`, in that order.
    pub fn subset(&self, ids: &[String]) -> Result<(Vec<Document>, Vec<Vec<u8>>)> {
        let mut docs = Vec::with_capacity(ids.len());
        let mut labels = Vec::with_capacity(ids.len());
        for id in ids {
            let &k = self
                .index
                .get(id)
                .ok_or_else(|| Error::Validation(format!("split names unknown document `{id}`")))?;
            docs.push(self.docs[k].clone());
            labels.push(self.labels[k].clone());
        }
        Ok((docs, labels))
    }

    pub fn training_set(&self, split: &CorpusSplit, subset: Subset) -> Result<TrainingSet> {
        let (docs, labels) = self.subset(split.ids(subset))?;
        TrainingSet::build(&docs, &labels)
    }
}

/// Trainer settings for every model kind; only the selected one is used.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainerConfigs {
    pub ebm: EbmConfig,
    pub gaminet: GaminetConfig,
    pub logistic: LogisticConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainOptions {
    pub kind: ModelKind,
    pub configs: TrainerConfigs,
    pub seed: u64,
    /// Balance classes by undersampling before training.
    pub undersample: bool,
    /// Use the validation split for early stopping and pair checks.
    pub use_validation: bool,
}

impl TrainOptions {
    pub fn new(kind: ModelKind, seed: u64) -> Self {
        Self {
            kind,
            configs: TrainerConfigs::default(),
            seed,
            undersample: true,
            use_validation: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainArtifacts {
    pub file: ModelFile,
    /// Training log as tab-separated text.
    pub log: String,
    pub notices: Vec<String>,
}

/// Turns a sentence set into a dataset, undersampled under `purpose`.
pub fn prepare_dataset(set: &TrainingSet, balance: bool, root: u64, purpose: &str) -> Result<Dataset> {
    if balance {
        undersample(set, seed::derive(root, purpose, ""))?.to_dataset()
    } else {
        set.to_dataset()
    }
}

/// Trains one model on prepared datasets. The trainer seed is derived from
/// the root seed and the model kind.
pub fn train_on(train: &Dataset, val: Option<&Dataset>, options: &TrainOptions) -> Result<TrainArtifacts> {
    let trainer_seed = seed::derive(options.seed, "trainer", &options.kind.to_string());
    match options.kind {
        ModelKind::Ebm => {
            let config = EbmConfig {
                seed: trainer_seed,
                ..options.configs.ebm.clone()
            };
            let out = ebm::train_ebm(train, val, &config)?;
            Ok(TrainArtifacts {
                file: ModelFile::new(ModelKind::Ebm, serde_json::to_value(&config)?, out.model, None),
                log: ebm::log_tsv(&out.log),
                notices: out.notices,
            })
        }
        ModelKind::Gaminet => {
            let config = GaminetConfig {
                seed: trainer_seed,
                ..options.configs.gaminet.clone()
            };
            let out = gaminet::train_gaminet(train, val, &config)?;
            let mut notices = Vec::new();
            if !out.pruned_mains.is_empty() {
                notices.push(format!("pruned main effects: {:?}", out.pruned_mains));
            }
            Ok(TrainArtifacts {
                file: ModelFile::new(
                    ModelKind::Gaminet,
                    serde_json::to_value(&config)?,
                    out.model,
                    Some(out.networks),
                ),
                log: gaminet::log_tsv(&out.log),
                notices,
            })
        }
        ModelKind::Logistic => {
            let config = options.configs.logistic.clone();
            let (model, report) = train_logistic(train, &config)?;
            let mut notices = Vec::new();
            if !report.converged {
                notices.push(format!(
                    "logistic regression stopped at gradient norm {:.3e} after {} iterations",
                    report.gradient_norm, report.iterations
                ));
            }
            Ok(TrainArtifacts {
                file: ModelFile::new(ModelKind::Logistic, serde_json::to_value(&config)?, model, None),
                log: format!(
                    "iterations\tgradient_norm\tloss\tconverged\n{}\t{}\t{}\t{}\n",
                    report.iterations, report.gradient_norm, report.loss, report.converged
                ),
                notices,
            })
        }
    }
}

/// Builds balanced train (and validation) datasets from a split and trains.
pub fn train_from_split(corpus: &LabeledCorpus, split: &CorpusSplit, options: &TrainOptions) -> Result<TrainArtifacts> {
    let train_set = corpus.training_set(split, Subset::Train)?;
    let train = prepare_dataset(&train_set, options.undersample, options.seed, "undersample-train")?;
    let val = if options.use_validation && !split.validation.is_empty() {
        let set = corpus.training_set(split, Subset::Validation)?;
        Some(prepare_dataset(&set, options.undersample, options.seed, "undersample-validation")?)
    } else {
        None
    };
    let val = val.filter(|v| v.require_both_classes().is_ok());
    train_on(&train, val.as_ref(), options)
}

/// Summaries of `docs` with a trained model, in input order.
pub fn summarize_all(file: &ModelFile, docs: &[Document], budget: SummaryBudget) -> Result<Vec<Summary>> {
    docs.par_iter().map(|d| summarize(&file.model, d, budget)).collect()
}

pub fn references(docs: &[Document]) -> Vec<(String, Vec<String>)> {
    docs.iter()
        .map(|d| (d.id.clone(), d.reference_sentences.iter().map(|s| s.raw.clone()).collect()))
        .collect()
}

/// ROUGE of `summaries` against the references of `docs`, plus sentence F1
/// against `labels`.
pub fn evaluate_summaries(
    summaries: &[Summary],
    docs: &[Document],
    labels: &[Vec<u8>],
    stem: bool,
    averaging: F1Averaging,
) -> Result<EvalReport> {
    let mut report = evaluate_rouge(summaries, &references(docs), stem)?;
    let selected: Vec<Vec<usize>> = summaries.iter().map(|s| s.indices.clone()).collect();
    report.sentence_f1 = Some(sentence_f1(&selected, labels, averaging)?);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatResult {
    pub repeat: usize,
    pub seed: u64,
    pub rouge_1: f64,
    pub rouge_2: f64,
    pub rouge_l: f64,
    pub sentence_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatSummary {
    pub kind: ModelKind,
    pub runs: Vec<RepeatResult>,
    pub mean: RepeatResult,
}

/// Trains and evaluates `repeats` times on the test split. Each repeat uses
/// its own root seed, which re-randomizes undersampling and the trainer.
pub fn run_repeats(
    corpus: &LabeledCorpus,
    split: &CorpusSplit,
    options: &TrainOptions,
    repeats: usize,
    budget: SummaryBudget,
) -> Result<RepeatSummary> {
    if repeats == 0 {
        return Err(Error::Validation("repeats must be at least 1".into()));
    }
    let (test_docs, test_labels) = corpus.subset(&split.test)?;
    let mut runs = Vec::with_capacity(repeats);
    for r in 0..repeats {
        let run_seed = seed::derive(options.seed, "repeat", &r.to_string());
        let opts = TrainOptions {
            seed: run_seed,
            ..options.clone()
        };
        let art = train_from_split(corpus, split, &opts)?;
        let summaries = summarize_all(&art.file, &test_docs, budget)?;
        let rep = evaluate_summaries(&summaries, &test_docs, &test_labels, false, F1Averaging::Micro)?;
        runs.push(RepeatResult {
            repeat: r,
            seed: run_seed,
            rouge_1: rep.rouge.rouge_1,
            rouge_2: rep.rouge.rouge_2,
            rouge_l: rep.rouge.rouge_l,
            sentence_f1: rep.sentence_f1.unwrap_or(0.0),
        });
    }
    let n = runs.len() as f64;
    let avg = |f: fn(&RepeatResult) -> f64| runs.iter().map(f).sum::<f64>() / n;
    let mean = RepeatResult {
        repeat: repeats,
        seed: options.seed,
        rouge_1: avg(|r| r.rouge_1),
        rouge_2: avg(|r| r.rouge_2),
        rouge_l: avg(|r| r.rouge_l),
        sentence_f1: avg(|r| r.sentence_f1),
    };
    Ok(RepeatSummary {
        kind: options.kind,
        runs,
        mean,
    })
}
