//! File formats and table writers used by the subcommands.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};

use gamsum::corpus::{load_corpus, read_labels, RawDocument};
use gamsum::dataset::Dataset;
use gamsum::features::{extract_features, feature_names};
use gamsum::gam::{AdditiveModel, ShapeTable};
use gamsum::pipeline::{corpus_labels, preprocess_corpus, LabeledCorpus, RepeatSummary};
use gamsum::preprocess::Document;
use gamsum::summarizer::{Summary, SummaryBudget};

pub fn read_corpus(path: &Path) -> Result<Vec<RawDocument>> {
    load_corpus(path).with_context(|| format!("reading corpus `{}`", path.display()))
}

/// Preprocessed documents with labels from `labels` when given, otherwise
/// supplied or greedy oracle labels.
pub fn labeled_corpus(corpus: &Path, labels: Option<&Path>, budget: SummaryBudget) -> Result<LabeledCorpus> {
    let raw = read_corpus(corpus)?;
    let docs = preprocess_corpus(&raw)?;
    let labels = match labels {
        Some(path) => {
            let records = read_labels(path).with_context(|| format!("reading labels `{}`", path.display()))?;
            let mut by_id: HashMap<String, Vec<u8>> = HashMap::with_capacity(records.len());
            for r in records {
                if by_id.insert(r.id.clone(), r.labels).is_some() {
                    bail!("labels file repeats document `{}`", r.id);
                }
            }
            docs.iter()
                .map(|d| {
                    let l = by_id
                        .remove(&d.id)
                        .with_context(|| format!("labels file has no entry for document `{}`", d.id))?;
                    if l.len() != d.len() {
                        bail!("document `{}`: {} labels for {} sentences", d.id, l.len(), d.len());
                    }
                    Ok(l)
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => corpus_labels(&raw, &docs, budget)?,
    };
    Ok(LabeledCorpus::new(docs, labels)?)
}

/// Documents of `ids` in that order, or the whole corpus.
pub fn selected_documents(corpus: &Path, ids: Option<&[String]>) -> Result<Vec<Document>> {
    let docs = preprocess_corpus(&read_corpus(corpus)?)?;
    let Some(ids) = ids else { return Ok(docs) };
    let mut index: HashMap<&str, &Document> = docs.iter().map(|d| (d.id.as_str(), d)).collect();
    ids.iter()
        .map(|id| {
            index
                .remove(id.as_str())
                .cloned()
                .with_context(|| format!("split names unknown document `{id}`"))
        })
        .collect()
}

pub fn write_summaries(path: &Path, summaries: &[Summary]) -> Result<()> {
    let mut out = String::new();
    for s in summaries {
        out.push_str(&serde_json::to_string(s)?);
        out.push('\n');
    }
    std::fs::write(path, out).with_context(|| format!("writing `{}`", path.display()))
}

pub fn read_summaries(path: &Path) -> Result<Vec<Summary>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading summaries `{}`", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).with_context(|| format!("{}: bad summary record at line {}", path.display(), i + 1))
        })
        .collect()
}

pub fn document_stats(docs: &[Document]) -> String {
    let mut s = String::from("id\tsentences\tterms\treference_sentences\n");
    for d in docs {
        let terms: usize = d.sentences.iter().map(|x| x.term_count()).sum();
        let _ = writeln!(s, "{}\t{}\t{}\t{}", d.id, d.len(), terms, d.reference_sentences.len());
    }
    s
}

/// Sentence features of `docs` as an unlabeled dataset.
pub fn feature_dataset(docs: &[Document]) -> Result<Dataset> {
    let mut values = Vec::new();
    for d in docs {
        for f in extract_features(d) {
            values.extend_from_slice(f.as_slice());
        }
    }
    let rows = values.len() / feature_names().len();
    Ok(Dataset::new(feature_names(), values, vec![0; rows])?)
}

/// File-name-safe version of a term name.
pub fn file_stem(table: &ShapeTable) -> String {
    let name = match table {
        ShapeTable::Main { name, .. } => name.clone(),
        ShapeTable::Pair { name, .. } => name.replace(" x ", "__"),
    };
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect()
}

/// Exact additive decomposition of every sentence's logit.
pub fn contributions_tsv(model: &AdditiveModel, docs: &[Document]) -> String {
    let mut s = String::from("id\tsentence\tintercept");
    for t in model.terms() {
        let _ = write!(s, "\t{}", model.term_name(t));
    }
    s.push_str("\tlogit\tprobability\n");
    for d in docs {
        for (k, f) in extract_features(d).iter().enumerate() {
            let dec = model.decompose(f.as_slice());
            let _ = write!(s, "{}\t{k}\t{}", d.id, dec.intercept);
            for t in &dec.terms {
                let _ = write!(s, "\t{}", t.value);
            }
            let logit = dec.total();
            let _ = writeln!(s, "\t{logit}\t{}", model.predict_proba(f.as_slice()));
        }
    }
    s
}

pub fn repeats_tsv(summary: &RepeatSummary) -> String {
    let mut s = String::from("repeat\tseed\trouge_1\trouge_2\trouge_l\tsentence_f1\n");
    for r in &summary.runs {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.repeat, r.seed, r.rouge_1, r.rouge_2, r.rouge_l, r.sentence_f1
        );
    }
    let m = &summary.mean;
    let _ = writeln!(
        s,
        "mean\t{}\t{}\t{}\t{}\t{}",
        m.seed, m.rouge_1, m.rouge_2, m.rouge_l, m.sentence_f1
    );
    s
}
