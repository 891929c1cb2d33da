//! The six per-sentence features.
//!
//! | column | name           | value                                                        |
//! |--------|----------------|--------------------------------------------------------------|
//! | x1     | `tf_isf`       | bigram TF-ISF weight over content stems, max-normalized      |
//! | x2     | `position`     | 1-based position divided by sentence count                   |
//! | x3     | `length`       | term count divided by the document's largest term count      |
//! | x4     | `proper_noun`  | proper-noun terms per term                                   |
//! | x5     | `numeric`      | numeric terms per term                                       |
//! | x6     | `similarity`   | summed cosine to the other sentences, max-normalized         |
//!
//! Terms are non-punctuation tokens. TF-ISF and cosine similarity work on
//! content-term stems (stopwords removed). Degenerate documents (a single
//! sentence, all weights zero) get 0 for the affected feature.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::preprocess::{Document, Sentence};

pub const FEATURE_COUNT: usize = 6;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "tf_isf",
    "position",
    "length",
    "proper_noun",
    "numeric",
    "similarity",
];

pub fn feature_names() -> Vec<String> {
    FEATURE_NAMES.iter().map(|s| s.to_string()).collect()
}

/// Six values in `[0, 1]`, ordered as [`FEATURE_NAMES`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector(pub [f64; FEATURE_COUNT]);

impl FeatureVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

type Bigram<'a> = (&'a str, &'a str);

fn bigrams(sentence: &Sentence) -> Vec<Bigram<'_>> {
    let stems: Vec<&str> = sentence.content_stems().collect();
    stems.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Document-level statistics shared by the feature computations.
#[derive(Debug, Clone)]
pub struct DocumentFeatureContext {
    pub sentence_count: usize,
    /// Number of sentences containing each bigram.
    pub bigram_sentence_freq: BTreeMap<(String, String), usize>,
    /// Occurrences of each bigram in the whole document.
    pub bigram_total_freq: BTreeMap<(String, String), usize>,
    pub raw_tf_isf: Vec<f64>,
    pub max_tf_isf: f64,
    pub term_counts: Vec<usize>,
    pub max_term_count: usize,
    /// Symmetric cosine matrix over content-stem count vectors.
    pub cosine: Vec<Vec<f64>>,
}

impl DocumentFeatureContext {
    pub fn build(doc: &Document) -> Self {
        let n = doc.sentences.len();
        let per_sentence: Vec<Vec<Bigram>> = doc.sentences.iter().map(bigrams).collect();
        let mut sentence_freq: HashMap<Bigram, usize> = HashMap::new();
        let mut total_freq: HashMap<Bigram, usize> = HashMap::new();
        for bgs in &per_sentence {
            let mut distinct: Vec<&Bigram> = bgs.iter().collect();
            distinct.sort_unstable();
            distinct.dedup();
            for b in distinct {
                *sentence_freq.entry(*b).or_default() += 1;
            }
            for b in bgs {
                *total_freq.entry(*b).or_default() += 1;
            }
        }
        let raw_tf_isf: Vec<f64> = per_sentence
            .iter()
            .map(|bgs| {
                bgs.iter()
                    .map(|b| {
                        let freq = total_freq[b] as f64;
                        let df = sentence_freq[b] as f64;
                        freq * (n as f64 / df).ln()
                    })
                    .sum()
            })
            .collect();
        let max_tf_isf = raw_tf_isf.iter().copied().fold(0.0, f64::max);
        let term_counts: Vec<usize> = doc.sentences.iter().map(Sentence::term_count).collect();
        let max_term_count = term_counts.iter().copied().max().unwrap_or(0);
        let cosine = cosine_matrix(&doc.sentences);
        let own = |m: HashMap<Bigram, usize>| {
            m.into_iter()
                .map(|((a, b), c)| ((a.to_string(), b.to_string()), c))
                .collect()
        };
        Self {
            sentence_count: n,
            bigram_sentence_freq: own(sentence_freq),
            bigram_total_freq: own(total_freq),
            raw_tf_isf,
            max_tf_isf,
            term_counts,
            max_term_count,
            cosine,
        }
    }
}

fn stem_counts(sentence: &Sentence) -> BTreeMap<&str, f64> {
    let mut counts = BTreeMap::new();
    for s in sentence.content_stems() {
        *counts.entry(s).or_insert(0.0) += 1.0;
    }
    counts
}

/// Cosine similarity of two sparse count vectors; 0 when either is empty.
fn cosine(a: &BTreeMap<&str, f64>, b: &BTreeMap<&str, f64>) -> f64 {
    let norm = |m: &BTreeMap<&str, f64>| m.values().map(|v| v * v).sum::<f64>().sqrt();
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let dot: f64 = small
        .iter()
        .filter_map(|(k, v)| large.get(k).map(|w| v * w))
        .sum();
    (dot / (na * nb)).clamp(0.0, 1.0)
}

fn cosine_matrix(sentences: &[Sentence]) -> Vec<Vec<f64>> {
    let vectors: Vec<BTreeMap<&str, f64>> = sentences.iter().map(stem_counts).collect();
    let n = vectors.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = if vectors[i].is_empty() { 0.0 } else { 1.0 };
        for j in i + 1..n {
            let c = cosine(&vectors[i], &vectors[j]);
            m[i][j] = c;
            m[j][i] = c;
        }
    }
    m
}

fn normalize_by_max(values: &[f64]) -> Vec<f64> {
    let max = values.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        values.iter().map(|v| v / max).collect()
    } else {
        vec![0.0; values.len()]
    }
}

pub fn tf_isf(doc: &Document) -> Vec<f64> {
    tf_isf_with(&DocumentFeatureContext::build(doc))
}

fn tf_isf_with(ctx: &DocumentFeatureContext) -> Vec<f64> {
    normalize_by_max(&ctx.raw_tf_isf)
}

pub fn position(doc: &Document) -> Vec<f64> {
    let n = doc.sentences.len() as f64;
    (1..=doc.sentences.len()).map(|p| p as f64 / n).collect()
}

pub fn length(doc: &Document) -> Vec<f64> {
    let counts: Vec<f64> = doc
        .sentences
        .iter()
        .map(|s| s.term_count() as f64)
        .collect();
    normalize_by_max(&counts)
}

fn flag_ratio(doc: &Document, flag: impl Fn(&crate::preprocess::Token) -> bool) -> Vec<f64> {
    doc.sentences
        .iter()
        .map(|s| {
            let terms = s.term_count();
            if terms == 0 {
                return 0.0;
            }
            let hits = s.tokens.iter().filter(|t| t.is_term() && flag(t)).count();
            hits as f64 / terms as f64
        })
        .collect()
}

pub fn proper_noun_ratio(doc: &Document) -> Vec<f64> {
    flag_ratio(doc, |t| t.is_proper_noun)
}

pub fn numeric_ratio(doc: &Document) -> Vec<f64> {
    flag_ratio(doc, |t| t.is_numeric)
}

pub fn sentence_similarity(doc: &Document) -> Vec<f64> {
    similarity_with(&DocumentFeatureContext::build(doc))
}

fn similarity_with(ctx: &DocumentFeatureContext) -> Vec<f64> {
    let n = ctx.sentence_count;
    let sums: Vec<f64> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| ctx.cosine[i][j]).sum())
        .collect();
    normalize_by_max(&sums)
}

/// Row `i` holds the features of sentence `i`.
pub fn extract_features(doc: &Document) -> Vec<FeatureVector> {
    let ctx = DocumentFeatureContext::build(doc);
    let x1 = tf_isf_with(&ctx);
    let x2 = position(doc);
    let n = ctx.sentence_count;
    let x3: Vec<f64> = if ctx.max_term_count == 0 {
        vec![0.0; n]
    } else {
        ctx.term_counts
            .iter()
            .map(|&c| c as f64 / ctx.max_term_count as f64)
            .collect()
    };
    let x4 = proper_noun_ratio(doc);
    let x5 = numeric_ratio(doc);
    let x6 = similarity_with(&ctx);
    (0..n)
        .map(|i| FeatureVector([x1[i], x2[i], x3[i], x4[i], x5[i], x6[i]]))
        .collect()
}

/// Features for many documents, in input order.
pub fn extract_all(docs: &[Document]) -> Vec<Vec<FeatureVector>> {
    docs.par_iter().map(extract_features).collect()
}

/// Tab-separated dump: `doc_id, sentence_index, x1..x6, label`. The label
/// column is empty when no labels are given.
pub fn feature_dump(
    docs: &[Document],
    features: &[Vec<FeatureVector>],
    labels: Option<&[Vec<u8>]>,
) -> String {
    let mut out = String::from("doc_id\tsentence_index");
    for name in FEATURE_NAMES {
        out.push('\t');
        out.push_str(name);
    }
    out.push_str("\tlabel\n");
    for (d, (doc, rows)) in docs.iter().zip(features).enumerate() {
        for (i, row) in rows.iter().enumerate() {
            let _ = write!(out, "{}\t{}", doc.id, i);
            for v in row.0 {
                let _ = write!(out, "\t{v}");
            }
            match labels.and_then(|l| l.get(d)).and_then(|l| l.get(i)) {
                Some(l) => {
                    let _ = writeln!(out, "\t{l}");
                }
                None => out.push_str("\t\n"),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::Token;

    fn token(stem: &str) -> Token {
        Token {
            surface: stem.into(),
            stem: stem.into(),
            is_stopword: false,
            is_proper_noun: false,
            is_numeric: false,
            is_punctuation: false,
        }
    }

    fn doc_from_stems(sentences: &[&[&str]]) -> Document {
        Document {
            id: "t".into(),
            sentences: sentences
                .iter()
                .enumerate()
                .map(|(i, stems)| {
                    Sentence::new(i, stems.join(" "), stems.iter().map(|s| token(s)).collect())
                })
                .collect(),
            reference_sentences: vec![],
        }
    }

    #[test]
    fn tf_isf_hand_example() {
        let doc = doc_from_stems(&[&["cat", "sat", "mat"], &["cat", "sat"]]);
        let ctx = DocumentFeatureContext::build(&doc);
        assert!((ctx.raw_tf_isf[0] - 2f64.ln()).abs() < 1e-15);
        assert_eq!(ctx.raw_tf_isf[1], 0.0);
        assert_eq!(tf_isf(&doc), vec![1.0, 0.0]);
    }

    #[test]
    fn tf_isf_identical_sentences_all_zero() {
        let doc = doc_from_stems(&[&["a1", "b1", "c1"], &["a1", "b1", "c1"], &["a1", "b1", "c1"]]);
        assert_eq!(tf_isf(&doc), vec![0.0; 3]);
    }

    #[test]
    fn tf_isf_short_sentence_is_zero() {
        let doc = doc_from_stems(&[&["solo"], &["one", "two", "three"]]);
        assert_eq!(DocumentFeatureContext::build(&doc).raw_tf_isf[0], 0.0);
    }

    #[test]
    fn position_values() {
        let doc = doc_from_stems(&[&["a"], &["b"], &["c"], &["d"]]);
        assert_eq!(position(&doc), vec![0.25, 0.5, 0.75, 1.0]);
        assert_eq!(position(&doc_from_stems(&[&["a"]])), vec![1.0]);
        let ten: Vec<&[&str]> = vec![&["w"]; 10];
        assert_eq!(position(&doc_from_stems(&ten))[0], 0.1);
    }

    #[test]
    fn length_values() {
        let five = ["w"; 5];
        let ten = ["w"; 10];
        let doc = doc_from_stems(&[&five, &ten]);
        assert_eq!(length(&doc), vec![0.5, 1.0]);
        let doc = doc_from_stems(&[&five, &five]);
        assert_eq!(length(&doc), vec![1.0, 1.0]);
        let doc = doc_from_stems(&[&[], &five]);
        assert_eq!(length(&doc), vec![0.0, 1.0]);
    }

    #[test]
    fn ratios_on_annotated_text() {
        let raw = crate::corpus::RawDocument {
            id: "r".into(),
            body: "Yesterday Paris beat Lyon today. It rose 5 %. Nothing here.".into(),
            reference: vec![],
            labels: None,
        };
        let doc = crate::preprocess::preprocess_document(&raw).unwrap();
        let pn = proper_noun_ratio(&doc);
        let num = numeric_ratio(&doc);
        // "Yesterday Paris beat Lyon today": Paris and Lyon of 5 terms
        assert_eq!(pn[0], 0.4);
        assert_eq!(num[1], 0.25);
        assert_eq!((pn[2], num[2]), (0.0, 0.0));
    }

    #[test]
    fn proper_noun_ratio_half() {
        let tokens: Vec<Token> = crate::preprocess::annotate("Paris beat Lyon today", false);
        let doc = Document {
            id: "p".into(),
            sentences: vec![Sentence::new(0, "Paris beat Lyon today".into(), tokens)],
            reference_sentences: vec![],
        };
        assert_eq!(proper_noun_ratio(&doc), vec![0.5]);
    }

    #[test]
    fn similarity_identical_and_disjoint() {
        let doc = doc_from_stems(&[&["x", "y"], &["x", "y"], &["z"]]);
        assert_eq!(sentence_similarity(&doc), vec![1.0, 1.0, 0.0]);
        assert_eq!(sentence_similarity(&doc_from_stems(&[&["x"]])), vec![0.0]);
    }

    #[test]
    fn cosine_matrix_symmetric_unit_diagonal() {
        let doc = doc_from_stems(&[&["a", "b", "a"], &["b", "c"], &["c", "a", "d"]]);
        let ctx = DocumentFeatureContext::build(&doc);
        for i in 0..3 {
            assert_eq!(ctx.cosine[i][i], 1.0);
            for j in 0..3 {
                assert!((ctx.cosine[i][j] - ctx.cosine[j][i]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn dump_has_one_row_per_sentence() {
        let doc = doc_from_stems(&[&["a", "b"], &["b", "c"]]);
        let feats = vec![extract_features(&doc)];
        let text = feature_dump(&[doc], &feats, Some(&[vec![1, 0]]));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("t\t0\t"));
        assert!(lines[1].ends_with("\t1"));
    }
}
