//! ROUGE-1, ROUGE-2 and summary-level ROUGE-L.
//!
//! Inputs are token lists per sentence. [`tokenize`] gives the default
//! tokenization: lowercase, split on non-alphanumerics, optionally stemmed.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::preprocess::stemmer;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    pub fn from_counts(overlap: usize, candidate_total: usize, reference_total: usize) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(overlap, candidate_total);
        let recall = ratio(overlap, reference_total);
        let f1 = if precision == 0.0 || recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Self {
            precision,
            recall,
            f1,
        }
    }
}

/// Lowercases and splits on every non-alphanumeric character.
pub fn tokenize(text: &str, stem: bool) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let lower = t.to_lowercase();
            if stem {
                stemmer::stem(&lower)
            } else {
                lower
            }
        })
        .collect()
}

pub fn tokenize_sentences<S: AsRef<str>>(sentences: &[S], stem: bool) -> Vec<Vec<String>> {
    sentences
        .iter()
        .map(|s| tokenize(s.as_ref(), stem))
        .collect()
}

fn ngram_counts<T: AsRef<str>>(sentences: &[Vec<T>], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    for s in sentences {
        if s.len() < n {
            continue;
        }
        for w in s.windows(n) {
            let key: Vec<&str> = w.iter().map(AsRef::as_ref).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    counts
}

/// Clipped n-gram overlap pooled over all sentences. N-grams never cross
/// sentence boundaries.
pub fn rouge_n<T: AsRef<str>>(candidate: &[Vec<T>], reference: &[Vec<T>], n: usize) -> RougeScore {
    assert!(n >= 1, "ROUGE-N needs n >= 1");
    let cand = ngram_counts(candidate, n);
    let refs = ngram_counts(reference, n);
    let overlap: usize = refs
        .iter()
        .map(|(g, &rc)| cand.get(g).map_or(0, |&cc| cc.min(rc)))
        .sum();
    RougeScore::from_counts(
        overlap,
        cand.values().sum(),
        refs.values().sum(),
    )
}

fn lcs_table<T: PartialEq>(a: &[T], b: &[T]) -> Vec<Vec<u32>> {
    let mut t = vec![vec![0u32; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            t[i][j] = if a[i - 1] == b[j - 1] {
                t[i - 1][j - 1] + 1
            } else {
                t[i - 1][j].max(t[i][j - 1])
            };
        }
    }
    t
}

pub fn lcs_length<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.len() < b.len() {
        return lcs_length(b, a);
    }
    // two-row variant of the full table
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Positions of `reference` covered by one LCS with `candidate`.
fn lcs_hits<T: PartialEq>(reference: &[T], candidate: &[T]) -> Vec<usize> {
    let t = lcs_table(reference, candidate);
    let (mut i, mut j) = (reference.len(), candidate.len());
    let mut hits = Vec::new();
    while i > 0 && j > 0 {
        if reference[i - 1] == candidate[j - 1] {
            hits.push(i - 1);
            i -= 1;
            j -= 1;
        } else if t[i - 1][j] >= t[i][j - 1] {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    hits
}

fn token_counts<T: AsRef<str>>(sentences: &[Vec<T>]) -> HashMap<&str, usize> {
    let mut counts = HashMap::new();
    for s in sentences {
        for t in s {
            *counts.entry(t.as_ref()).or_insert(0) += 1;
        }
    }
    counts
}

fn decrement<K: Eq + Hash>(counts: &mut HashMap<K, usize>, key: K) -> bool {
    match counts.get_mut(&key) {
        Some(c) if *c > 0 => {
            *c -= 1;
            true
        }
        _ => false,
    }
}

/// Summary-level ROUGE-L with union LCS.
///
/// For each reference sentence the LCS hits against every candidate
/// sentence are unioned; a hit is counted only while the token still has
/// unused occurrences on both sides, which keeps precision within `[0, 1]`.
pub fn rouge_l<T: AsRef<str>>(candidate: &[Vec<T>], reference: &[Vec<T>]) -> RougeScore {
    let cand_total: usize = candidate.iter().map(Vec::len).sum();
    let ref_total: usize = reference.iter().map(Vec::len).sum();
    let mut cand_left = token_counts(candidate);
    let mut ref_left = token_counts(reference);
    let mut hits = 0usize;
    for r in reference {
        let r: Vec<&str> = r.iter().map(AsRef::as_ref).collect();
        let mut union = vec![false; r.len()];
        for c in candidate {
            let c: Vec<&str> = c.iter().map(AsRef::as_ref).collect();
            for pos in lcs_hits(&r, &c) {
                union[pos] = true;
            }
        }
        for (pos, _) in union.iter().enumerate().filter(|(_, &u)| u) {
            let token = r[pos];
            if cand_left.get(token).is_some_and(|&c| c > 0)
                && ref_left.get(token).is_some_and(|&c| c > 0)
            {
                decrement(&mut cand_left, token);
                decrement(&mut ref_left, token);
                hits += 1;
            }
        }
    }
    RougeScore::from_counts(hits, cand_total, ref_total)
}

/// ROUGE-1, ROUGE-2 and ROUGE-L together.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RougeTriple {
    pub rouge_1: RougeScore,
    pub rouge_2: RougeScore,
    pub rouge_l: RougeScore,
}

pub fn rouge_all<T: AsRef<str>>(candidate: &[Vec<T>], reference: &[Vec<T>]) -> RougeTriple {
    RougeTriple {
        rouge_1: rouge_n(candidate, reference, 1),
        rouge_2: rouge_n(candidate, reference, 2),
        rouge_l: rouge_l(candidate, reference),
    }
}
