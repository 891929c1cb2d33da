//! Corpus-level ROUGE and sentence-selection F1.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rouge::{rouge_all, tokenize_sentences, RougeTriple};
use crate::summarizer::Summary;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum F1Averaging {
    /// Pool true/false positives over every sentence of the split.
    #[default]
    Micro,
    /// Mean of per-document F1.
    Macro,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentEval {
    pub id: String,
    pub rouge: RougeTriple,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RougeMeans {
    pub rouge_1: f64,
    pub rouge_2: f64,
    pub rouge_l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub documents: usize,
    pub rouge: RougeMeans,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sentence_f1: Option<f64>,
    pub per_document: Vec<DocumentEval>,
}

/// Mean per-document ROUGE F. Summaries and references are paired by id;
/// the report follows the order of `references`.
pub fn evaluate_rouge(
    summaries: &[Summary],
    references: &[(String, Vec<String>)],
    stem: bool,
) -> Result<EvalReport> {
    let mut by_id: BTreeMap<&str, &Summary> = BTreeMap::new();
    for s in summaries {
        if by_id.insert(s.id.as_str(), s).is_some() {
            return Err(Error::Pairing(format!("duplicate summary for `{}`", s.id)));
        }
    }
    if summaries.len() != references.len() {
        return Err(Error::Pairing(format!(
            "{} summaries for {} reference documents",
            summaries.len(),
            references.len()
        )));
    }
    let pairs: Vec<(&str, &Summary, &Vec<String>)> = references
        .iter()
        .map(|(id, r)| {
            by_id
                .get(id.as_str())
                .map(|s| (id.as_str(), *s, r))
                .ok_or_else(|| Error::Pairing(format!("no summary for document `{id}`")))
        })
        .collect::<Result<_>>()?;
    let per_document: Vec<DocumentEval> = pairs
        .par_iter()
        .map(|(id, s, r)| DocumentEval {
            id: id.to_string(),
            rouge: rouge_all(&tokenize_sentences(&s.sentences, stem), &tokenize_sentences(r, stem)),
        })
        .collect();
    let n = per_document.len().max(1) as f64;
    let mean = |f: fn(&RougeTriple) -> f64| per_document.iter().map(|d| f(&d.rouge)).sum::<f64>() / n;
    Ok(EvalReport {
        documents: per_document.len(),
        rouge: RougeMeans {
            rouge_1: mean(|t| t.rouge_1.f1),
            rouge_2: mean(|t| t.rouge_2.f1),
            rouge_l: mean(|t| t.rouge_l.f1),
        },
        sentence_f1: None,
        per_document,
    })
}

fn f1(tp: usize, fp: usize, fn_: usize) -> f64 {
    if tp == 0 {
        return 0.0;
    }
    let p = tp as f64 / (tp + fp) as f64;
    let r = tp as f64 / (tp + fn_) as f64;
    2.0 * p * r / (p + r)
}

/// Selection F1 against oracle labels, paired by document position.
pub fn sentence_f1(selected: &[Vec<usize>], labels: &[Vec<u8>], averaging: F1Averaging) -> Result<f64> {
    if selected.len() != labels.len() {
        return Err(Error::Pairing(format!(
            "{} selections for {} label lists",
            selected.len(),
            labels.len()
        )));
    }
    let counts: Vec<(usize, usize, usize)> = selected
        .iter()
        .zip(labels)
        .map(|(sel, lab)| {
            let tp = sel.iter().filter(|&&i| lab.get(i) == Some(&1)).count();
            let positives = lab.iter().filter(|&&l| l == 1).count();
            (tp, sel.len() - tp, positives - tp)
        })
        .collect();
    let (tp, fp, fn_) = counts
        .iter()
        .fold((0, 0, 0), |a, c| (a.0 + c.0, a.1 + c.1, a.2 + c.2));
    if tp + fp == 0 && tp + fn_ == 0 {
        log::info!("no sentences selected and no positive labels; sentence F1 is 0");
    }
    Ok(match averaging {
        F1Averaging::Micro => f1(tp, fp, fn_),
        F1Averaging::Macro => {
            counts.iter().map(|&(a, b, c)| f1(a, b, c)).sum::<f64>() / counts.len().max(1) as f64
        }
    })
}

pub fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

impl EvalReport {
    pub fn table(&self, label: &str) -> String {
        let mut s = format!(
            "{:<12} {:>9} {:>9} {:>9} {:>9}\n",
            "system", "ROUGE-1", "ROUGE-2", "ROUGE-L", "F1"
        );
        s.push_str(&format!(
            "{:<12} {:>9} {:>9} {:>9} {:>9}\n",
            label,
            pct(self.rouge.rouge_1),
            pct(self.rouge.rouge_2),
            pct(self.rouge.rouge_l),
            self.sentence_f1.map_or("-".to_string(), pct)
        ));
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(id: &str, text: &[&str]) -> Summary {
        Summary {
            id: id.into(),
            indices: (0..text.len()).collect(),
            sentences: text.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn refs(items: &[(&str, &[&str])]) -> Vec<(String, Vec<String>)> {
        items
            .iter()
            .map(|(id, r)| (id.to_string(), r.iter().map(|s| s.to_string()).collect()))
            .collect()
    }

    #[test]
    fn identity_and_half() {
        let r = refs(&[("a", &["the cat sat on the mat"]), ("b", &["dogs bark"])]);
        let s = vec![summary("b", &["dogs bark"]), summary("a", &["the cat sat on the mat"])];
        let rep = evaluate_rouge(&s, &r, false).unwrap();
        assert_eq!((rep.rouge.rouge_1, rep.rouge.rouge_2, rep.rouge.rouge_l), (1.0, 1.0, 1.0));
        let s = vec![summary("a", &["the cat sat on the mat"]), summary("b", &["birds sing"])];
        let rep = evaluate_rouge(&s, &r, false).unwrap();
        assert_eq!((rep.rouge.rouge_1, rep.rouge.rouge_2, rep.rouge.rouge_l), (0.5, 0.5, 0.5));
        assert_eq!(rep.per_document[0].id, "a");
    }

    #[test]
    fn pairing_errors() {
        let r = refs(&[("a", &["x"])]);
        assert!(matches!(evaluate_rouge(&[summary("b", &["x"])], &r, false), Err(Error::Pairing(_))));
        assert!(evaluate_rouge(&[], &r, false).is_err());
    }

    #[test]
    fn f1_hand_counts() {
        let sel = vec![vec![0, 1], vec![2]];
        let lab = vec![vec![1, 0, 1], vec![0, 0, 1, 1]];
        // tp 2, fp 1, fn 2 → P 2/3, R 1/2
        let micro = sentence_f1(&sel, &lab, F1Averaging::Micro).unwrap();
        assert!((micro - 4.0 / 7.0).abs() < 1e-12);
        let macro_ = sentence_f1(&sel, &lab, F1Averaging::Macro).unwrap();
        assert!((macro_ - (0.5 + 2.0 / 3.0) / 2.0).abs() < 1e-12);
        assert_eq!(sentence_f1(&[vec![0, 2]], &[vec![1, 0, 1]], F1Averaging::Micro).unwrap(), 1.0);
        assert_eq!(sentence_f1(&[vec![1]], &[vec![1, 0, 1]], F1Averaging::Micro).unwrap(), 0.0);
        assert_eq!(sentence_f1(&[vec![]], &[vec![0, 0]], F1Averaging::Micro).unwrap(), 0.0);
    }

    #[test]
    fn report_formatting() {
        let r = refs(&[("a", &["x y"])]);
        let mut rep = evaluate_rouge(&[summary("a", &["x z"])], &r, false).unwrap();
        rep.sentence_f1 = Some(0.3333);
        let t = rep.table("lead");
        assert!(t.contains("50.00") && t.contains("33.33"), "{t}");
    }
}
