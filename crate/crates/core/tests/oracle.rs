mod common;

use gamsum::corpus::RawDocument;
use gamsum::eval::evaluate_rouge;
use gamsum::oracle::{greedy_oracle_labels, oracle_objective, undersample, TrainingSet};
use gamsum::pipeline::preprocess_corpus;
use gamsum::preprocess::{preprocess_document, Document};
use gamsum::rouge::tokenize;
use gamsum::summarizer::{lead_baseline, oracle_baseline, Summary, SummaryBudget};
use proptest::prelude::*;

fn doc(body: &str, reference: &[&str]) -> Document {
    preprocess_document(&RawDocument {
        id: "toy".into(),
        body: body.into(),
        reference: reference.iter().map(|s| s.to_string()).collect(),
        labels: None,
    })
    .unwrap()
}

fn objective_of(doc: &Document, chosen: &[usize]) -> f64 {
    let reference: Vec<Vec<String>> = doc
        .reference_sentences
        .iter()
        .map(|s| tokenize(&s.raw, false))
        .filter(|t| !t.is_empty())
        .collect();
    let cand: Vec<Vec<String>> = chosen.iter().map(|&i| tokenize(&doc.sentences[i].raw, false)).collect();
    oracle_objective(&cand, &reference)
}

/// Best objective over every subset of at most `k` sentences.
fn exhaustive(doc: &Document, k: usize) -> f64 {
    let n = doc.len();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize <= k)
        .map(|m| objective_of(doc, &(0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
        .fold(0.0, f64::max)
}

fn toy_documents() -> Vec<Document> {
    vec![
        doc("The mayor opened a bridge. Rain fell all day. Traffic was light.", &["The mayor opened a new bridge."]),
        doc(
            "Stocks fell sharply on Monday. Oil prices rose to a record. Analysts were surprised. \
             The central bank kept rates steady.",
            &["Stocks fell as oil prices hit a record.", "Rates were kept steady."],
        ),
        doc(
            "A storm hit the coast. Thousands lost power overnight. Schools closed on Friday. \
             Crews worked to restore power. The storm moved east.",
            &["Storm leaves thousands without power.", "Schools closed Friday."],
        ),
        doc(
            "The team won the final. The coach praised the defense. Fans filled the streets. \
             The captain scored twice. Tickets sold out in hours. The season ends next week.",
            &["The team won the final as the captain scored twice."],
        ),
        doc(
            "Researchers studied sleep. The study followed adults for ten years. \
             Better sleep lowered the risk of heart disease. The authors urged caution.",
            &["Better sleep lowered heart disease risk, a ten year study of adults found."],
        ),
        doc(
            "Nothing related here. Completely different words. Still unrelated text.",
            &["Zebra giraffe elephant."],
        ),
    ]
}

#[test]
fn greedy_equals_exhaustive_on_toy_documents() {
    for d in toy_documents() {
        assert!(d.len() <= 6);
        for k in 1..=2 {
            let labels = greedy_oracle_labels(&d, SummaryBudget::Sentences(k)).unwrap();
            let chosen: Vec<usize> = (0..d.len()).filter(|&i| labels[i] == 1).collect();
            let greedy = objective_of(&d, &chosen);
            let best = exhaustive(&d, k);
            assert!((greedy - best).abs() < 1e-12, "{:?} k={k}: greedy {greedy} vs best {best}", d.sentences[0].raw);
        }
    }
}

#[test]
fn greedy_stops_without_gain() {
    let d = &toy_documents()[5];
    let labels = greedy_oracle_labels(d, SummaryBudget::Sentences(3)).unwrap();
    assert!(labels.iter().all(|&l| l == 0));
}

#[test]
fn word_budget_is_respected() {
    for d in toy_documents() {
        let labels = greedy_oracle_labels(&d, SummaryBudget::Words(8)).unwrap();
        let used: usize = (0..d.len()).filter(|&i| labels[i] == 1).map(|i| d.sentences[i].term_count()).sum();
        assert!(used <= 8);
    }
}

#[test]
fn oracle_beats_lead_on_most_mini_corpus_documents() {
    let raw = common::mini_corpus();
    let docs = preprocess_corpus(&raw).unwrap();
    let budget = SummaryBudget::Sentences(3);
    let refs: Vec<(String, Vec<String>)> = raw.iter().map(|r| (r.id.clone(), r.reference.clone())).collect();
    let oracle: Vec<Summary> = docs
        .iter()
        .map(|d| oracle_baseline(d, &greedy_oracle_labels(d, budget).unwrap(), budget).unwrap())
        .collect();
    let lead: Vec<Summary> = docs.iter().map(|d| lead_baseline(d, budget)).collect();
    let o = evaluate_rouge(&oracle, &refs, false).unwrap();
    let l = evaluate_rouge(&lead, &refs, false).unwrap();
    let wins = o
        .per_document
        .iter()
        .zip(&l.per_document)
        .filter(|(a, b)| a.rouge.rouge_1.f1 >= b.rouge.rouge_1.f1)
        .count();
    assert!(wins * 10 >= docs.len() * 9, "oracle >= lead on {wins} of {}", docs.len());
}

fn training_set(labels: Vec<u8>) -> TrainingSet {
    let n = labels.len();
    let body: Vec<String> = (0..n).map(|i| format!("Sentence number {i} is here.")).collect();
    let d = doc(&body.join(" "), &["Reference."]);
    TrainingSet::build(&[d], &[labels]).unwrap()
}

proptest! {
    #[test]
    fn undersampling_balances_and_keeps_minority(
        labels in prop::collection::vec(0u8..2, 2..40),
        seed in any::<u64>(),
    ) {
        let set = training_set(labels);
        let (neg, pos) = set.class_counts();
        prop_assume!(neg > 0 && pos > 0);
        let out = undersample(&set, seed).unwrap();
        let (n2, p2) = out.class_counts();
        prop_assert_eq!(n2, neg.min(pos));
        prop_assert_eq!(p2, neg.min(pos));
        let minority = u8::from(pos <= neg);
        let kept: Vec<usize> = out.sentences.iter().filter(|s| s.label == minority).map(|s| s.sentence_index).collect();
        let all: Vec<usize> = set.sentences.iter().filter(|s| s.label == minority).map(|s| s.sentence_index).collect();
        prop_assert_eq!(kept, all);
        prop_assert_eq!(undersample(&set, seed).unwrap(), out);
    }
}
