use std::collections::BTreeMap;

use gamsum::corpus::{load_corpus, RawDocument};
use gamsum::preprocess::stemmer::stem;
use gamsum::preprocess::{annotate, preprocess_document, segment_sentences};

const VOCABULARY: &str = include_str!("data/snowball_english.tsv");
const DIVERGENCES: &str = include_str!("data/stemmer_divergences.tsv");

fn mini_corpus() -> Vec<RawDocument> {
    load_corpus(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/mini_corpus.jsonl")).unwrap()
}

fn pairs(text: &str) -> Vec<(&str, &str)> {
    text.lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_once('\t').expect("two columns"))
        .collect()
}

#[test]
fn stemmer_matches_reference_vocabulary() {
    let vocab = pairs(VOCABULARY);
    let mismatched: BTreeMap<&str, String> = vocab
        .iter()
        .filter_map(|&(w, s)| {
            let got = stem(w);
            (got != s).then_some((w, got))
        })
        .collect();
    let rate = 1.0 - mismatched.len() as f64 / vocab.len() as f64;
    assert!(rate >= 0.999, "conformance {rate:.5} over {} words", vocab.len());

    // every miss is listed, with the stem we produce
    let known: BTreeMap<&str, &str> = pairs(DIVERGENCES).into_iter().collect();
    let listed: BTreeMap<&str, &str> = mismatched.iter().map(|(w, s)| (*w, s.as_str())).collect();
    assert_eq!(listed, known);
}

#[test]
fn segmentation_examples() {
    assert_eq!(segment_sentences("It rained. We left."), vec!["It rained.", "We left."]);
    assert_eq!(
        segment_sentences("Dr. Smith went home. He slept."),
        vec!["Dr. Smith went home.", "He slept."]
    );
    assert_eq!(segment_sentences("no terminal punctuation here").len(), 1);
}

#[test]
fn annotation_flags_are_idempotent() {
    for doc in mini_corpus().iter().take(10) {
        for sent in segment_sentences(&doc.body) {
            let tokens = annotate(&sent, true);
            let first = tokens.iter().position(|t| !t.is_punctuation);
            for (k, tok) in tokens.iter().enumerate() {
                let again = &annotate(&tok.surface, false)[0];
                assert_eq!(again.stem, tok.stem);
                assert_eq!(again.is_stopword, tok.is_stopword);
                assert_eq!(again.is_numeric, tok.is_numeric);
                assert_eq!(again.is_punctuation, tok.is_punctuation);
                // context-free proper-noun flag differs only for the first word
                if Some(k) != first {
                    assert_eq!(again.is_proper_noun, tok.is_proper_noun, "{}", tok.surface);
                }
            }
        }
    }
}

#[test]
fn mini_corpus_document_term_counts() {
    let raw = mini_corpus();
    let doc = preprocess_document(raw.iter().find(|d| d.id == "news-001").unwrap()).unwrap();
    assert_eq!(doc.len(), 17);
    // counted by hand: words, numbers, `%`-numbers and `$` count; stand-alone
    // punctuation and quote marks do not
    let s0 = &doc.sentences[0];
    assert_eq!(s0.raw, "Ironwood Steel will cut 800 jobs as part of a restructuring plan announced on Monday.");
    assert_eq!(s0.term_count(), 15);
    // "The company said profits fell 31% in the last quarter."
    assert_eq!(doc.sentences[1].term_count(), 10);
    // "Revenue for the year reached $ 4.5 billion , below analyst forecasts ."
    assert_eq!(doc.sentences[6].term_count(), 11);
    // "\" This was a difficult decision for everyone involved , \" Aisha said ."
    assert_eq!(doc.sentences[14].term_count(), 10);
    let s1 = &doc.sentences[1];
    let numeric: Vec<&str> = s1.tokens.iter().filter(|t| t.is_numeric).map(|t| t.surface.as_str()).collect();
    assert_eq!(numeric, vec!["31%"]);
    let proper: Vec<&str> = s0.tokens.iter().filter(|t| t.is_proper_noun).map(|t| t.surface.as_str()).collect();
    assert_eq!(proper, vec!["Ironwood", "Steel", "Monday"]);
}

#[test]
fn every_mini_corpus_document_segments_cleanly() {
    for raw in mini_corpus() {
        let doc = preprocess_document(&raw).unwrap();
        for (i, s) in doc.sentences.iter().enumerate() {
            assert_eq!(s.index, i);
            assert!(!s.raw.trim().is_empty());
        }
    }
}
