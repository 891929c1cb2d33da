//! Raw text to ordered sentences of annotated tokens.
//!
//! Segmentation, tokenization, stopword flagging, proper-noun and numeric
//! tagging, and Snowball English stemming. All rules are deterministic and
//! backed by the bundled word lists under `data/`.

mod segment;
pub mod stemmer;
mod tokenize;

use std::collections::HashSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::corpus::RawDocument;
use crate::{Error, Result};

pub use segment::{abbreviations, segment_sentences};
pub use tokenize::{annotate, annotate_units, is_numeric, split_units, ProperNounContext, Token};

const STOPWORDS_FILE: &str = include_str!("../../data/stopwords.txt");

fn load_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

/// The bundled stopword list.
pub fn stopwords() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| load_list(STOPWORDS_FILE).into_iter().collect())
}

/// Case-sensitive lookup; callers pass a lowercase form.
pub fn is_stopword(lower: &str) -> bool {
    stopwords().contains(lower)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    /// 0-based position in the document.
    pub index: usize,
    pub raw: String,
    pub tokens: Vec<Token>,
    /// Indices into `tokens` of the non-punctuation, non-stopword tokens.
    pub content_terms: Vec<usize>,
}

impl Sentence {
    pub fn new(index: usize, raw: String, tokens: Vec<Token>) -> Self {
        let content_terms = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_content())
            .map(|(i, _)| i)
            .collect();
        Self {
            index,
            raw,
            tokens,
            content_terms,
        }
    }

    /// Stems of the content terms, in order.
    pub fn content_stems(&self) -> impl Iterator<Item = &str> + '_ {
        self.content_terms
            .iter()
            .map(move |&i| self.tokens[i].stem.as_str())
    }

    pub fn term_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_term()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub sentences: Vec<Sentence>,
    pub reference_sentences: Vec<Sentence>,
}

impl Document {
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Annotates a list of raw sentences as one unit of text: proper-noun
/// evidence is shared across them. Sentences without a single term are
/// dropped.
fn annotate_block(raw_sentences: Vec<String>) -> Vec<Sentence> {
    let units: Vec<Vec<String>> = raw_sentences.iter().map(|s| split_units(s)).collect();
    let context = ProperNounContext::from_sentences(units.iter().map(Vec::as_slice));
    raw_sentences
        .into_iter()
        .zip(&units)
        .map(|(raw, u)| (raw, annotate_units(u, true, &context)))
        .filter(|(_, tokens)| tokens.iter().any(Token::is_term))
        .enumerate()
        .map(|(index, (raw, tokens))| Sentence::new(index, raw, tokens))
        .collect()
}

/// Segments and annotates a raw document and its reference summary.
pub fn preprocess_document(raw: &RawDocument) -> Result<Document> {
    let sentences = annotate_block(segment_sentences(&raw.body));
    if sentences.is_empty() {
        return Err(Error::EmptyDocument { id: raw.id.clone() });
    }
    let reference_raw = raw
        .reference
        .iter()
        .flat_map(|r| segment_sentences(r))
        .collect();
    Ok(Document {
        id: raw.id.clone(),
        sentences,
        reference_sentences: annotate_block(reference_raw),
    })
}
