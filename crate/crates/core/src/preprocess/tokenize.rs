//! Tokenization and rule-based token annotation.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{is_stopword, stemmer};

/// One whitespace- or punctuation-delimited unit of a sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub stem: String,
    pub is_stopword: bool,
    pub is_proper_noun: bool,
    pub is_numeric: bool,
    pub is_punctuation: bool,
}

impl Token {
    /// Terms are every non-punctuation token, stopwords included.
    pub fn is_term(&self) -> bool {
        !self.is_punctuation
    }

    /// Content terms additionally exclude stopwords.
    pub fn is_content(&self) -> bool {
        !self.is_punctuation && !self.is_stopword
    }
}

const SYMBOLS: &[char] = &[
    '%', '$', '€', '£', '¥', '&', '#', '@', '+', '=', '*', '<', '>', '^', '~', '|',
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    Word,
    Symbol,
    Punct,
    Space,
}

fn class(c: char) -> Class {
    if c.is_whitespace() {
        Class::Space
    } else if c.is_alphanumeric() {
        Class::Word
    } else if SYMBOLS.contains(&c) {
        Class::Symbol
    } else {
        Class::Punct
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '’'
}

/// Splits a sentence into surface units.
///
/// Words are maximal alphanumeric runs, joined across internal apostrophes
/// and hyphens, and across `.`/`,` between digits. A sign directly before a
/// digit and a `%` directly after one stay with the number. Consecutive
/// punctuation characters form one unit; every other symbol stands alone.
pub fn split_units(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let c = chars[i];
        match class(c) {
            Class::Space => i += 1,
            Class::Word => {
                let start = i;
                i = scan_word(&chars, i);
                out.push(chars[start..i].iter().collect());
            }
            Class::Symbol | Class::Punct => {
                let signed_number = matches!(c, '-' | '+')
                    && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())
                    && (i == 0 || class(chars[i - 1]) != Class::Word);
                if signed_number {
                    let start = i;
                    i = scan_word(&chars, i + 1);
                    out.push(chars[start..i].iter().collect());
                } else if class(c) == Class::Symbol {
                    out.push(c.to_string());
                    i += 1;
                } else {
                    let start = i;
                    while i < n && class(chars[i]) == Class::Punct {
                        i += 1;
                    }
                    out.push(chars[start..i].iter().collect());
                }
            }
        }
    }
    out
}

fn scan_word(chars: &[char], mut i: usize) -> usize {
    let n = chars.len();
    while i < n {
        let c = chars[i];
        if class(c) == Class::Word {
            i += 1;
            continue;
        }
        let prev = chars[i - 1];
        let next = chars.get(i + 1).copied();
        let joins = match c {
            '\'' | '’' | '-' => prev.is_alphanumeric() && next.is_some_and(char::is_alphanumeric),
            '.' | ',' => prev.is_ascii_digit() && next.is_some_and(|d| d.is_ascii_digit()),
            '%' => prev.is_ascii_digit(),
            _ => false,
        };
        if !joins {
            break;
        }
        i += if c == '%' { 1 } else { 2 };
        if c == '%' {
            break;
        }
    }
    i
}

/// Optional sign, digits with optional thousands grouping, optional decimal
/// part, optional `%` suffix.
pub fn is_numeric(surface: &str) -> bool {
    let s = surface.strip_prefix(['+', '-']).unwrap_or(surface);
    let s = s.strip_suffix('%').unwrap_or(s);
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (s, None),
    };
    if let Some(f) = frac {
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return false;
        }
    }
    if int.is_empty() {
        return false;
    }
    if int.contains(',') {
        let mut groups = int.split(',');
        let head = groups.next().unwrap_or_default();
        (1..=3).contains(&head.len())
            && head.bytes().all(|b| b.is_ascii_digit())
            && groups.all(|g| g.len() == 3 && g.bytes().all(|b| b.is_ascii_digit()))
    } else {
        int.bytes().all(|b| b.is_ascii_digit())
    }
}

fn is_punctuation(surface: &str) -> bool {
    surface.chars().all(|c| class(c) == Class::Punct)
}

fn is_alphabetic_word(surface: &str) -> bool {
    surface.chars().any(char::is_alphabetic)
        && surface
            .chars()
            .all(|c| c.is_alphabetic() || is_apostrophe(c) || c == '-')
}

fn is_capitalized(surface: &str) -> bool {
    surface.chars().next().is_some_and(char::is_uppercase)
}

/// Lowercase form with typographic apostrophes normalized.
pub fn normalize(surface: &str) -> String {
    surface.to_lowercase().replace('’', "'")
}

/// Candidate proper nouns: capitalized alphabetic non-stopwords.
fn proper_candidate(surface: &str) -> bool {
    is_capitalized(surface) && is_alphabetic_word(surface) && !is_stopword(&normalize(surface))
}

/// Lowercased surfaces that occur capitalized at a non-initial position of
/// some sentence. A sentence-initial candidate is a proper noun only if it is
/// in this set.
#[derive(Debug, Clone, Default)]
pub struct ProperNounContext {
    seen_non_initial: HashSet<String>,
}

impl ProperNounContext {
    pub fn from_sentences<'a>(sentences: impl IntoIterator<Item = &'a [String]>) -> Self {
        let mut seen_non_initial = HashSet::new();
        for units in sentences {
            let initial = initial_index(units);
            for (k, u) in units.iter().enumerate() {
                if Some(k) != initial && proper_candidate(u) {
                    seen_non_initial.insert(normalize(u));
                }
            }
        }
        Self { seen_non_initial }
    }

    fn occurs_non_initial(&self, surface: &str) -> bool {
        self.seen_non_initial.contains(&normalize(surface))
    }
}

/// Index of the first non-punctuation unit.
fn initial_index(units: &[String]) -> Option<usize> {
    units.iter().position(|u| !is_punctuation(u))
}

fn stem_of(surface: &str, punctuation: bool) -> String {
    if punctuation {
        return surface.to_string();
    }
    let lower = normalize(surface);
    if is_alphabetic_word(surface) {
        let stemmed = stemmer::stem(&lower);
        if stemmed.is_empty() {
            lower
        } else {
            stemmed
        }
    } else {
        lower
    }
}

/// Annotates units already split from one sentence.
pub fn annotate_units(
    units: &[String],
    starts_sentence: bool,
    context: &ProperNounContext,
) -> Vec<Token> {
    let initial = if starts_sentence {
        initial_index(units)
    } else {
        None
    };
    units
        .iter()
        .enumerate()
        .map(|(k, surface)| {
            let punctuation = is_punctuation(surface);
            let stopword = !punctuation && is_stopword(&normalize(surface));
            let numeric = !punctuation && is_numeric(surface);
            let proper = !punctuation
                && proper_candidate(surface)
                && (Some(k) != initial || context.occurs_non_initial(surface));
            Token {
                surface: surface.clone(),
                stem: stem_of(surface, punctuation),
                is_stopword: stopword,
                is_proper_noun: proper,
                is_numeric: numeric,
                is_punctuation: punctuation,
            }
        })
        .collect()
}

/// Tokenizes and annotates a sentence without document context.
///
/// `starts_sentence` says whether the text begins a sentence; when it does,
/// the first word is not taken as a proper noun.
pub fn annotate(sentence_raw: &str, starts_sentence: bool) -> Vec<Token> {
    let units = split_units(sentence_raw);
    annotate_units(&units, starts_sentence, &ProperNounContext::default())
}
