//! Rule-based sentence segmentation.

use std::sync::OnceLock;

const ABBREVIATIONS_FILE: &str = include_str!("../../data/abbreviations.txt");

/// Lowercase abbreviation entries, each ending in `.`.
pub fn abbreviations() -> &'static [String] {
    static LIST: OnceLock<Vec<String>> = OnceLock::new();
    LIST.get_or_init(|| super::load_list(ABBREVIATIONS_FILE))
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '”' | '’' | '»')
}

fn opens_sentence(c: char) -> bool {
    c.is_uppercase() || c.is_ascii_digit() || matches!(c, '"' | '\'' | '“' | '‘' | '(' | '[' | '«')
}

/// True when the text up to and including a final `.` ends in a listed
/// abbreviation that starts on a word boundary.
fn ends_in_abbreviation(prefix: &str) -> bool {
    let lower = prefix.to_lowercase();
    abbreviations().iter().any(|abbr| {
        if !lower.ends_with(abbr.as_str()) {
            return false;
        }
        let start = lower.len() - abbr.len();
        lower[..start]
            .chars()
            .next_back()
            .is_none_or(|c| c.is_whitespace() || matches!(c, '(' | '"' | '\'' | '“' | '‘' | '['))
    })
}

/// Splits raw text into sentences.
///
/// A boundary is a run of `.`, `!` or `?` (plus closing quotes or brackets)
/// followed by whitespace and then an uppercase letter, digit or opening
/// quote. Boundaries directly after a listed abbreviation are suppressed.
/// Whitespace inside each sentence is collapsed to single spaces.
pub fn segment_sentences(body: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = body.char_indices().collect();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let (_, c) = chars[i];
        if !is_terminal(c) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && (is_terminal(chars[j].1) || is_closer(chars[j].1)) {
            j += 1;
        }
        // j is the first char after the terminal cluster
        let end_byte = chars.get(j).map_or(body.len(), |&(b, _)| b);
        let mut k = j;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let boundary = if j >= chars.len() {
            true
        } else if k == j || k >= chars.len() {
            k >= chars.len()
        } else {
            opens_sentence(chars[k].1)
        };
        let abbreviated = || {
            c == '.'
                && (i + 1..j).all(|m| !is_terminal(chars[m].1))
                && ends_in_abbreviation(&body[..chars[i].0 + 1])
        };
        if boundary && !abbreviated() {
            push_sentence(&mut sentences, &body[start..end_byte]);
            start = end_byte;
        }
        i = j.max(i + 1);
    }
    if start < body.len() {
        push_sentence(&mut sentences, &body[start..]);
    }
    sentences
}

fn push_sentence(out: &mut Vec<String>, raw: &str) {
    let collapsed = raw.split_whitespace().collect::<Vec<_>>().join(" ");
    if !collapsed.is_empty() {
        out.push(collapsed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_on_terminal_punctuation() {
        assert_eq!(
            segment_sentences("It rained. We left."),
            vec!["It rained.", "We left."]
        );
    }

    #[test]
    fn abbreviation_suppresses_split() {
        assert_eq!(
            segment_sentences("Dr. Smith went home. He slept."),
            vec!["Dr. Smith went home.", "He slept."]
        );
        assert_eq!(
            segment_sentences("Results by Lee et al. Show gains. Done."),
            vec!["Results by Lee et al. Show gains.", "Done."]
        );
    }

    #[test]
    fn no_terminal_punctuation_is_one_sentence() {
        assert_eq!(
            segment_sentences("a headline without a stop"),
            vec!["a headline without a stop"]
        );
    }

    #[test]
    fn lowercase_continuation_does_not_split() {
        assert_eq!(segment_sentences("It cost 3.5 million. ok then"), vec![
            "It cost 3.5 million. ok then"
        ]);
    }

    #[test]
    fn quotes_and_questions() {
        assert_eq!(
            segment_sentences("\"Why?\" she asked. \"Because.\" 12 people came!"),
            vec!["\"Why?\" she asked.", "\"Because.\"", "12 people came!"]
        );
    }

    #[test]
    fn whitespace_collapsed_and_no_empties() {
        let out = segment_sentences("  One.\n\n  Two  words.   ");
        assert_eq!(out, vec!["One.", "Two words."]);
        assert!(segment_sentences("   ").is_empty());
    }
}
