//! Snowball English (Porter2) stemmer.
//!
//! Operates on lowercase input. Words shorter than three characters are
//! returned unchanged.

const VALID_LI: &[char] = &['c', 'd', 'e', 'g', 'h', 'k', 'm', 'n', 'r', 't'];

const EXCEPTION1: &[(&str, &str)] = &[
    ("skis", "ski"),
    ("skies", "sky"),
    ("dying", "die"),
    ("lying", "lie"),
    ("tying", "tie"),
    ("idly", "idl"),
    ("gently", "gentl"),
    ("ugly", "ugli"),
    ("early", "earli"),
    ("only", "onli"),
    ("singly", "singl"),
    ("sky", "sky"),
    ("news", "news"),
    ("howe", "howe"),
    ("atlas", "atlas"),
    ("cosmos", "cosmos"),
    ("bias", "bias"),
    ("andes", "andes"),
];

const EXCEPTION2: &[&str] = &[
    "inning", "outing", "canning", "herring", "earring", "proceed", "exceed", "succeed",
];

const STEP2: &[(&str, &str)] = &[
    ("ization", "ize"),
    ("ational", "ate"),
    ("fulness", "ful"),
    ("ousness", "ous"),
    ("iveness", "ive"),
    ("tional", "tion"),
    ("biliti", "ble"),
    ("lessli", "less"),
    ("entli", "ent"),
    ("ation", "ate"),
    ("alism", "al"),
    ("aliti", "al"),
    ("ousli", "ous"),
    ("iviti", "ive"),
    ("fulli", "ful"),
    ("enci", "ence"),
    ("anci", "ance"),
    ("abli", "able"),
    ("izer", "ize"),
    ("ator", "ate"),
    ("alli", "al"),
    ("bli", "ble"),
    ("ogi", "og"),
    ("li", ""),
];

const STEP3: &[(&str, &str)] = &[
    ("ational", "ate"),
    ("tional", "tion"),
    ("alize", "al"),
    ("icate", "ic"),
    ("iciti", "ic"),
    ("ative", ""),
    ("ical", "ic"),
    ("ness", ""),
    ("ful", ""),
];

const STEP4: &[&str] = &[
    "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ism", "ate", "iti", "ous",
    "ive", "ize", "ion", "al", "er", "ic",
];

/// Stems one lowercase word.
pub fn stem(word: &str) -> String {
    if let Some((_, out)) = EXCEPTION1.iter().find(|(w, _)| *w == word) {
        return (*out).to_string();
    }
    if word.chars().count() < 3 {
        return word.to_string();
    }
    let mut w = Word::new(word);
    w.prelude();
    w.mark_regions();
    w.step_1a();
    let done = {
        let s: String = w.chars.iter().collect();
        EXCEPTION2.contains(&s.as_str())
    };
    if !done {
        w.step_1b();
        w.step_1c();
        w.step_2();
        w.step_3();
        w.step_4();
        w.step_5();
    }
    w.postlude()
}

struct Word {
    chars: Vec<char>,
    p1: usize,
    p2: usize,
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

impl Word {
    fn new(word: &str) -> Self {
        Self {
            chars: word.chars().collect(),
            p1: 0,
            p2: 0,
        }
    }

    fn len(&self) -> usize {
        self.chars.len()
    }

    fn prelude(&mut self) {
        if self.chars.first() == Some(&'\'') {
            self.chars.remove(0);
        }
        if self.chars.first() == Some(&'y') {
            self.chars[0] = 'Y';
        }
        for i in 1..self.chars.len() {
            if self.chars[i] == 'y' && is_vowel(self.chars[i - 1]) {
                self.chars[i] = 'Y';
            }
        }
    }

    /// Position just past the first non-vowel that follows a vowel, searching
    /// from `start`.
    fn region_after(&self, start: usize) -> usize {
        let n = self.len();
        let mut i = start;
        while i < n && !is_vowel(self.chars[i]) {
            i += 1;
        }
        while i < n && is_vowel(self.chars[i]) {
            i += 1;
        }
        if i < n {
            i + 1
        } else {
            n
        }
    }

    fn mark_regions(&mut self) {
        let n = self.len();
        let prefix = ["gener", "commun", "arsen"]
            .iter()
            .find(|p| self.starts_with(p))
            .map(|p| p.len());
        self.p1 = match prefix {
            Some(len) => len,
            None => self.region_after(0),
        };
        self.p2 = if self.p1 >= n {
            n
        } else {
            self.region_after(self.p1)
        };
    }

    fn starts_with(&self, s: &str) -> bool {
        let n = s.chars().count();
        n <= self.len() && self.chars.iter().take(n).copied().eq(s.chars())
    }

    fn ends_with(&self, s: &str) -> bool {
        let n = s.chars().count();
        n <= self.len() && self.chars[self.len() - n..].iter().copied().eq(s.chars())
    }

    fn replace_suffix(&mut self, suffix_len: usize, with: &str) {
        let keep = self.len() - suffix_len;
        self.chars.truncate(keep);
        self.chars.extend(with.chars());
    }

    fn contains_vowel(&self, range: std::ops::Range<usize>) -> bool {
        self.chars[range].iter().any(|&c| is_vowel(c))
    }

    /// Short syllable ending at `end` (exclusive).
    fn short_syllable_at(&self, end: usize) -> bool {
        if end >= 3 {
            let (a, b, c) = (self.chars[end - 3], self.chars[end - 2], self.chars[end - 1]);
            if !is_vowel(a) && is_vowel(b) && !is_vowel(c) && !matches!(c, 'w' | 'x' | 'Y') {
                return true;
            }
        }
        end == 2 && is_vowel(self.chars[0]) && !is_vowel(self.chars[1])
    }

    fn longest<'a, T>(&self, table: &'a [(&'a str, T)]) -> Option<&'a (&'a str, T)> {
        table
            .iter()
            .filter(|(s, _)| self.ends_with(s))
            .max_by_key(|(s, _)| s.len())
    }

    fn step_1a(&mut self) {
        for suffix in ["'s'", "'s", "'"] {
            if self.ends_with(suffix) {
                self.replace_suffix(suffix.len(), "");
                break;
            }
        }
        if self.ends_with("sses") {
            self.replace_suffix(4, "ss");
        } else if self.ends_with("ied") || self.ends_with("ies") {
            if self.len() > 4 {
                self.replace_suffix(3, "i");
            } else {
                self.replace_suffix(3, "ie");
            }
        } else if self.ends_with("us") || self.ends_with("ss") {
        } else if self.ends_with("s") {
            let n = self.len();
            if n >= 2 && self.contains_vowel(0..n - 2) {
                self.replace_suffix(1, "");
            }
        }
    }

    fn step_1b(&mut self) {
        const TABLE: &[(&str, bool)] = &[
            ("eedly", true),
            ("ingly", false),
            ("edly", false),
            ("eed", true),
            ("ing", false),
            ("ed", false),
        ];
        let Some(&(suffix, is_eed)) = self.longest(TABLE) else {
            return;
        };
        let start = self.len() - suffix.len();
        if is_eed {
            if start >= self.p1 {
                self.replace_suffix(suffix.len(), "ee");
            }
            return;
        }
        if !self.contains_vowel(0..start) {
            return;
        }
        self.chars.truncate(start);
        if self.ends_with("at") || self.ends_with("bl") || self.ends_with("iz") {
            self.chars.push('e');
        } else if ["bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt"]
            .iter()
            .any(|d| self.ends_with(d))
        {
            self.chars.pop();
        } else if self.p1 == self.len() && self.short_syllable_at(self.len()) {
            self.chars.push('e');
        }
    }

    fn step_1c(&mut self) {
        let n = self.len();
        if n >= 3 && matches!(self.chars[n - 1], 'y' | 'Y') && !is_vowel(self.chars[n - 2]) {
            self.chars[n - 1] = 'i';
        }
    }

    fn step_2(&mut self) {
        let Some(&(suffix, replacement)) = self.longest(STEP2) else {
            return;
        };
        let start = self.len() - suffix.len();
        if start < self.p1 {
            return;
        }
        match suffix {
            "ogi" => {
                if start > 0 && self.chars[start - 1] == 'l' {
                    self.replace_suffix(3, replacement);
                }
            }
            "li" => {
                if start > 0 && VALID_LI.contains(&self.chars[start - 1]) {
                    self.replace_suffix(2, "");
                }
            }
            _ => self.replace_suffix(suffix.len(), replacement),
        }
    }

    fn step_3(&mut self) {
        let Some(&(suffix, replacement)) = self.longest(STEP3) else {
            return;
        };
        let start = self.len() - suffix.len();
        if start < self.p1 {
            return;
        }
        if suffix == "ative" && start < self.p2 {
            return;
        }
        self.replace_suffix(suffix.len(), replacement);
    }

    fn step_4(&mut self) {
        let Some(suffix) = STEP4
            .iter()
            .filter(|s| self.ends_with(s))
            .max_by_key(|s| s.len())
        else {
            return;
        };
        let start = self.len() - suffix.len();
        if start < self.p2 {
            return;
        }
        if *suffix == "ion" {
            if start > 0 && matches!(self.chars[start - 1], 's' | 't') {
                self.replace_suffix(3, "");
            }
        } else {
            self.replace_suffix(suffix.len(), "");
        }
    }

    fn step_5(&mut self) {
        let n = self.len();
        if n == 0 {
            return;
        }
        let start = n - 1;
        match self.chars[start] {
            'e' => {
                if start >= self.p2 || (start >= self.p1 && !self.short_syllable_at(start)) {
                    self.chars.pop();
                }
            }
            'l' => {
                if start >= self.p2 && start > 0 && self.chars[start - 1] == 'l' {
                    self.chars.pop();
                }
            }
            _ => {}
        }
    }

    fn postlude(self) -> String {
        self.chars
            .into_iter()
            .map(|c| if c == 'Y' { 'y' } else { c })
            .collect()
    }
}
