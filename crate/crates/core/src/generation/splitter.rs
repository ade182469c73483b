//! Rule-based sentence splitter.
//!
//! A boundary is a run of `.`, `!` or `?` (optionally followed by closing
//! quotes or brackets), then whitespace, then an uppercase letter or digit.
//! A period ending a known abbreviation is never a boundary.

const ABBREVIATIONS: &[&str] = &[
    "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "jr.", "sr.", "vs.", "e.g.", "i.e.", "a.m.", "p.m.", "approx.", "no.",
];

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201D}' | '\u{2019}')
}

/// Split `text` into trimmed sentences. Text without an internal boundary
/// comes back as a single sentence; whitespace-only input yields nothing.
pub fn split_sentences(text: &str) -> Vec<&str> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        if !is_terminal(chars[i].1) {
            i += 1;
            continue;
        }
        let first_terminal = i;
        let mut j = i;
        while j + 1 < chars.len() && is_terminal(chars[j + 1].1) {
            j += 1;
        }
        while j + 1 < chars.len() && is_closer(chars[j + 1].1) {
            j += 1;
        }
        let end_byte = chars.get(j + 1).map_or(text.len(), |c| c.0);
        let mut k = j + 1;
        let mut saw_space = false;
        while k < chars.len() && chars[k].1.is_whitespace() {
            saw_space = true;
            k += 1;
        }
        let opens_sentence = chars.get(k).is_some_and(|&(_, c)| c.is_uppercase() || c.is_ascii_digit());
        let single_period = j == first_terminal && chars[first_terminal].1 == '.';
        if saw_space && opens_sentence && !(single_period && ends_with_abbreviation(&text[start..end_byte])) {
            push_trimmed(&mut out, &text[start..end_byte]);
            start = chars[k].0;
        }
        i = k.max(j + 1);
    }
    push_trimmed(&mut out, &text[start..]);
    out
}

fn push_trimmed<'a>(out: &mut Vec<&'a str>, s: &'a str) {
    let s = s.trim();
    if !s.is_empty() {
        out.push(s);
    }
}

fn ends_with_abbreviation(sentence: &str) -> bool {
    let last_word = sentence.rsplit(char::is_whitespace).next().unwrap_or("").to_lowercase();
    ABBREVIATIONS.contains(&last_word.as_str())
}
