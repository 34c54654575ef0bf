//! Orthographic normalization and tokenization.

use super::TokenList;

const TATWEEL: char = '\u{0640}';
const ALEF: char = '\u{0627}';
const YEH: char = '\u{064A}';
const HEH: char = '\u{0647}';

/// Tashkeel: fathatan through sukun.
pub fn is_diacritic(c: char) -> bool {
    ('\u{064B}'..='\u{0652}').contains(&c)
}

/// Letters of the Arabic block plus the extended letters used by other
/// languages written in Arabic script. Digits, punctuation, tatweel and
/// diacritics are not letters.
pub fn is_arabic_letter(c: char) -> bool {
    matches!(c,
        '\u{0621}'..='\u{063A}'
        | '\u{0641}'..='\u{064A}'
        | '\u{0671}'..='\u{06D3}'
        | '\u{06D5}')
}

/// Strips tashkeel and tatweel and folds spelling variants:
/// أ إ آ to ا, ى to ي, ة to ه. Everything else passes through.
pub fn normalize(text: &str) -> String {
    text.chars()
        .filter(|&c| !is_diacritic(c) && c != TATWEEL)
        .map(|c| match c {
            '\u{0623}' | '\u{0625}' | '\u{0622}' => ALEF,
            '\u{0649}' => YEH,
            '\u{0629}' => HEH,
            other => other,
        })
        .collect()
}

/// Splits on every character that is not an Arabic letter. Runs of
/// non-letters (Latin, digits, punctuation, whitespace) vanish entirely.
pub fn tokenize(text: &str) -> TokenList {
    let tokens = text
        .split(|c: char| !is_arabic_letter(c))
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect();
    TokenList::from_vec_unchecked(tokens)
}
