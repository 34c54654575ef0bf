use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use super::{normalize, PrepError, TokenList};

const BUNDLED: &str = include_str!("../../data/stopwords-ar.txt");

/// A set of normalized stop words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopList {
    terms: BTreeSet<String>,
}

impl StopList {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The stop list shipped with the crate: days, months, pronouns,
    /// conjunctions, prepositions and a handful of common particles.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED)
    }

    /// One term per line; blank lines and `#` comments are skipped.
    /// Every term is normalized, so the set can be matched directly
    /// against normalized tokens.
    pub fn parse(text: &str) -> Self {
        Self::from_terms(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PrepError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| PrepError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self::parse(&text))
    }

    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let terms = terms
            .into_iter()
            .map(|t| normalize(t.as_ref().trim()))
            .filter(|t| !t.is_empty())
            .collect();
        Self { terms }
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }
}

/// Drops every token found in `stoplist`, keeping the survivors in order.
pub fn remove_stopwords(tokens: TokenList, stoplist: &StopList) -> TokenList {
    if stoplist.is_empty() {
        return tokens;
    }
    let kept = tokens
        .into_vec()
        .into_iter()
        .filter(|t| !stoplist.contains(t))
        .collect();
    TokenList::from_vec_unchecked(kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(words: &[&str]) -> TokenList {
        TokenList::new(words.iter().map(|w| normalize(w)).collect()).unwrap()
    }

    #[test]
    fn removes_listed_terms_in_order() {
        // "الى" normalizes to "الي" on both sides
        let stop = StopList::from_terms(["الى"]);
        assert_eq!(
            remove_stopwords(toks(&["ذهب", "الى", "البيت"]), &stop).tokens(),
            ["ذهب", "البيت"]
        );
        assert!(remove_stopwords(toks(&["الى", "الى"]), &stop).is_empty());
        let t = toks(&["ذهب", "الى"]);
        assert_eq!(remove_stopwords(t.clone(), &StopList::empty()), t);
    }

    #[test]
    fn parse_normalizes_and_skips_comments() {
        let stop = StopList::parse("# header\n\nإلى\n  على  \n#في\n");
        assert_eq!(stop.iter().collect::<Vec<_>>(), ["الي", "علي"]);
    }

    #[test]
    fn bundled_list_covers_each_category() {
        let stop = StopList::bundled();
        // day, month, pronoun, conjunction, preposition
        for w in ["الجمعة", "أكتوبر", "نحن", "لكن", "إلى"] {
            assert!(stop.contains(&normalize(w)), "{w}");
        }
        assert!(stop.len() > 100);
    }

    #[test]
    fn load_reports_missing_file() {
        let err = StopList::load("/definitely/not/here.txt").unwrap_err();
        assert!(matches!(err, PrepError::Io { .. }));
    }
}
