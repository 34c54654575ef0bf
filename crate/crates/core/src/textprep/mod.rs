//! Text preprocessing: normalize, tokenize, drop stop words, light-stem.

mod normalize;
mod stem;
mod stoplist;

use std::path::PathBuf;

use thiserror::Error;

pub use normalize::{is_arabic_letter, is_diacritic, normalize, tokenize};
pub use stem::{light_stem, AffixTable, LightStemmer, DEFAULT_MIN_STEM_LENGTH};
pub use stoplist::{remove_stopwords, StopList};

#[derive(Debug, Error)]
pub enum PrepError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("affix table line {line}: {message}")]
    AffixSyntax { line: usize, message: String },
    #[error("minimum stem length must be at least 1")]
    MinStemLength,
    #[error("token {0:?} is empty or contains non-letter characters")]
    InvalidToken(String),
}

/// Ordered tokens of one document, repeats included.
///
/// Every token is a non-empty run of Arabic letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TokenList(Vec<String>);

impl TokenList {
    /// Validates that every token is a non-empty run of Arabic letters.
    pub fn new(tokens: Vec<String>) -> Result<Self, PrepError> {
        if let Some(bad) = tokens.iter().find(|t| t.is_empty() || !t.chars().all(is_arabic_letter)) {
            return Err(PrepError::InvalidToken(bad.clone()));
        }
        Ok(Self(tokens))
    }

    pub(crate) fn from_vec_unchecked(tokens: Vec<String>) -> Self {
        debug_assert!(tokens.iter().all(|t| !t.is_empty()));
        Self(tokens)
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<String> {
        self.0
    }
}

impl<'a> IntoIterator for &'a TokenList {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenPipelineConfig {
    pub remove_stopwords: bool,
    pub stoplist: StopList,
    pub stem: bool,
    pub stemmer: LightStemmer,
}

impl Default for TokenPipelineConfig {
    /// Stop-word removal and stemming on, bundled stop list and affix table.
    fn default() -> Self {
        Self {
            remove_stopwords: true,
            stoplist: StopList::bundled(),
            stem: true,
            stemmer: LightStemmer::default(),
        }
    }
}

impl TokenPipelineConfig {
    /// Everything off: `preprocess` reduces to `tokenize(normalize(text))`.
    pub fn passthrough() -> Self {
        Self {
            remove_stopwords: false,
            stoplist: StopList::empty(),
            stem: false,
            stemmer: LightStemmer::default(),
        }
    }
}

/// normalize, tokenize, optionally remove stop words, optionally stem.
///
/// With both removal and stemming on, a stem that lands on a stop word
/// (`عندها` stems to `عند`) is dropped as well, so no stop word ever
/// appears in the output.
pub fn preprocess(text: &str, config: &TokenPipelineConfig) -> TokenList {
    let mut tokens = tokenize(&normalize(text));
    if config.remove_stopwords {
        tokens = remove_stopwords(tokens, &config.stoplist);
    }
    if config.stem {
        tokens = TokenList::from_vec_unchecked(tokens.0.iter().map(|t| config.stemmer.stem(t)).collect());
        if config.remove_stopwords {
            tokens = remove_stopwords(tokens, &config.stoplist);
        }
    }
    tokens
}
