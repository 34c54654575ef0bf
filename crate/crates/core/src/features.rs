//! Vocabulary construction and sparse term weighting.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::textprep::TokenList;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("no training documents")]
    NoDocuments,
    #[error("training documents contain no tokens; vocabulary would be empty")]
    EmptyVocabulary,
    #[error("unknown weighting scheme {0:?} (expected binary or tf)")]
    UnknownScheme(String),
}

/// Term to index map, built from training documents only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Union of all training tokens, sorted lexicographically.
    pub fn build<'a, I>(train_docs: I) -> Result<Self, FeatureError>
    where
        I: IntoIterator<Item = &'a TokenList>,
    {
        let mut any_doc = false;
        let mut set = BTreeSet::new();
        for doc in train_docs {
            any_doc = true;
            set.extend(doc.iter());
        }
        if !any_doc {
            return Err(FeatureError::NoDocuments);
        }
        if set.is_empty() {
            return Err(FeatureError::EmptyVocabulary);
        }
        let terms: Vec<String> = set.into_iter().map(str::to_owned).collect();
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Ok(Self { terms, index })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index.contains_key(term)
    }

    /// `index<TAB>term` per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            out.push_str(&format!("{i}\t{t}\n"));
        }
        out
    }

    /// SHA-256 of [`Vocabulary::dump`], hex encoded. Models record this to
    /// tie their parameter columns to one vocabulary.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.dump().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightingScheme {
    /// 1 if the term occurs, else absent.
    Binary,
    /// Raw occurrence count.
    #[serde(rename = "tf")]
    TermFrequency,
}

impl WeightingScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightingScheme::Binary => "binary",
            WeightingScheme::TermFrequency => "tf",
        }
    }
}

impl fmt::Display for WeightingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightingScheme {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "binary" | "bool" | "boolean" => Ok(Self::Binary),
            "tf" | "count" | "term-frequency" => Ok(Self::TermFrequency),
            _ => Err(FeatureError::UnknownScheme(s.to_string())),
        }
    }
}

/// Sparse document vector: term index to positive integer weight,
/// iterated in ascending index order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FeatureVector {
    entries: BTreeMap<usize, u32>,
}

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Zero weights are not stored.
    pub fn from_pairs<I: IntoIterator<Item = (usize, u32)>>(pairs: I) -> Self {
        let mut v = Self::new();
        for (i, w) in pairs {
            if w > 0 {
                *v.entries.entry(i).or_insert(0) += w;
            }
        }
        v
    }

    pub fn get(&self, index: usize) -> u32 {
        self.entries.get(&index).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.entries.iter().map(|(&i, &w)| (i, w))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    /// Number of stored (non-zero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.entries.values().map(|&w| u64::from(w)).sum()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    /// Every stored weight clamped to 1.
    pub fn binarized(&self) -> Self {
        Self {
            entries: self.entries.keys().map(|&i| (i, 1)).collect(),
        }
    }
}

/// Maps tokens onto `vocab`. Out-of-vocabulary tokens are skipped.
pub fn vectorize(tokens: &TokenList, vocab: &Vocabulary, scheme: WeightingScheme) -> FeatureVector {
    let mut entries = BTreeMap::new();
    for idx in tokens.iter().filter_map(|t| vocab.get(t)) {
        let w = entries.entry(idx).or_insert(0u32);
        match scheme {
            WeightingScheme::Binary => *w = 1,
            WeightingScheme::TermFrequency => *w += 1,
        }
    }
    FeatureVector { entries }
}
