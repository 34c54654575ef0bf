//! Directory-per-category corpus loading and stratified train/test splits.
//!
//! A corpus lives on disk as `<root>/<category>/<file>`. Every immediate
//! subdirectory of the root is a category and every non-hidden regular file
//! inside it is one UTF-8 document. Categories are always kept in
//! lexicographic order, which is the canonical class order for everything
//! downstream (vocabulary indexing, model rows, confusion matrices).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_SPLIT_RATIO: f64 = 0.7;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus root {0} does not exist or is not a directory")]
    MissingRoot(PathBuf),
    #[error("corpus root {0} contains no category directories")]
    EmptyRoot(PathBuf),
    #[error("no documents supplied")]
    NoDocuments,
    #[error("duplicate document id {0}")]
    DuplicateId(String),
    #[error("document {0} has an empty label")]
    EmptyLabel(String),
    #[error("category with zero files: {0}")]
    EmptyCategory(PathBuf),
    #[error("file {0} is not valid UTF-8")]
    Undecodable(PathBuf),
    #[error("I/O error reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("split ratio {0} is outside the open interval (0, 1)")]
    RatioOutOfRange(f64),
    #[error("category {category} has {count} document(s); at least 2 are needed to split")]
    CategoryTooSmall { category: String, count: usize },
}

/// One labeled document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    /// `<category>/<file name>`, stable across platforms.
    pub id: String,
    pub label: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    categories: Vec<String>,
    documents: Vec<Document>,
}

impl Corpus {
    /// Builds a corpus from in-memory documents.
    ///
    /// Categories are derived from the labels and sorted; documents are
    /// reordered by (category, id) so that the result is canonical no matter
    /// what order they were supplied in.
    pub fn from_documents(documents: Vec<Document>) -> Result<Self, CorpusError> {
        let mut seen = std::collections::BTreeSet::new();
        let mut by_category: BTreeMap<String, Vec<Document>> = BTreeMap::new();
        for doc in documents {
            if doc.label.is_empty() {
                return Err(CorpusError::EmptyLabel(doc.id));
            }
            if !seen.insert(doc.id.clone()) {
                return Err(CorpusError::DuplicateId(doc.id));
            }
            by_category.entry(doc.label.clone()).or_default().push(doc);
        }
        if by_category.is_empty() {
            return Err(CorpusError::NoDocuments);
        }
        let categories: Vec<String> = by_category.keys().cloned().collect();
        let mut documents = Vec::new();
        for (_, mut docs) in by_category {
            docs.sort_by(|a, b| a.id.cmp(&b.id));
            documents.extend(docs);
        }
        Ok(Self { categories, documents })
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Document count per category, in canonical category order.
    pub fn category_sizes(&self) -> Vec<(String, usize)> {
        self.categories
            .iter()
            .map(|c| {
                let n = self.documents.iter().filter(|d| &d.label == c).count();
                (c.clone(), n)
            })
            .collect()
    }

    pub fn category_index(&self, label: &str) -> Option<usize> {
        self.categories.binary_search_by(|c| c.as_str().cmp(label)).ok()
    }
}

fn is_hidden(name: &std::ffi::OsStr) -> bool {
    name.to_string_lossy().starts_with('.')
}

fn sorted_entries(dir: &Path) -> Result<Vec<fs::DirEntry>, CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut entries = fs::read_dir(dir)
        .map_err(io_err)?
        .collect::<Result<Vec<_>, _>>()
        .map_err(io_err)?;
    entries.retain(|e| !is_hidden(&e.file_name()));
    entries.sort_by_key(|e| e.file_name());
    Ok(entries)
}

/// Loads `<root>/<category>/<file>` into a [`Corpus`].
///
/// Hidden entries (leading dot) are skipped at both levels. Regular files
/// directly under the root are ignored; only directories define categories.
/// Any file that is not valid UTF-8 aborts the load.
pub fn load_corpus(root: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let root = root.as_ref();
    if !root.is_dir() {
        return Err(CorpusError::MissingRoot(root.to_path_buf()));
    }

    let mut categories = Vec::new();
    let mut documents = Vec::new();
    for entry in sorted_entries(root)? {
        let path = entry.path();
        if !path.is_dir() {
            continue;
        }
        let category = entry.file_name().to_string_lossy().into_owned();
        let mut count = 0usize;
        for file in sorted_entries(&path)? {
            let file_path = file.path();
            if !file_path.is_file() {
                continue;
            }
            let bytes = fs::read(&file_path).map_err(|source| CorpusError::Io {
                path: file_path.clone(),
                source,
            })?;
            let text = String::from_utf8(bytes).map_err(|_| CorpusError::Undecodable(file_path.clone()))?;
            documents.push(Document {
                id: format!("{}/{}", category, file.file_name().to_string_lossy()),
                label: category.clone(),
                text,
            });
            count += 1;
        }
        if count == 0 {
            return Err(CorpusError::EmptyCategory(path));
        }
        categories.push(category);
    }

    if categories.is_empty() {
        return Err(CorpusError::EmptyRoot(root.to_path_buf()));
    }
    // read_dir order is platform dependent; OsString order matches String
    // order for valid UTF-8 names, but sort again on the lossy names to be exact.
    categories.sort();
    documents.sort_by(|a, b| a.label.cmp(&b.label).then_with(|| a.id.cmp(&b.id)));
    Ok(Corpus { categories, documents })
}

/// A train/test partition of a corpus, held as indices into
/// [`Corpus::documents`].
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
    pub ratio: f64,
}

impl Split {
    pub fn train_docs<'a>(&'a self, corpus: &'a Corpus) -> impl Iterator<Item = &'a Document> + 'a {
        self.train.iter().map(move |&i| &corpus.documents[i])
    }

    pub fn test_docs<'a>(&'a self, corpus: &'a Corpus) -> impl Iterator<Item = &'a Document> + 'a {
        self.test.iter().map(move |&i| &corpus.documents[i])
    }

    pub fn train_ids(&self, corpus: &Corpus) -> Vec<String> {
        self.train_docs(corpus).map(|d| d.id.clone()).collect()
    }

    pub fn test_ids(&self, corpus: &Corpus) -> Vec<String> {
        self.test_docs(corpus).map(|d| d.id.clone()).collect()
    }
}

/// Number of training documents taken from a category of `size` documents.
///
/// `round(ratio * size)` (half away from zero), clamped to `[1, size - 1]`
/// so both sides of the split see every category.
pub fn train_count(size: usize, ratio: f64) -> usize {
    let raw = (ratio * size as f64).round() as usize;
    raw.clamp(1, size.saturating_sub(1).max(1))
}

/// In-place Fisher-Yates shuffle driven by ChaCha8.
///
/// For `i` from `len - 1` down to 1, draws `j = next_u64() % (i + 1)` and
/// swaps positions `i` and `j`. Written out explicitly rather than delegating
/// to `rand::seq` so the permutation for a given seed is pinned to this
/// algorithm and to ChaCha8's stable output stream.
fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

/// Seeded stratified split.
///
/// One ChaCha8 generator is seeded from `seed` and consumed category by
/// category in canonical order. Within a category the document indices are
/// shuffled and the first [`train_count`] go to training. Both output lists
/// are sorted by corpus index, so they follow canonical document order.
pub fn stratified_split(corpus: &Corpus, ratio: f64, seed: u64) -> Result<Split, CorpusError> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(CorpusError::RatioOutOfRange(ratio));
    }
    for (category, count) in corpus.category_sizes() {
        if count < 2 {
            return Err(CorpusError::CategoryTooSmall { category, count });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for category in corpus.categories() {
        let mut members: Vec<usize> = corpus
            .documents
            .iter()
            .enumerate()
            .filter(|(_, d)| &d.label == category)
            .map(|(i, _)| i)
            .collect();
        let n_train = train_count(members.len(), ratio);
        shuffle(&mut members, &mut rng);
        train.extend_from_slice(&members[..n_train]);
        test.extend_from_slice(&members[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split {
        train,
        test,
        seed,
        ratio,
    })
}
