//! Light stemming by affix stripping.
//!
//! One pass strips at most one prefix (first match in table order whose
//! removal leaves at least `min_stem_length` letters), then strips suffixes
//! repeatedly under the same length guard. Passes are repeated until the
//! word stops changing. A single pass is not idempotent on inputs such as
//! `ووكتب`, where removing one prefix exposes another; iterating to the fixed
//! point makes `stem(stem(w)) == stem(w)` hold for every input.

use std::fs;
use std::path::Path;

use super::{normalize, PrepError};

const BUNDLED: &str = include_str!("../../data/affixes.txt");

pub const DEFAULT_MIN_STEM_LENGTH: usize = 2;

/// Ordered prefix and suffix lists. Position in each list is strip priority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffixTable {
    prefixes: Vec<Vec<char>>,
    suffixes: Vec<Vec<char>>,
}

impl Default for AffixTable {
    fn default() -> Self {
        Self::bundled()
    }
}

impl AffixTable {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled affix table is well formed")
    }

    pub fn new<P, S>(prefixes: P, suffixes: S) -> Self
    where
        P: IntoIterator,
        P::Item: AsRef<str>,
        S: IntoIterator,
        S::Item: AsRef<str>,
    {
        let conv = |a: &str| normalize(a.trim()).chars().collect::<Vec<_>>();
        Self {
            prefixes: prefixes
                .into_iter()
                .map(|p| conv(p.as_ref()))
                .filter(|p| !p.is_empty())
                .collect(),
            suffixes: suffixes
                .into_iter()
                .map(|s| conv(s.as_ref()))
                .filter(|s| !s.is_empty())
                .collect(),
        }
    }

    /// Parses the `[prefixes]` / `[suffixes]` section format. Blank lines
    /// and `#` comments are ignored; an affix outside any section is an error.
    pub fn parse(text: &str) -> Result<Self, PrepError> {
        #[derive(Clone, Copy)]
        enum Section {
            None,
            Prefixes,
            Suffixes,
        }
        let mut section = Section::None;
        let mut prefixes = Vec::new();
        let mut suffixes = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line {
                "[prefixes]" => section = Section::Prefixes,
                "[suffixes]" => section = Section::Suffixes,
                _ if line.starts_with('[') => {
                    return Err(PrepError::AffixSyntax {
                        line: lineno + 1,
                        message: format!("unknown section {line}"),
                    })
                }
                _ => match section {
                    Section::Prefixes => prefixes.push(line),
                    Section::Suffixes => suffixes.push(line),
                    Section::None => {
                        return Err(PrepError::AffixSyntax {
                            line: lineno + 1,
                            message: "affix before any section header".into(),
                        })
                    }
                },
            }
        }
        Ok(Self::new(prefixes, suffixes))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PrepError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| PrepError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn prefixes(&self) -> impl Iterator<Item = String> + '_ {
        self.prefixes.iter().map(|p| p.iter().collect())
    }

    pub fn suffixes(&self) -> impl Iterator<Item = String> + '_ {
        self.suffixes.iter().map(|s| s.iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LightStemmer {
    affixes: AffixTable,
    min_stem_length: usize,
}

impl Default for LightStemmer {
    fn default() -> Self {
        Self::new(AffixTable::bundled(), DEFAULT_MIN_STEM_LENGTH).expect("default is valid")
    }
}

impl LightStemmer {
    pub fn new(affixes: AffixTable, min_stem_length: usize) -> Result<Self, PrepError> {
        if min_stem_length == 0 {
            return Err(PrepError::MinStemLength);
        }
        Ok(Self {
            affixes,
            min_stem_length,
        })
    }

    pub fn min_stem_length(&self) -> usize {
        self.min_stem_length
    }

    pub fn affixes(&self) -> &AffixTable {
        &self.affixes
    }

    fn strip_pass<'a>(&self, word: &'a [char]) -> &'a [char] {
        let min = self.min_stem_length;
        if word.len() <= min {
            return word;
        }
        let mut rest = word;
        if let Some(p) = self
            .affixes
            .prefixes
            .iter()
            .find(|p| rest.starts_with(p) && rest.len() - p.len() >= min)
        {
            rest = &rest[p.len()..];
        }
        while let Some(s) = self
            .affixes
            .suffixes
            .iter()
            .find(|s| rest.ends_with(s) && rest.len() - s.len() >= min)
        {
            rest = &rest[..rest.len() - s.len()];
        }
        rest
    }

    pub fn stem(&self, word: &str) -> String {
        let chars: Vec<char> = word.chars().collect();
        let mut current: &[char] = &chars;
        loop {
            let next = self.strip_pass(current);
            if next.len() == current.len() {
                break;
            }
            current = next;
        }
        current.iter().collect()
    }
}

/// Stems with the bundled affix table and the default minimum length.
pub fn light_stem(word: &str) -> String {
    LightStemmer::default().stem(word)
}
