//! Multivariate Bernoulli and Multinomial Naive Bayes.
//!
//! Both flavors keep every parameter in log space and use Laplace smoothing:
//!
//! * Bernoulli: `θ(c,t) = (docs of c containing t + 1) / (docs of c + 2)`.
//!   Scoring adds `log θ` for each present term and `log(1 - θ)` for every
//!   vocabulary term the document lacks.
//! * Multinomial: `φ(c,t) = (count of t in c + 1) / (tokens in c + |V|)`.
//!   Scoring adds `weight · log φ` over the document's terms only.
//!
//! Priors are `log(N_c / N)`. Posteriors are a max-shifted softmax of the
//! per-class scores, and argmax ties go to the earliest class.

use std::fmt;
use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{FeatureVector, Vocabulary};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("class {0:?} has no training documents")]
    EmptyClass(String),
    #[error("no classes given")]
    NoClasses,
    #[error("vocabulary is empty")]
    EmptyVocabulary,
    #[error("training label {0:?} is not one of the model classes")]
    UnknownLabel(String),
    #[error("feature index {index} is out of range for a vocabulary of {vocab_size} terms")]
    IndexOutOfRange { index: usize, vocab_size: usize },
    #[error("unknown classifier flavor {0:?} (expected bernoulli or multinomial)")]
    UnknownFlavor(String),
    #[error("model was trained against vocabulary {expected}, got {actual}")]
    VocabularyMismatch { expected: String, actual: String },
    #[error("model file line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Bernoulli,
    Multinomial,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Bernoulli => "bernoulli",
            Flavor::Multinomial => "multinomial",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flavor {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bernoulli" | "mbnb" => Ok(Flavor::Bernoulli),
            "multinomial" | "mnb" => Ok(Flavor::Multinomial),
            _ => Err(ClassifyError::UnknownFlavor(s.to_string())),
        }
    }
}

/// A trained classifier. Immutable; `predict` takes `&self` and the type is
/// `Send + Sync`.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayesModel {
    flavor: Flavor,
    class_names: Vec<String>,
    log_prior: Vec<f64>,
    /// Multinomial: log φ. Bernoulli: log θ. One row per class.
    log_present: Vec<Vec<f64>>,
    /// Bernoulli only: log(1 - θ). Empty rows for Multinomial.
    log_absent: Vec<Vec<f64>>,
    /// Bernoulli only: Σ_t log(1 - θ) per class.
    absent_total: Vec<f64>,
    vocab_size: usize,
    vocab_fingerprint: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: String,
    pub class_index: usize,
    /// Unnormalized per-class log scores.
    pub log_posteriors: Vec<f64>,
    pub posteriors: Vec<f64>,
}

/// Shifted softmax. The maximum score maps to `exp(0)`.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Index of the largest score; the first one wins ties.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

impl NaiveBayesModel {
    /// Trains on `(vector, label)` pairs. `classes` fixes the row order of
    /// the model; every class needs at least one example.
    ///
    /// Bernoulli training only looks at which weights are positive, so it
    /// gives the same model for binary and term-frequency vectors.
    pub fn train<'a, I>(
        flavor: Flavor,
        classes: &[String],
        examples: I,
        vocab: &Vocabulary,
    ) -> Result<Self, ClassifyError>
    where
        I: IntoIterator<Item = (&'a FeatureVector, &'a str)>,
    {
        if classes.is_empty() {
            return Err(ClassifyError::NoClasses);
        }
        if vocab.is_empty() {
            return Err(ClassifyError::EmptyVocabulary);
        }
        let v = vocab.len();
        let k = classes.len();
        let mut doc_count = vec![0u64; k];
        // Bernoulli: documents containing t. Multinomial: summed weight of t.
        let mut term_count = vec![vec![0u64; v]; k];

        for (vector, label) in examples {
            let c = classes
                .iter()
                .position(|n| n == label)
                .ok_or_else(|| ClassifyError::UnknownLabel(label.to_string()))?;
            if let Some(max) = vector.max_index() {
                if max >= v {
                    return Err(ClassifyError::IndexOutOfRange {
                        index: max,
                        vocab_size: v,
                    });
                }
            }
            doc_count[c] += 1;
            for (t, w) in vector.iter() {
                term_count[c][t] += match flavor {
                    Flavor::Bernoulli => 1,
                    Flavor::Multinomial => u64::from(w),
                };
            }
        }
        if let Some(c) = doc_count.iter().position(|&n| n == 0) {
            return Err(ClassifyError::EmptyClass(classes[c].clone()));
        }

        let total_docs: u64 = doc_count.iter().sum();
        let log_prior = doc_count.iter().map(|&n| (n as f64 / total_docs as f64).ln()).collect();

        let mut log_present = Vec::with_capacity(k);
        let mut log_absent = Vec::with_capacity(k);
        let mut absent_total = Vec::with_capacity(k);
        for c in 0..k {
            match flavor {
                Flavor::Multinomial => {
                    let denom = (term_count[c].iter().sum::<u64>() + v as u64) as f64;
                    log_present.push(term_count[c].iter().map(|&n| ((n + 1) as f64 / denom).ln()).collect());
                    log_absent.push(Vec::new());
                    absent_total.push(0.0);
                }
                Flavor::Bernoulli => {
                    let denom = (doc_count[c] + 2) as f64;
                    let present: Vec<f64> = term_count[c].iter().map(|&n| ((n + 1) as f64 / denom).ln()).collect();
                    let absent: Vec<f64> = term_count[c]
                        .iter()
                        .map(|&n| ((doc_count[c] - n + 1) as f64 / denom).ln())
                        .collect();
                    absent_total.push(absent.iter().sum());
                    log_present.push(present);
                    log_absent.push(absent);
                }
            }
        }

        Ok(Self {
            flavor,
            class_names: classes.to_vec(),
            log_prior,
            log_present,
            log_absent,
            absent_total,
            vocab_size: v,
            vocab_fingerprint: vocab.fingerprint(),
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn vocab_fingerprint(&self) -> &str {
        &self.vocab_fingerprint
    }

    pub fn log_prior(&self) -> &[f64] {
        &self.log_prior
    }

    /// log φ(c,t) for Multinomial, log θ(c,t) for Bernoulli.
    pub fn log_term_prob(&self, class: usize, term: usize) -> f64 {
        self.log_present[class][term]
    }

    /// log(1 - θ(c,t)); `None` for Multinomial.
    pub fn log_term_absent(&self, class: usize, term: usize) -> Option<f64> {
        match self.flavor {
            Flavor::Bernoulli => Some(self.log_absent[class][term]),
            Flavor::Multinomial => None,
        }
    }

    pub fn check_vocabulary(&self, vocab: &Vocabulary) -> Result<(), ClassifyError> {
        let actual = vocab.fingerprint();
        if actual != self.vocab_fingerprint {
            return Err(ClassifyError::VocabularyMismatch {
                expected: self.vocab_fingerprint.clone(),
                actual,
            });
        }
        Ok(())
    }

    /// Unnormalized log posterior for each class.
    pub fn scores(&self, vector: &FeatureVector) -> Result<Vec<f64>, ClassifyError> {
        if let Some(max) = vector.max_index() {
            if max >= self.vocab_size {
                return Err(ClassifyError::IndexOutOfRange {
                    index: max,
                    vocab_size: self.vocab_size,
                });
            }
        }
        let scores = (0..self.class_names.len())
            .map(|c| {
                let present = &self.log_present[c];
                match self.flavor {
                    Flavor::Multinomial => {
                        let evidence: f64 = vector.iter().map(|(t, w)| f64::from(w) * present[t]).sum();
                        self.log_prior[c] + evidence
                    }
                    Flavor::Bernoulli => {
                        // Start from "every term absent" and swap in each
                        // present term's log θ for its log(1 - θ).
                        let absent = &self.log_absent[c];
                        let swap: f64 = vector.indices().map(|t| present[t] - absent[t]).sum();
                        self.log_prior[c] + self.absent_total[c] + swap
                    }
                }
            })
            .collect();
        Ok(scores)
    }

    pub fn predict(&self, vector: &FeatureVector) -> Result<Prediction, ClassifyError> {
        let log_posteriors = self.scores(vector)?;
        let class_index = argmax(&log_posteriors);
        Ok(Prediction {
            label: self.class_names[class_index].clone(),
            class_index,
            posteriors: softmax(&log_posteriors),
            log_posteriors,
        })
    }

    /// Writes the versioned text model format. Floats are stored as the hex
    /// of their IEEE-754 bits so a reload is bit-identical.
    ///
    /// ```text
    /// atc-naive-bayes 1
    /// flavor <bernoulli|multinomial>
    /// vocab <size> <sha256 of the vocabulary dump>
    /// classes <k>
    /// class <name>            (k lines)
    /// prior <hex>...          (k values)
    /// present <c> <hex>...    (k lines, |V| values each)
    /// absent <c> <hex>...     (k lines, Bernoulli only)
    /// end
    /// ```
    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        let hex = |xs: &[f64]| {
            xs.iter()
                .map(|x| format!("{:016x}", x.to_bits()))
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(out, "{MODEL_MAGIC} {MODEL_VERSION}")?;
        writeln!(out, "flavor {}", self.flavor)?;
        writeln!(out, "vocab {} {}", self.vocab_size, self.vocab_fingerprint)?;
        writeln!(out, "classes {}", self.class_names.len())?;
        for name in &self.class_names {
            writeln!(out, "class {name}")?;
        }
        writeln!(out, "prior {}", hex(&self.log_prior))?;
        for (c, row) in self.log_present.iter().enumerate() {
            writeln!(out, "present {c} {}", hex(row))?;
        }
        if self.flavor == Flavor::Bernoulli {
            for (c, row) in self.log_absent.iter().enumerate() {
                writeln!(out, "absent {c} {}", hex(row))?;
            }
        }
        writeln!(out, "end")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ClassifyError> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        fs::write(path, buf)?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self, ClassifyError> {
        ModelReader::new(input).read()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ClassifyError> {
        Self::read_from(BufReader::new(fs::File::open(path)?))
    }
}

const MODEL_MAGIC: &str = "atc-naive-bayes";
const MODEL_VERSION: u32 = 1;

struct ModelReader<R> {
    lines: io::Lines<R>,
    line: usize,
}

impl<R: BufRead> ModelReader<R> {
    fn new(input: R) -> Self {
        Self {
            lines: input.lines(),
            line: 0,
        }
    }

    fn err(&self, message: impl Into<String>) -> ClassifyError {
        ClassifyError::Format {
            line: self.line,
            message: message.into(),
        }
    }

    /// Next line split into its keyword and the remainder.
    fn next(&mut self, keyword: &str) -> Result<String, ClassifyError> {
        self.line += 1;
        let line = match self.lines.next() {
            Some(l) => l?,
            None => return Err(self.err(format!("unexpected end of file, expected {keyword}"))),
        };
        match line.split_once(' ') {
            Some((k, rest)) if k == keyword => Ok(rest.to_string()),
            None if line == keyword => Ok(String::new()),
            _ => Err(self.err(format!("expected {keyword}"))),
        }
    }

    fn parse<T: FromStr>(&self, s: &str, what: &str) -> Result<T, ClassifyError> {
        s.parse().map_err(|_| self.err(format!("invalid {what} {s:?}")))
    }

    fn floats(&self, s: &str, expected: usize) -> Result<Vec<f64>, ClassifyError> {
        let values = s
            .split_ascii_whitespace()
            .map(|h| {
                u64::from_str_radix(h, 16)
                    .map(f64::from_bits)
                    .map_err(|_| self.err(format!("invalid float bits {h:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != expected {
            return Err(self.err(format!("expected {expected} values, found {}", values.len())));
        }
        Ok(values)
    }

    fn row(&mut self, keyword: &str, class: usize, width: usize) -> Result<Vec<f64>, ClassifyError> {
        let rest = self.next(keyword)?;
        let (idx, values) = rest.split_once(' ').unwrap_or((rest.as_str(), ""));
        if self.parse::<usize>(idx, "class index")? != class {
            return Err(self.err(format!("expected row for class {class}")));
        }
        self.floats(values, width)
    }

    fn read(mut self) -> Result<NaiveBayesModel, ClassifyError> {
        let version = self.next(MODEL_MAGIC)?;
        if self.parse::<u32>(&version, "version")? != MODEL_VERSION {
            return Err(self.err(format!("unsupported model version {version}")));
        }
        let flavor: Flavor = {
            let s = self.next("flavor")?;
            s.parse().map_err(|_| self.err(format!("invalid flavor {s:?}")))?
        };
        let vocab = self.next("vocab")?;
        let (size, fingerprint) = vocab
            .split_once(' ')
            .ok_or_else(|| self.err("vocab line needs size and fingerprint"))?;
        let vocab_size: usize = self.parse(size, "vocabulary size")?;
        let k: usize = {
            let s = self.next("classes")?;
            self.parse(&s, "class count")?
        };
        if k == 0 {
            return Err(self.err("model has no classes"));
        }
        let mut class_names = Vec::with_capacity(k);
        for _ in 0..k {
            class_names.push(self.next("class")?);
        }
        let log_prior = {
            let s = self.next("prior")?;
            self.floats(&s, k)?
        };
        let mut log_present = Vec::with_capacity(k);
        for c in 0..k {
            log_present.push(self.row("present", c, vocab_size)?);
        }
        let mut log_absent = Vec::with_capacity(k);
        let mut absent_total = Vec::with_capacity(k);
        for c in 0..k {
            match flavor {
                Flavor::Bernoulli => {
                    let row = self.row("absent", c, vocab_size)?;
                    absent_total.push(row.iter().sum());
                    log_absent.push(row);
                }
                Flavor::Multinomial => {
                    log_absent.push(Vec::new());
                    absent_total.push(0.0);
                }
            }
        }
        self.next("end")?;
        Ok(NaiveBayesModel {
            flavor,
            class_names,
            log_prior,
            log_present,
            log_absent,
            absent_total,
            vocab_size,
            vocab_fingerprint: fingerprint.to_string(),
        })
    }
}
