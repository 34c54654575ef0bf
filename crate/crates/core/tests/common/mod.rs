//! Shared helpers for integration tests.
//!
//! `oracle` evaluates both naive Bayes flavors directly in probability space
//! from raw token lists. It shares no code with the library: vocabulary,
//! counting, smoothing and normalization are all redone here.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use atc_core::classify::{Flavor, NaiveBayesModel};
use atc_core::features::{vectorize, Vocabulary, WeightingScheme};
use atc_core::textprep::TokenList;
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

pub fn mini_corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/mini-corpus")
}

pub fn test_data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// Single-letter terms for tiny corpora.
pub const TERMS: [&str; 4] = ["ب", "ت", "ج", "د"];

#[derive(Debug, Clone)]
pub struct TinyCorpus {
    pub n_classes: usize,
    /// (tokens, class index)
    pub train: Vec<(Vec<&'static str>, usize)>,
    pub test: Vec<Vec<&'static str>>,
}

impl TinyCorpus {
    pub fn class_names(&self) -> Vec<String> {
        (0..self.n_classes).map(|c| format!("c{c}")).collect()
    }
}

fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// ≤ 3 classes, ≤ 6 training documents (each class has one), ≤ 4 distinct
/// terms, at least one training token.
pub fn random_tiny_corpus(rng: &mut ChaCha8Rng) -> TinyCorpus {
    loop {
        let n_classes = 1 + below(rng, 3);
        let n_docs = n_classes + below(rng, 7 - n_classes);
        let n_terms = 1 + below(rng, 4);
        let doc = |rng: &mut ChaCha8Rng| -> Vec<&'static str> {
            let len = below(rng, 6);
            (0..len).map(|_| TERMS[below(rng, n_terms)]).collect()
        };
        let train: Vec<_> = (0..n_docs)
            .map(|i| {
                let class = if i < n_classes { i } else { below(rng, n_classes) };
                (doc(rng), class)
            })
            .collect();
        if train.iter().all(|(d, _)| d.is_empty()) {
            continue;
        }
        let test = (0..3)
            .map(|_| {
                // occasionally include a term never seen in training
                let mut d = doc(rng);
                if below(rng, 4) == 0 {
                    d.push("ظ");
                }
                d
            })
            .collect();
        return TinyCorpus { n_classes, train, test };
    }
}

fn weight(doc: &[&str], term: &str, scheme: WeightingScheme) -> u32 {
    let n = doc.iter().filter(|t| **t == term).count() as u32;
    match scheme {
        WeightingScheme::TermFrequency => n,
        WeightingScheme::Binary => n.min(1),
    }
}

/// Normalized posteriors computed with plain products of probabilities.
pub fn oracle(corpus: &TinyCorpus, flavor: Flavor, scheme: WeightingScheme, doc: &[&str]) -> Vec<f64> {
    let vocab: Vec<&str> = corpus
        .train
        .iter()
        .flat_map(|(d, _)| d.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let v = vocab.len() as f64;
    let n = corpus.train.len() as f64;

    let joint: Vec<f64> = (0..corpus.n_classes)
        .map(|c| {
            let docs: Vec<&Vec<&str>> = corpus.train.iter().filter(|(_, k)| *k == c).map(|(d, _)| d).collect();
            let prior = docs.len() as f64 / n;
            match flavor {
                Flavor::Multinomial => {
                    let total: f64 = vocab
                        .iter()
                        .map(|t| docs.iter().map(|d| weight(d, t, scheme) as f64).sum::<f64>())
                        .sum();
                    let mut p = prior;
                    for t in &vocab {
                        let count: f64 = docs.iter().map(|d| weight(d, t, scheme) as f64).sum();
                        let phi = (count + 1.0) / (total + v);
                        p *= phi.powi(weight(doc, t, scheme) as i32);
                    }
                    p
                }
                Flavor::Bernoulli => {
                    let mut p = prior;
                    for t in &vocab {
                        let containing = docs.iter().filter(|d| d.contains(t)).count() as f64;
                        let theta = (containing + 1.0) / (docs.len() as f64 + 2.0);
                        p *= if doc.contains(t) { theta } else { 1.0 - theta };
                    }
                    p
                }
            }
        })
        .collect();
    let z: f64 = joint.iter().sum();
    joint.iter().map(|j| j / z).collect()
}

fn token_list(words: &[&str]) -> TokenList {
    TokenList::new(words.iter().map(|w| w.to_string()).collect()).unwrap()
}

/// Library route: vocabulary, vectorize, train, predict.
pub fn library(corpus: &TinyCorpus, flavor: Flavor, scheme: WeightingScheme) -> (NaiveBayesModel, Vec<Vec<f64>>) {
    let classes = corpus.class_names();
    let train_lists: Vec<TokenList> = corpus.train.iter().map(|(d, _)| token_list(d)).collect();
    let vocab = Vocabulary::build(&train_lists).unwrap();
    let vectors: Vec<_> = train_lists.iter().map(|t| vectorize(t, &vocab, scheme)).collect();
    let labels: Vec<&str> = corpus.train.iter().map(|(_, c)| classes[*c].as_str()).collect();
    let model = NaiveBayesModel::train(flavor, &classes, vectors.iter().zip(labels), &vocab).unwrap();
    let posteriors = corpus
        .test
        .iter()
        .map(|d| {
            model
                .predict(&vectorize(&token_list(d), &vocab, scheme))
                .unwrap()
                .posteriors
        })
        .collect();
    (model, posteriors)
}

pub fn max_relative_error(got: &[f64], want: &[f64]) -> f64 {
    got.iter()
        .zip(want)
        .map(|(g, w)| {
            let diff = (g - w).abs();
            if diff == 0.0 {
                0.0
            } else {
                diff / w.abs().max(f64::MIN_POSITIVE)
            }
        })
        .fold(0.0, f64::max)
}
