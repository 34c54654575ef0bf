//! Shared fixtures for the criterion benches.

use std::path::PathBuf;

use atc_core::{
    load_corpus, preprocess, stratified_split, vectorize, Corpus, FeatureVector, TokenList, TokenPipelineConfig,
    Vocabulary, WeightingScheme,
};

pub fn mini_corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/mini-corpus")
}

/// The mini corpus split with the default ratio and seed, preprocessed and
/// vectorized with TF weights.
pub struct Fixture {
    pub corpus: Corpus,
    pub pipeline: TokenPipelineConfig,
    pub vocab: Vocabulary,
    pub train: Vec<(FeatureVector, String)>,
    pub test: Vec<FeatureVector>,
}

impl Fixture {
    pub fn load() -> Self {
        let corpus = load_corpus(mini_corpus_path()).expect("mini corpus loads");
        let split = stratified_split(&corpus, 0.7, 42).expect("mini corpus splits");
        let pipeline = TokenPipelineConfig::default();
        let train_tokens: Vec<(TokenList, String)> = split
            .train_docs(&corpus)
            .map(|d| (preprocess(&d.text, &pipeline), d.label.clone()))
            .collect();
        let vocab = Vocabulary::build(train_tokens.iter().map(|(t, _)| t)).expect("non-empty vocabulary");
        let train = train_tokens
            .iter()
            .map(|(t, l)| (vectorize(t, &vocab, WeightingScheme::TermFrequency), l.clone()))
            .collect();
        let test = split
            .test_docs(&corpus)
            .map(|d| vectorize(&preprocess(&d.text, &pipeline), &vocab, WeightingScheme::TermFrequency))
            .collect();
        Self {
            corpus,
            pipeline,
            vocab,
            train,
            test,
        }
    }
}
