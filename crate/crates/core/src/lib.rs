//! Arabic text classification toolkit.
//!
//! The pipeline runs in five stages, each in its own module:
//!
//! * [`corpus`] loads a directory-per-category collection and splits it.
//! * [`textprep`] normalizes, tokenizes, filters stop words and light-stems.
//! * [`features`] builds the vocabulary and binary or term-frequency vectors.
//! * [`classify`] trains and applies Bernoulli and Multinomial naive Bayes.
//! * [`eval`] computes the confusion matrix, accuracy, precision, recall and F.
//!
//! [`harness`] wires them together and runs the weighting × stop-word grid.

pub mod classify;
pub mod corpus;
pub mod eval;
pub mod features;
pub mod harness;
pub mod textprep;

pub use classify::{ClassifyError, Flavor, NaiveBayesModel, Prediction};
pub use corpus::{load_corpus, stratified_split, Corpus, CorpusError, Document, Split};
pub use eval::{Average, ConfusionMatrix, EvalError, FMode, MetricsReport};
pub use features::{vectorize, FeatureError, FeatureVector, Vocabulary, WeightingScheme};
pub use harness::{
    emit_report, run_experiment, run_grid, ExperimentConfig, ExperimentResult, HarnessError, ReportFormat,
};
pub use textprep::{preprocess, PrepError, TokenList, TokenPipelineConfig};
