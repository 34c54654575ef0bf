//! End-to-end experiment runner for the weighting × stop-word grid.
//!
//! One experiment runs load → split → preprocess(train) → vocabulary →
//! train → preprocess(test) → vectorize → predict → evaluate. The grid runs
//! the four (weighting, stop-word) cells against a single corpus load and a
//! single split, so the cells differ only in those two settings.

mod config;
mod report;

use std::error::Error as StdError;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{ConfigOverrides, ExperimentConfig, OnOff, ReportFormat, Toggle};
pub use report::{directional_check, emit_report, format_3dp, DirectionalFinding};

use crate::classify::NaiveBayesModel;
use crate::corpus::{load_corpus, stratified_split, Corpus, Split};
use crate::eval::MetricsReport;
use crate::features::{vectorize, Vocabulary};
use crate::textprep::{preprocess, AffixTable, LightStemmer, StopList, TokenList, TokenPipelineConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    LoadStoplist,
    LoadAffixes,
    LoadCorpus,
    Split,
    BuildVocabulary,
    Train,
    Predict,
    Evaluate,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::LoadStoplist => "load stop list",
            Stage::LoadAffixes => "load affix table",
            Stage::LoadCorpus => "load corpus",
            Stage::Split => "split",
            Stage::BuildVocabulary => "build vocabulary",
            Stage::Train => "train",
            Stage::Predict => "predict",
            Stage::Evaluate => "evaluate",
        })
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{stage} failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<dyn StdError + Send + Sync>,
    },
    #[error("grid cell {experiment} failed: {source}")]
    Cell {
        experiment: String,
        #[source]
        source: Box<HarnessError>,
    },
    #[error("no results to report")]
    EmptyResults,
    #[error("unknown report format {0:?} (expected json, csv or markdown)")]
    UnknownFormat(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl HarnessError {
    fn at<E: StdError + Send + Sync + 'static>(stage: Stage) -> impl FnOnce(E) -> Self {
        move |e| HarnessError::Stage {
            stage,
            source: Box::new(e),
        }
    }

    /// The failing stage, looking through grid-cell wrappers.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            HarnessError::Stage { stage, .. } => Some(*stage),
            HarnessError::Cell { source, .. } => source.stage(),
            _ => None,
        }
    }

    /// True for problems with the data on disk (corpus, stop list, affix
    /// table) as opposed to invalid settings.
    pub fn is_data_error(&self) -> bool {
        match self {
            HarnessError::Stage { .. } => true,
            HarnessError::Cell { source, .. } => source.is_data_error(),
            _ => false,
        }
    }
}

/// Document and token counts at each stage of one run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub corpus_documents: usize,
    pub train_documents: usize,
    pub test_documents: usize,
    pub train_tokens: usize,
    pub test_tokens: usize,
    /// Test tokens missing from the training vocabulary.
    pub test_oov_tokens: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub metrics: MetricsReport,
    pub vocabulary_size: usize,
    pub counts: StageCounts,
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
    pub duration_ms: f64,
    #[serde(skip)]
    pub vocabulary: Option<Vocabulary>,
}

impl ExperimentResult {
    /// Equality ignoring wall-clock time.
    pub fn same_outcome(&self, other: &ExperimentResult) -> bool {
        self.experiment == other.experiment
            && self.config == other.config
            && self.metrics == other.metrics
            && self.vocabulary_size == other.vocabulary_size
            && self.counts == other.counts
            && self.train_ids == other.train_ids
            && self.test_ids == other.test_ids
            && self.vocabulary == other.vocabulary
    }
}

/// Builds the token pipeline for `config`, reading the stop list and affix
/// table from disk when paths are given.
pub fn pipeline_for(config: &ExperimentConfig) -> Result<TokenPipelineConfig, HarnessError> {
    let stoplist = match &config.stoplist {
        Some(path) => StopList::load(path).map_err(HarnessError::at(Stage::LoadStoplist))?,
        None => StopList::bundled(),
    };
    let affixes = match &config.affixes {
        Some(path) => AffixTable::load(path).map_err(HarnessError::at(Stage::LoadAffixes))?,
        None => AffixTable::bundled(),
    };
    let stemmer = LightStemmer::new(affixes, config.min_stem_length).map_err(HarnessError::at(Stage::LoadAffixes))?;
    Ok(TokenPipelineConfig {
        remove_stopwords: config.remove_stopwords,
        stoplist,
        stem: config.stem,
        stemmer,
    })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let start = Instant::now();
    config.validate()?;
    let pipeline = pipeline_for(config)?;
    let corpus = load_corpus(&config.corpus_root).map_err(HarnessError::at(Stage::LoadCorpus))?;
    let split = stratified_split(&corpus, config.ratio, config.seed).map_err(HarnessError::at(Stage::Split))?;
    run_on_split(config, &pipeline, &corpus, &split, start)
}

/// Runs the stages after the split. `pipeline` must have been built from
/// `config`.
fn run_on_split(
    config: &ExperimentConfig,
    pipeline: &TokenPipelineConfig,
    corpus: &Corpus,
    split: &Split,
    start: Instant,
) -> Result<ExperimentResult, HarnessError> {
    let train_docs: Vec<_> = split.train_docs(corpus).collect();
    let train_tokens: Vec<TokenList> = train_docs.iter().map(|d| preprocess(&d.text, pipeline)).collect();

    let vocab = Vocabulary::build(&train_tokens).map_err(HarnessError::at(Stage::BuildVocabulary))?;
    let train_vectors: Vec<_> = train_tokens
        .iter()
        .map(|t| vectorize(t, &vocab, config.weighting))
        .collect();
    let model = NaiveBayesModel::train(
        config.flavor,
        corpus.categories(),
        train_vectors.iter().zip(train_docs.iter().map(|d| d.label.as_str())),
        &vocab,
    )
    .map_err(HarnessError::at(Stage::Train))?;

    let test_docs: Vec<_> = split.test_docs(corpus).collect();
    let test_tokens: Vec<TokenList> = test_docs.iter().map(|d| preprocess(&d.text, pipeline)).collect();
    let test_vectors: Vec<_> = test_tokens
        .iter()
        .map(|t| vectorize(t, &vocab, config.weighting))
        .collect();

    let predicted = test_vectors
        .iter()
        .map(|v| model.predict(v).map(|p| p.label))
        .collect::<Result<Vec<_>, _>>()
        .map_err(HarnessError::at(Stage::Predict))?;
    let truth: Vec<&str> = test_docs.iter().map(|d| d.label.as_str()).collect();
    let metrics = MetricsReport::evaluate(&truth, &predicted, corpus.categories(), config.f_mode)
        .map_err(HarnessError::at(Stage::Evaluate))?;

    let counts = StageCounts {
        corpus_documents: corpus.len(),
        train_documents: train_docs.len(),
        test_documents: test_docs.len(),
        train_tokens: train_tokens.iter().map(TokenList::len).sum(),
        test_tokens: test_tokens.iter().map(TokenList::len).sum(),
        test_oov_tokens: test_tokens
            .iter()
            .flat_map(|t| t.iter())
            .filter(|t| !vocab.contains(t))
            .count(),
    };

    Ok(ExperimentResult {
        experiment: config.experiment_name(),
        config: config.clone(),
        metrics,
        vocabulary_size: vocab.len(),
        counts,
        train_ids: split.train_ids(corpus),
        test_ids: split.test_ids(corpus),
        duration_ms: start.elapsed().as_secs_f64() * 1e3,
        vocabulary: Some(vocab),
    })
}

/// Runs Exp.1..Exp.4 derived from `base` (see [`ExperimentConfig::grid`]).
///
/// The corpus is loaded and split once; the four cells run on separate
/// threads and the results come back in Exp.1..Exp.4 order. If any cell
/// fails, the first failing cell in that order is reported.
pub fn run_grid(base: &ExperimentConfig) -> Result<Vec<ExperimentResult>, HarnessError> {
    base.validate()?;
    let cells = base.grid();
    let pipelines = cells.iter().map(pipeline_for).collect::<Result<Vec<_>, _>>()?;
    let corpus = load_corpus(&base.corpus_root).map_err(HarnessError::at(Stage::LoadCorpus))?;
    let split = stratified_split(&corpus, base.ratio, base.seed).map_err(HarnessError::at(Stage::Split))?;

    let outcomes: Vec<Result<ExperimentResult, HarnessError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cells
            .iter()
            .zip(&pipelines)
            .map(|(cfg, pipe)| {
                let (corpus, split) = (&corpus, &split);
                scope.spawn(move || run_on_split(cfg, pipe, corpus, split, Instant::now()))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("grid cell panicked"))
            .collect()
    });

    outcomes
        .into_iter()
        .zip(&cells)
        .map(|(r, cfg)| {
            r.map_err(|e| HarnessError::Cell {
                experiment: cfg.experiment_name(),
                source: Box::new(e),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn mini_corpus() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/mini-corpus")
    }

    #[test]
    fn unreadable_stoplist_is_stage_annotated() {
        let mut cfg = ExperimentConfig::new(mini_corpus());
        cfg.stoplist = Some("/no/such/stoplist.txt".into());
        let err = run_experiment(&cfg).unwrap_err();
        assert_eq!(err.stage(), Some(Stage::LoadStoplist));
        assert!(err.to_string().starts_with("load stop list failed"));
        assert!(err.is_data_error());

        let err = run_grid(&cfg).unwrap_err();
        assert_eq!(err.stage(), Some(Stage::LoadStoplist));
    }

    #[test]
    fn missing_corpus_and_bad_ratio() {
        let err = run_experiment(&ExperimentConfig::new("/no/such/corpus")).unwrap_err();
        assert_eq!(err.stage(), Some(Stage::LoadCorpus));
        let mut cfg = ExperimentConfig::new(mini_corpus());
        cfg.ratio = 1.0;
        let err = run_experiment(&cfg).unwrap_err();
        assert!(matches!(err, HarnessError::Config(_)));
        assert!(!err.is_data_error());
    }

    #[test]
    fn single_run_on_mini_corpus() {
        let result = run_experiment(&ExperimentConfig::new(mini_corpus())).unwrap();
        let m = &result.metrics;
        assert_eq!(result.experiment, "Exp.1");
        assert_eq!(m.averaged.micro_avg.recall, m.accuracy);
        assert!((0.0..=1.0).contains(&m.accuracy));
        assert_eq!(
            result.counts.train_documents + result.counts.test_documents,
            result.counts.corpus_documents
        );
        assert_eq!(result.vocabulary.as_ref().unwrap().len(), result.vocabulary_size);
    }
}
