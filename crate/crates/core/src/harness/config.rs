use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::classify::Flavor;
use crate::corpus::{DEFAULT_SEED, DEFAULT_SPLIT_RATIO};
use crate::eval::{Average, FMode};
use crate::features::WeightingScheme;
use crate::textprep::DEFAULT_MIN_STEM_LENGTH;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    #[default]
    Markdown,
}

impl ReportFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "markdown",
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            _ => Err(HarnessError::UnknownFormat(s.to_string())),
        }
    }
}

/// Everything needed to rerun one experiment exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub corpus_root: PathBuf,
    pub weighting: WeightingScheme,
    pub remove_stopwords: bool,
    pub flavor: Flavor,
    pub ratio: f64,
    pub seed: u64,
    pub stem: bool,
    pub min_stem_length: usize,
    /// `None` selects the bundled stop list.
    pub stoplist: Option<PathBuf>,
    /// `None` selects the bundled affix table.
    pub affixes: Option<PathBuf>,
    pub f_mode: FMode,
    /// Averaging used for the Recall/Precision/F-measure columns of the
    /// Markdown table. JSON and CSV always carry all three.
    pub average: Average,
    pub format: ReportFormat,
}

impl ExperimentConfig {
    /// Defaults: TF weighting, stop-word removal on, Multinomial NB,
    /// 70/30 split with seed 42, stemming on.
    pub fn new(corpus_root: impl Into<PathBuf>) -> Self {
        Self {
            corpus_root: corpus_root.into(),
            weighting: WeightingScheme::TermFrequency,
            remove_stopwords: true,
            flavor: Flavor::Multinomial,
            ratio: DEFAULT_SPLIT_RATIO,
            seed: DEFAULT_SEED,
            stem: true,
            min_stem_length: DEFAULT_MIN_STEM_LENGTH,
            stoplist: None,
            affixes: None,
            f_mode: FMode::Harmonic,
            average: Average::Macro,
            format: ReportFormat::Markdown,
        }
    }

    /// Rejects settings that can never run, before any data is touched.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(HarnessError::Config(format!(
                "split ratio {} is outside the open interval (0, 1)",
                self.ratio
            )));
        }
        if self.min_stem_length == 0 {
            return Err(HarnessError::Config("min-stem-length must be at least 1".into()));
        }
        Ok(())
    }

    /// Position of this (weighting, stop-word) pair in the four-experiment
    /// grid, 1-based.
    pub fn experiment_number(&self) -> usize {
        match (self.weighting, self.remove_stopwords) {
            (WeightingScheme::TermFrequency, true) => 1,
            (WeightingScheme::Binary, true) => 2,
            (WeightingScheme::Binary, false) => 3,
            (WeightingScheme::TermFrequency, false) => 4,
        }
    }

    pub fn experiment_name(&self) -> String {
        format!("Exp.{}", self.experiment_number())
    }

    /// The four grid cells in Exp.1..Exp.4 order. Everything except the
    /// weighting scheme and the stop-word toggle is copied from `self`.
    pub fn grid(&self) -> [ExperimentConfig; 4] {
        let cell = |weighting, remove_stopwords| ExperimentConfig {
            weighting,
            remove_stopwords,
            ..self.clone()
        };
        [
            cell(WeightingScheme::TermFrequency, true),
            cell(WeightingScheme::Binary, true),
            cell(WeightingScheme::Binary, false),
            cell(WeightingScheme::TermFrequency, false),
        ]
    }
}

/// `on`/`off` switch that also accepts `true`/`false`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Toggle {
    Bool(bool),
    Word(OnOff),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OnOff {
    On,
    Off,
}

impl Toggle {
    pub fn enabled(self) -> bool {
        matches!(self, Toggle::Bool(true) | Toggle::Word(OnOff::On))
    }
}

/// Partial configuration: a config file or a set of command-line flags.
/// Unset fields leave the base value untouched.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigOverrides {
    pub corpus: Option<PathBuf>,
    pub weighting: Option<WeightingScheme>,
    pub stopwords: Option<Toggle>,
    pub flavor: Option<Flavor>,
    pub ratio: Option<f64>,
    pub seed: Option<u64>,
    pub stem: Option<Toggle>,
    pub min_stem_length: Option<usize>,
    pub stoplist: Option<PathBuf>,
    pub affixes: Option<PathBuf>,
    pub f_mode: Option<FMode>,
    pub average: Option<Average>,
    pub format: Option<ReportFormat>,
}

impl ConfigOverrides {
    /// Reads a TOML key-value file. Relative paths inside it are resolved
    /// against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read config file {}: {e}", path.display())))?;
        let mut parsed = Self::parse(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        for p in [&mut parsed.corpus, &mut parsed.stoplist, &mut parsed.affixes]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(parsed)
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Layers `other` on top of `self`: set fields in `other` win.
    pub fn merge(self, other: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            corpus: other.corpus.or(self.corpus),
            weighting: other.weighting.or(self.weighting),
            stopwords: other.stopwords.or(self.stopwords),
            flavor: other.flavor.or(self.flavor),
            ratio: other.ratio.or(self.ratio),
            seed: other.seed.or(self.seed),
            stem: other.stem.or(self.stem),
            min_stem_length: other.min_stem_length.or(self.min_stem_length),
            stoplist: other.stoplist.or(self.stoplist),
            affixes: other.affixes.or(self.affixes),
            f_mode: other.f_mode.or(self.f_mode),
            average: other.average.or(self.average),
            format: other.format.or(self.format),
        }
    }

    /// Builds a full config on top of the defaults. The corpus root is
    /// the only required key.
    pub fn resolve(self) -> Result<ExperimentConfig, HarnessError> {
        let corpus = self
            .corpus
            .clone()
            .ok_or_else(|| HarnessError::Config("no corpus root given".into()))?;
        let mut cfg = ExperimentConfig::new(corpus);
        self.apply_to(&mut cfg);
        Ok(cfg)
    }

    pub fn apply_to(self, cfg: &mut ExperimentConfig) {
        if let Some(v) = self.corpus {
            cfg.corpus_root = v;
        }
        if let Some(v) = self.weighting {
            cfg.weighting = v;
        }
        if let Some(v) = self.stopwords {
            cfg.remove_stopwords = v.enabled();
        }
        if let Some(v) = self.flavor {
            cfg.flavor = v;
        }
        if let Some(v) = self.ratio {
            cfg.ratio = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.stem {
            cfg.stem = v.enabled();
        }
        if let Some(v) = self.min_stem_length {
            cfg.min_stem_length = v;
        }
        if let Some(v) = self.stoplist {
            cfg.stoplist = Some(v);
        }
        if let Some(v) = self.affixes {
            cfg.affixes = Some(v);
        }
        if let Some(v) = self.f_mode {
            cfg.f_mode = v;
        }
        if let Some(v) = self.average {
            cfg.average = v;
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
    }
}
