//! Confusion matrices and accuracy / precision / recall / F-measure.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("true and predicted label sequences differ in length ({truth} vs {predicted})")]
    LengthMismatch { truth: usize, predicted: usize },
    #[error("label {0:?} is not one of the evaluated classes")]
    UnknownLabel(String),
    #[error("nothing to evaluate: no labels")]
    Empty,
    #[error("unknown F-measure mode {0:?} (expected harmonic or geometric)")]
    UnknownFMode(String),
    #[error("unknown averaging mode {0:?} (expected macro, micro or weighted)")]
    UnknownAverage(String),
}

/// How precision and recall are combined into one F value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FMode {
    /// 2PR / (P + R)
    #[default]
    Harmonic,
    /// sqrt(PR)
    Geometric,
}

impl FMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FMode::Harmonic => "harmonic",
            FMode::Geometric => "geometric",
        }
    }

    pub fn combine(self, precision: f64, recall: f64) -> f64 {
        if precision == recall {
            return precision;
        }
        match self {
            FMode::Harmonic => {
                let sum = precision + recall;
                if sum == 0.0 {
                    0.0
                } else {
                    2.0 * precision * recall / sum
                }
            }
            FMode::Geometric => (precision * recall).sqrt(),
        }
    }
}

impl fmt::Display for FMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FMode {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "harmonic" => Ok(FMode::Harmonic),
            "geometric" => Ok(FMode::Geometric),
            _ => Err(EvalError::UnknownFMode(s.to_string())),
        }
    }
}

/// Multi-class averaging mode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Average {
    #[default]
    Macro,
    Micro,
    Weighted,
}

impl Average {
    pub fn as_str(self) -> &'static str {
        match self {
            Average::Macro => "macro",
            Average::Micro => "micro",
            Average::Weighted => "weighted",
        }
    }
}

impl fmt::Display for Average {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Average {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "macro" => Ok(Average::Macro),
            "micro" => Ok(Average::Micro),
            "weighted" => Ok(Average::Weighted),
            _ => Err(EvalError::UnknownAverage(s.to_string())),
        }
    }
}

/// `counts[i][j]` = documents of true class `i` predicted as class `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    classes: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn from_labels<T, P>(truth: &[T], predicted: &[P], classes: &[String]) -> Result<Self, EvalError>
    where
        T: AsRef<str>,
        P: AsRef<str>,
    {
        if truth.len() != predicted.len() {
            return Err(EvalError::LengthMismatch {
                truth: truth.len(),
                predicted: predicted.len(),
            });
        }
        if truth.is_empty() {
            return Err(EvalError::Empty);
        }
        let index = |label: &str| {
            classes
                .iter()
                .position(|c| c == label)
                .ok_or_else(|| EvalError::UnknownLabel(label.to_string()))
        };
        let mut counts = vec![vec![0u64; classes.len()]; classes.len()];
        for (t, p) in truth.iter().zip(predicted) {
            counts[index(t.as_ref())?][index(p.as_ref())?] += 1;
        }
        Ok(Self {
            classes: classes.to_vec(),
            counts,
        })
    }

    /// Panics if `counts` is not square with one row per class.
    pub fn from_counts(classes: Vec<String>, counts: Vec<Vec<u64>>) -> Self {
        assert_eq!(counts.len(), classes.len(), "one row per class");
        assert!(counts.iter().all(|r| r.len() == classes.len()), "square matrix");
        Self { classes, counts }
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn true_positives(&self, class: usize) -> u64 {
        self.counts[class][class]
    }

    /// Predicted as `class` but truly something else.
    pub fn false_positives(&self, class: usize) -> u64 {
        self.column_sum(class) - self.counts[class][class]
    }

    /// Truly `class` but predicted as something else.
    pub fn false_negatives(&self, class: usize) -> u64 {
        self.support(class) - self.counts[class][class]
    }

    /// Number of documents whose true class is `class`.
    pub fn support(&self, class: usize) -> u64 {
        self.counts[class].iter().sum()
    }

    fn column_sum(&self, class: usize) -> u64 {
        self.counts.iter().map(|r| r[class]).sum()
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn accuracy(m: &ConfusionMatrix) -> Result<f64, EvalError> {
    match m.total() {
        0 => Err(EvalError::Empty),
        total => Ok(ratio(m.trace(), total)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    #[serde(rename = "macro")]
    pub macro_avg: Prf,
    #[serde(rename = "micro")]
    pub micro_avg: Prf,
    #[serde(rename = "weighted")]
    pub weighted_avg: Prf,
}

impl Averages {
    pub fn get(&self, mode: Average) -> Prf {
        match mode {
            Average::Macro => self.macro_avg,
            Average::Micro => self.micro_avg,
            Average::Weighted => self.weighted_avg,
        }
    }
}

/// Per-class precision, recall and F. A 0/0 ratio is 0; the second element
/// lists a warning for each such cell.
pub fn per_class_metrics(m: &ConfusionMatrix, f_mode: FMode) -> (Vec<ClassMetrics>, Vec<String>) {
    let mut warnings = Vec::new();
    let metrics = m
        .classes
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let tp = m.true_positives(c);
            let predicted = tp + m.false_positives(c);
            let actual = tp + m.false_negatives(c);
            if predicted == 0 {
                warnings.push(format!("precision of class {name} is 0/0 (never predicted); set to 0"));
            }
            if actual == 0 {
                warnings.push(format!("recall of class {name} is 0/0 (no true documents); set to 0"));
            }
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, actual);
            ClassMetrics {
                class: name.clone(),
                precision,
                recall,
                f_measure: f_mode.combine(precision, recall),
                support: actual,
            }
        })
        .collect();
    (metrics, warnings)
}

/// Macro (unweighted mean), weighted (by true-class support) and micro
/// (pooled TP/FP/FN) averages.
pub fn aggregate(per_class: &[ClassMetrics], m: &ConfusionMatrix, f_mode: FMode) -> Averages {
    let k = per_class.len().max(1) as f64;
    let mean = |f: fn(&ClassMetrics) -> f64| per_class.iter().map(f).sum::<f64>() / k;
    let macro_avg = Prf {
        precision: mean(|c| c.precision),
        recall: mean(|c| c.recall),
        f_measure: mean(|c| c.f_measure),
    };

    let total_support: u64 = per_class.iter().map(|c| c.support).sum();
    let weighted = |f: fn(&ClassMetrics) -> f64| {
        if total_support == 0 {
            0.0
        } else {
            per_class.iter().map(|c| c.support as f64 * f(c)).sum::<f64>() / total_support as f64
        }
    };
    let weighted_avg = Prf {
        precision: weighted(|c| c.precision),
        recall: weighted(|c| c.recall),
        f_measure: weighted(|c| c.f_measure),
    };

    let n = m.classes().len();
    let tp: u64 = (0..n).map(|c| m.true_positives(c)).sum();
    let fp: u64 = (0..n).map(|c| m.false_positives(c)).sum();
    let fneg: u64 = (0..n).map(|c| m.false_negatives(c)).sum();
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fneg);
    let micro_avg = Prf {
        precision,
        recall,
        f_measure: f_mode.combine(precision, recall),
    };

    Averages {
        macro_avg,
        micro_avg,
        weighted_avg,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub averaged: Averages,
    pub f_mode: FMode,
    pub confusion: ConfusionMatrix,
    pub warnings: Vec<String>,
}

impl MetricsReport {
    pub fn from_confusion(confusion: ConfusionMatrix, f_mode: FMode) -> Result<Self, EvalError> {
        let accuracy = accuracy(&confusion)?;
        let (per_class, warnings) = per_class_metrics(&confusion, f_mode);
        let averaged = aggregate(&per_class, &confusion, f_mode);
        Ok(Self {
            accuracy,
            per_class,
            averaged,
            f_mode,
            confusion,
            warnings,
        })
    }

    pub fn evaluate<T, P>(truth: &[T], predicted: &[P], classes: &[String], f_mode: FMode) -> Result<Self, EvalError>
    where
        T: AsRef<str>,
        P: AsRef<str>,
    {
        Self::from_confusion(ConfusionMatrix::from_labels(truth, predicted, classes)?, f_mode)
    }
}
