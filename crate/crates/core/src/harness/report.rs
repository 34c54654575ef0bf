use std::fmt::Write as _;

use super::{ExperimentResult, HarnessError, ReportFormat};
use crate::features::WeightingScheme;

/// Three decimals, ties to even on the value scaled by 1000.
pub fn format_3dp(x: f64) -> String {
    let scaled = (x * 1000.0).round_ties_even();
    let sign = if scaled < 0.0 { "-" } else { "" };
    let n = scaled.abs() as u64;
    format!("{sign}{}.{:03}", n / 1000, n % 1000)
}

pub fn emit_report(results: &[ExperimentResult], format: ReportFormat) -> Result<String, HarnessError> {
    if results.is_empty() {
        return Err(HarnessError::EmptyResults);
    }
    Ok(match format {
        ReportFormat::Json => json_report(results),
        ReportFormat::Csv => csv_report(results),
        ReportFormat::Markdown => markdown_report(results),
    })
}

/// One object for a single result, an array otherwise. Floats keep full
/// precision.
fn json_report(results: &[ExperimentResult]) -> String {
    let value = if let [single] = results {
        serde_json::to_value(single)
    } else {
        serde_json::to_value(results)
    }
    .expect("results serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("json renders");
    out.push('\n');
    out
}

const CSV_HEADER: &str = "experiment,weighting,stopwords,flavor,stem,ratio,seed,f_mode,\
train_documents,test_documents,vocabulary_size,accuracy,\
macro_precision,macro_recall,macro_f,micro_precision,micro_recall,micro_f,\
weighted_precision,weighted_recall,weighted_f";

/// One row per experiment. Wall-clock time is left out so that reruns
/// produce identical bytes.
fn csv_report(results: &[ExperimentResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in results {
        let c = &r.config;
        let a = &r.metrics.averaged;
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.experiment,
            c.weighting,
            if c.remove_stopwords { "on" } else { "off" },
            c.flavor,
            if c.stem { "on" } else { "off" },
            c.ratio,
            c.seed,
            c.f_mode,
            r.counts.train_documents,
            r.counts.test_documents,
            r.vocabulary_size,
            r.metrics.accuracy,
        );
        for prf in [a.macro_avg, a.micro_avg, a.weighted_avg] {
            let _ = write!(out, ",{},{},{}", prf.precision, prf.recall, prf.f_measure);
        }
        out.push('\n');
    }
    out
}

fn markdown_report(results: &[ExperimentResult]) -> String {
    let first = &results[0].config;
    let avg = first.average;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Classifier: {} naive Bayes. Split: ratio {}, seed {}. Stemming: {}. F-measure: {} mean. Averaging: {}.",
        first.flavor,
        first.ratio,
        first.seed,
        if first.stem { "on" } else { "off" },
        first.f_mode,
        avg,
    );
    if results.len() > 1 {
        out.push_str(
            "Split and classifier are identical in every row; only the weighting scheme and stop-word removal change.\n",
        );
    }
    out.push('\n');
    out.push_str("| Experiment | Accuracy | Recall | Precision | F-measure |\n");
    out.push_str("|---|---|---|---|---|\n");
    for r in results {
        let prf = r.metrics.averaged.get(avg);
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            r.experiment,
            format_3dp(r.metrics.accuracy),
            format_3dp(prf.recall),
            format_3dp(prf.precision),
            format_3dp(prf.f_measure),
        );
    }
    let legend: Vec<String> = results
        .iter()
        .map(|r| {
            format!(
                "{} = {} weighting, stop words {}",
                r.experiment,
                match r.config.weighting {
                    WeightingScheme::Binary => "binary",
                    WeightingScheme::TermFrequency => "TF",
                },
                if r.config.remove_stopwords { "removed" } else { "kept" },
            )
        })
        .collect();
    let _ = writeln!(out, "\n{}.", legend.join("; "));

    let warnings: usize = results.iter().map(|r| r.metrics.warnings.len()).sum();
    if warnings > 0 {
        let _ = writeln!(out, "\n{warnings} metric cell(s) were 0/0 and reported as 0.");
    }
    for finding in directional_check(results) {
        let _ = writeln!(out, "\n{}", finding.describe());
    }
    out
}

/// Whether removing stop words raised accuracy for one weighting scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalFinding {
    pub weighting: WeightingScheme,
    pub accuracy_with_removal: f64,
    pub accuracy_without_removal: f64,
}

impl DirectionalFinding {
    pub fn holds(&self) -> bool {
        self.accuracy_with_removal > self.accuracy_without_removal
    }

    pub fn describe(&self) -> String {
        format!(
            "Stop-word removal under {} weighting: accuracy {} with removal vs {} without; \
             removal-improves-accuracy {}.",
            self.weighting,
            format_3dp(self.accuracy_with_removal),
            format_3dp(self.accuracy_without_removal),
            if self.holds() { "holds" } else { "does not hold" },
        )
    }
}

/// Compares the stop-word on/off cells that share a weighting scheme.
/// Informational only; the outcome depends on the corpus.
pub fn directional_check(results: &[ExperimentResult]) -> Vec<DirectionalFinding> {
    [WeightingScheme::TermFrequency, WeightingScheme::Binary]
        .into_iter()
        .filter_map(|w| {
            let find = |removal: bool| {
                results
                    .iter()
                    .find(|r| r.config.weighting == w && r.config.remove_stopwords == removal)
                    .map(|r| r.metrics.accuracy)
            };
            Some(DirectionalFinding {
                weighting: w,
                accuracy_with_removal: find(true)?,
                accuracy_without_removal: find(false)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_decimals_half_even() {
        assert_eq!(format_3dp(0.953), "0.953");
        assert_eq!(format_3dp(1.0), "1.000");
        assert_eq!(format_3dp(0.0), "0.000");
        assert_eq!(format_3dp(5.0 / 6.0), "0.833");
        // 0.0625 * 1000 = 62.5 exactly: ties to even
        assert_eq!(format_3dp(0.0625), "0.062");
        assert_eq!(format_3dp(0.1875), "0.188");
    }

    #[test]
    fn empty_results_rejected() {
        assert!(matches!(
            emit_report(&[], ReportFormat::Csv),
            Err(HarnessError::EmptyResults)
        ));
    }

    #[test]
    fn csv_header_has_one_column_per_value() {
        assert_eq!(CSV_HEADER.split(',').count(), 21);
    }
}
