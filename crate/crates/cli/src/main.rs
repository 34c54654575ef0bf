//! `atc` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use atc_core::corpus::load_corpus;
use atc_core::harness::{
    directional_check, emit_report, pipeline_for, run_experiment, run_grid, ConfigOverrides, ExperimentConfig,
    HarnessError, OnOff, ReportFormat, Toggle,
};
use atc_core::textprep::{normalize, preprocess, AffixTable, LightStemmer};
use atc_core::{Average, FMode, Flavor, WeightingScheme};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "atc", version, about = "Arabic text classification experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus utilities
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
    /// Run a single experiment
    Run(RunArgs),
    /// Run the four weighting × stop-word experiments on one split
    Grid(RunArgs),
    /// Light-stem words (after normalization)
    Stem {
        #[arg(required = true)]
        words: Vec<String>,
        #[arg(long)]
        affixes: Option<PathBuf>,
        #[arg(long, default_value_t = atc_core::textprep::DEFAULT_MIN_STEM_LENGTH)]
        min_stem_length: usize,
    },
    /// Print the token list of a document, one token per line
    Prep {
        file: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Check that a directory is a loadable corpus and list its categories
    Validate { root: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl From<Switch> for Toggle {
    fn from(s: Switch) -> Self {
        Toggle::Word(match s {
            Switch::On => OnOff::On,
            Switch::Off => OnOff::Off,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightingArg {
    Binary,
    Tf,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Bernoulli,
    Multinomial,
}

#[derive(Clone, Copy, ValueEnum)]
enum FModeArg {
    Harmonic,
    Geometric,
}

#[derive(Clone, Copy, ValueEnum)]
enum AverageArg {
    Macro,
    Micro,
    Weighted,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Markdown,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long, value_enum)]
    stopwords: Option<Switch>,
    #[arg(long, value_enum)]
    stem: Option<Switch>,
    /// Stop-list file (default: bundled list)
    #[arg(long)]
    stoplist: Option<PathBuf>,
    /// Affix-table file (default: bundled table)
    #[arg(long)]
    affixes: Option<PathBuf>,
    #[arg(long)]
    min_stem_length: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    /// Key-value config file; flags given on the command line override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, value_enum)]
    weighting: Option<WeightingArg>,
    #[arg(long, value_enum)]
    flavor: Option<FlavorArg>,
    /// Training fraction per category, in (0, 1)
    #[arg(long)]
    ratio: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    f_mode: Option<FModeArg>,
    /// Averaging for the Markdown table columns
    #[arg(long, value_enum)]
    average: Option<AverageArg>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write the training vocabulary (index<TAB>term) here
    #[arg(long)]
    dump_vocab: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

impl RunArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            corpus: self.corpus.clone(),
            weighting: self.weighting.map(|w| match w {
                WeightingArg::Binary => WeightingScheme::Binary,
                WeightingArg::Tf => WeightingScheme::TermFrequency,
            }),
            flavor: self.flavor.map(|f| match f {
                FlavorArg::Bernoulli => Flavor::Bernoulli,
                FlavorArg::Multinomial => Flavor::Multinomial,
            }),
            ratio: self.ratio,
            seed: self.seed,
            f_mode: self.f_mode.map(|m| match m {
                FModeArg::Harmonic => FMode::Harmonic,
                FModeArg::Geometric => FMode::Geometric,
            }),
            average: self.average.map(|a| match a {
                AverageArg::Macro => Average::Macro,
                AverageArg::Micro => Average::Micro,
                AverageArg::Weighted => Average::Weighted,
            }),
            format: self.format.map(|f| match f {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
                FormatArg::Markdown => ReportFormat::Markdown,
            }),
            ..self.pipeline.overrides()
        }
    }

    fn resolve(&self) -> Result<ExperimentConfig, HarnessError> {
        let file = match &self.config {
            Some(path) => ConfigOverrides::load(path)?,
            None => ConfigOverrides::default(),
        };
        file.merge(self.overrides()).resolve()
    }
}

impl PipelineArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            stopwords: self.stopwords.map(Toggle::from),
            stem: self.stem.map(Toggle::from),
            stoplist: self.stoplist.clone(),
            affixes: self.affixes.clone(),
            min_stem_length: self.min_stem_length,
            ..Default::default()
        }
    }
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        if e.is_data_error() {
            Failure::Data(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Corpus {
            command: CorpusCommand::Validate { root },
        } => {
            let corpus = load_corpus(&root).map_err(|e| Failure::Data(e.to_string()))?;
            for (category, n) in corpus.category_sizes() {
                println!("{category}\t{n}");
            }
            println!(
                "ok: {} categories, {} documents",
                corpus.categories().len(),
                corpus.len()
            );
        }
        Command::Run(args) => {
            let config = args.resolve()?;
            let result = run_experiment(&config)?;
            if let (Some(path), Some(vocab)) = (&args.dump_vocab, &result.vocabulary) {
                fs::write(path, vocab.dump())
                    .map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))?;
            }
            print!("{}", emit_report(std::slice::from_ref(&result), config.format)?);
        }
        Command::Grid(args) => {
            let config = args.resolve()?;
            let results = run_grid(&config)?;
            let report = emit_report(&results, config.format)?;
            print!("{report}");
            if config.format != ReportFormat::Markdown {
                for finding in directional_check(&results) {
                    eprintln!("{}", finding.describe());
                }
            }
        }
        Command::Stem {
            words,
            affixes,
            min_stem_length,
        } => {
            let table = match affixes {
                Some(path) => AffixTable::load(path).map_err(|e| Failure::Data(e.to_string()))?,
                None => AffixTable::bundled(),
            };
            let stemmer = LightStemmer::new(table, min_stem_length).map_err(|e| Failure::Usage(e.to_string()))?;
            for word in words {
                let stem = stemmer.stem(&normalize(&word));
                println!("{word}\t{stem}");
            }
        }
        Command::Prep { file, pipeline } => {
            let mut config = ExperimentConfig::new("");
            pipeline.overrides().apply_to(&mut config);
            config.validate()?;
            let pipe = pipeline_for(&config)?;
            let text = fs::read(&file).map_err(|e| Failure::Data(format!("cannot read {}: {e}", file.display())))?;
            let text =
                String::from_utf8(text).map_err(|_| Failure::Data(format!("{} is not valid UTF-8", file.display())))?;
            for token in preprocess(&text, &pipe).iter() {
                println!("{token}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
