//! Pipeline configuration: defaults, optional TOML config file, command-line
//! overrides (flags win). Everything is validated before any computation.

use std::path::{Path, PathBuf};

use clap::Args;
use ictal_core::dwt::ExtensionMode;
use ictal_core::eval::{Aggregation, CaseRunConfig};
use ictal_core::features::{DegeneratePolicy, FeatureConfig, SkewnessMode};
use ictal_core::ingest::{CaseId, CORPUS_FS};
use ictal_core::pipeline::PipelineParams;
use serde::Deserialize;

use crate::error::CliError;

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML config file; explicit flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory holding the corpus files {Z,O,N,F,S}{001..100}.txt
    #[arg(long)]
    pub corpus_dir: Option<PathBuf>,
    /// Use a deterministic synthetic surrogate corpus instead of files
    #[arg(long)]
    pub synthetic: bool,
    /// Base seed; all randomness in a run flows from it
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory for CSVs, reports and plots
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Butterworth order (even, 2..=12)
    #[arg(long)]
    pub filter_order: Option<usize>,
    /// Low-pass cutoff in Hz
    #[arg(long)]
    pub cutoff_hz: Option<f64>,
    /// Wavelet decomposition levels
    #[arg(long)]
    pub levels: Option<usize>,
    /// Boundary extension: symmetric or periodic
    #[arg(long)]
    pub extension: Option<String>,
    /// Tolerate corpus files that are not exactly 4097 lines
    #[arg(long)]
    pub lenient: bool,
    /// Substitute 0 for the skewness statistic of a zero-variance band
    /// instead of failing
    #[arg(long)]
    pub degenerate_zero: bool,
    /// Use the conventional third-moment skewness instead of the default
    /// fourth-moment statistic
    #[arg(long)]
    pub skewness_third_moment: bool,
}

/// Flags of the `evaluate` subcommand.
#[derive(Debug, Clone, Args, Default)]
pub struct EvaluateArgs {
    /// Classifier to run: svm, knn, nb or all
    #[arg(long)]
    pub classifier: Option<String>,
    /// Case to run: 1..4 or all
    #[arg(long)]
    pub case: Option<String>,
    /// SVM box constraint C (with --grid-search off)
    #[arg(long)]
    pub svm_c: Option<f64>,
    /// SVM kernel width sigma (with --grid-search off; default sqrt(dim))
    #[arg(long)]
    pub svm_sigma: Option<f64>,
    /// Neighbors for k-NN (odd)
    #[arg(long)]
    pub knn_k: Option<usize>,
    /// Absolute variance smoothing for naive Bayes (default: 1e-9 x max
    /// training variance)
    #[arg(long)]
    pub nb_epsilon: Option<f64>,
    /// Nested hyperparameter selection for the SVM: on or off
    #[arg(long)]
    pub grid_search: Option<String>,
    /// Cross-validation folds
    #[arg(long)]
    pub folds: Option<usize>,
    /// Independent repetitions of the full k-fold pass
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// Fold aggregation: micro (sum confusions) or macro (average metrics)
    #[arg(long)]
    pub aggregation: Option<String>,
}

/// Optional config file contents; every field mirrors a flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    corpus_dir: Option<PathBuf>,
    synthetic: Option<bool>,
    seed: Option<u64>,
    out_dir: Option<PathBuf>,
    filter_order: Option<usize>,
    cutoff_hz: Option<f64>,
    levels: Option<usize>,
    extension: Option<String>,
    lenient: Option<bool>,
    degenerate_zero: Option<bool>,
    skewness_third_moment: Option<bool>,
    classifier: Option<String>,
    case: Option<String>,
    svm_c: Option<f64>,
    svm_sigma: Option<f64>,
    knn_k: Option<usize>,
    nb_epsilon: Option<f64>,
    grid_search: Option<String>,
    folds: Option<usize>,
    repetitions: Option<usize>,
    aggregation: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierChoice {
    All,
    Svm,
    Knn,
    Nb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseChoice {
    All,
    One(CaseId),
}

impl CaseChoice {
    pub fn cases(self) -> Vec<CaseId> {
        match self {
            CaseChoice::All => CaseId::ALL.to_vec(),
            CaseChoice::One(c) => vec![c],
        }
    }
}

/// Fully validated configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub corpus_dir: PathBuf,
    pub synthetic: bool,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub filter_order: usize,
    pub cutoff_hz: f64,
    pub levels: usize,
    pub mode: ExtensionMode,
    pub strict: bool,
    pub features: FeatureConfig,
    pub classifier: ClassifierChoice,
    pub case: CaseChoice,
    pub svm_c: Option<f64>,
    pub svm_sigma: Option<f64>,
    pub knn_k: usize,
    pub nb_epsilon: Option<f64>,
    pub grid_search: bool,
    pub folds: usize,
    pub repetitions: usize,
    pub aggregation: Aggregation,
}

impl Resolved {
    pub fn pipeline_params(&self) -> PipelineParams {
        PipelineParams {
            filter_order: self.filter_order,
            cutoff_hz: self.cutoff_hz,
            levels: self.levels,
            mode: self.mode,
            features: self.features,
        }
    }

    pub fn run_config(&self) -> CaseRunConfig {
        CaseRunConfig {
            folds: self.folds,
            repetitions: self.repetitions,
            base_seed: self.seed,
            aggregation: self.aggregation,
        }
    }
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("config: {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("config: {}: {e}", path.display())))
}

pub fn resolve(common: &CommonArgs, eval: &EvaluateArgs) -> Result<Resolved, CliError> {
    let file = load_file_config(common.config.as_deref())?;
    let usage = |msg: String| CliError::Usage(format!("config: {msg}"));

    let filter_order = common.filter_order.or(file.filter_order).unwrap_or(4);
    if !(2..=12).contains(&filter_order) || !filter_order.is_multiple_of(2) {
        return Err(usage(format!(
            "filter order must be even and within 2..=12, got {filter_order}"
        )));
    }
    let cutoff_hz = common.cutoff_hz.or(file.cutoff_hz).unwrap_or(60.0);
    if !(cutoff_hz > 0.0 && cutoff_hz < CORPUS_FS / 2.0) {
        return Err(usage(format!(
            "cutoff must lie in (0, {}), got {cutoff_hz}",
            CORPUS_FS / 2.0
        )));
    }
    let levels = common.levels.or(file.levels).unwrap_or(4);
    if !(1..=10).contains(&levels) {
        return Err(usage(format!("levels must be within 1..=10, got {levels}")));
    }
    let mode = match common
        .extension
        .clone()
        .or(file.extension)
        .unwrap_or_else(|| "symmetric".to_string())
        .as_str()
    {
        "symmetric" => ExtensionMode::Symmetric,
        "periodic" => ExtensionMode::Periodic,
        other => return Err(usage(format!("unknown extension mode {other:?}"))),
    };

    let classifier = match eval
        .classifier
        .clone()
        .or(file.classifier)
        .unwrap_or_else(|| "all".to_string())
        .as_str()
    {
        "all" => ClassifierChoice::All,
        "svm" => ClassifierChoice::Svm,
        "knn" => ClassifierChoice::Knn,
        "nb" => ClassifierChoice::Nb,
        other => return Err(usage(format!("unknown classifier {other:?}"))),
    };
    let case = match eval
        .case
        .clone()
        .or(file.case)
        .unwrap_or_else(|| "all".to_string())
        .as_str()
    {
        "all" => CaseChoice::All,
        n => {
            let id = n
                .parse::<u8>()
                .ok()
                .and_then(CaseId::from_number)
                .ok_or_else(|| usage(format!("case must be 1..4 or \"all\", got {n:?}")))?;
            CaseChoice::One(id)
        }
    };

    let svm_c = eval.svm_c.or(file.svm_c);
    if let Some(c) = svm_c {
        if c <= 0.0 {
            return Err(usage(format!("svm C must be positive, got {c}")));
        }
    }
    let svm_sigma = eval.svm_sigma.or(file.svm_sigma);
    if let Some(s) = svm_sigma {
        if s <= 0.0 {
            return Err(usage(format!("svm sigma must be positive, got {s}")));
        }
    }
    let knn_k = eval.knn_k.or(file.knn_k).unwrap_or(5);
    if knn_k == 0 || knn_k.is_multiple_of(2) {
        return Err(usage(format!("knn k must be odd and positive, got {knn_k}")));
    }
    let nb_epsilon = eval.nb_epsilon.or(file.nb_epsilon);
    if let Some(e) = nb_epsilon {
        if e < 0.0 {
            return Err(usage(format!("nb epsilon must be nonnegative, got {e}")));
        }
    }
    let grid_search = match eval
        .grid_search
        .clone()
        .or(file.grid_search)
        .unwrap_or_else(|| "on".to_string())
        .as_str()
    {
        "on" => true,
        "off" => false,
        other => return Err(usage(format!("grid-search must be on or off, got {other:?}"))),
    };
    let folds = eval.folds.or(file.folds).unwrap_or(10);
    if folds < 2 {
        return Err(usage(format!("folds must be at least 2, got {folds}")));
    }
    let repetitions = eval.repetitions.or(file.repetitions).unwrap_or(10);
    if repetitions == 0 {
        return Err(usage("repetitions must be at least 1".to_string()));
    }
    let aggregation = match eval
        .aggregation
        .clone()
        .or(file.aggregation)
        .unwrap_or_else(|| "micro".to_string())
        .as_str()
    {
        "micro" => Aggregation::MicroOverFolds,
        "macro" => Aggregation::MacroOverFolds,
        other => return Err(usage(format!("aggregation must be micro or macro, got {other:?}"))),
    };

    let features = FeatureConfig {
        skewness: if common.skewness_third_moment || file.skewness_third_moment.unwrap_or(false) {
            SkewnessMode::ThirdMoment
        } else {
            SkewnessMode::FourthMomentMinus3
        },
        degenerate: if common.degenerate_zero || file.degenerate_zero.unwrap_or(false) {
            DegeneratePolicy::SubstituteZero
        } else {
            DegeneratePolicy::Error
        },
    };

    Ok(Resolved {
        corpus_dir: common
            .corpus_dir
            .clone()
            .or(file.corpus_dir)
            .unwrap_or_else(|| PathBuf::from("data")),
        synthetic: common.synthetic || file.synthetic.unwrap_or(false),
        seed: common.seed.or(file.seed).unwrap_or(42),
        out_dir: common
            .out_dir
            .clone()
            .or(file.out_dir)
            .unwrap_or_else(|| PathBuf::from("out")),
        filter_order,
        cutoff_hz,
        levels,
        mode,
        strict: !(common.lenient || file.lenient.unwrap_or(false)),
        features,
        classifier,
        case,
        svm_c,
        svm_sigma,
        knn_k,
        nb_epsilon,
        grid_search,
        folds,
        repetitions,
        aggregation,
    })
}
