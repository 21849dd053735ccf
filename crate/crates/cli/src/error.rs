//! Error classification for exit codes: 1 usage, 2 data, 3 numerical.

use ictal_core::classifiers::TrainError;
use ictal_core::eval::EvalError;
use ictal_core::features::FeatureError;
use ictal_core::ingest::IngestError;
use ictal_core::pipeline::PipelineError;
use ictal_core::preprocess::FilterError;
use ictal_core::dwt::DwtError;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration (exit 1).
    Usage(String),
    /// Missing or malformed input data (exit 2).
    Data(String),
    /// A numerical stage failed (exit 3).
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Numeric(m) => f.write_str(m),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Alias { .. } | IngestError::SynthTooShort(_) => {
                CliError::Usage(format!("ingest: {e}"))
            }
            _ => CliError::Data(format!("ingest: {e}")),
        }
    }
}

impl From<FilterError> for CliError {
    fn from(e: FilterError) -> Self {
        match e {
            FilterError::SignalTooShort { .. } => CliError::Data(format!("preprocess: {e}")),
            _ => CliError::Usage(format!("preprocess: {e}")),
        }
    }
}

impl From<DwtError> for CliError {
    fn from(e: DwtError) -> Self {
        match e {
            DwtError::SignalTooShort { .. } => CliError::Data(format!("dwt: {e}")),
            _ => CliError::Usage(format!("dwt: {e}")),
        }
    }
}

impl From<FeatureError> for CliError {
    fn from(e: FeatureError) -> Self {
        match e {
            FeatureError::Csv { .. } | FeatureError::Io { .. } => {
                CliError::Data(format!("features: {e}"))
            }
            _ => CliError::Numeric(format!("features: {e}")),
        }
    }
}

impl From<TrainError> for CliError {
    fn from(e: TrainError) -> Self {
        match e {
            TrainError::Io { .. } | TrainError::ModelFormat { .. } => {
                CliError::Data(format!("classifiers: {e}"))
            }
            _ => CliError::Numeric(format!("classifiers: {e}")),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::TooFewSamples { .. } | EvalError::InvalidFolds(_) => {
                CliError::Usage(format!("eval: {e}"))
            }
            EvalError::EmptyMatrix => CliError::Numeric(format!("eval: {e}")),
            EvalError::Train(t) => t.into(),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Filter(f) => f.into(),
            PipelineError::Dwt(d) => d.into(),
            PipelineError::Feature(f) => f.into(),
        }
    }
}

pub fn io_data(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("io: {}: {e}", path.display()))
}
