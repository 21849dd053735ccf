//! End-to-end feature extraction for whole segments: Butterworth band
//! limiting, 4-level db4 decomposition, 50-entry feature vector.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dwt::{decompose, DwtError, ExtensionMode};
use crate::features::{feature_vector, FeatureConfig, FeatureError, FeatureVector};
use crate::ingest::EegSegment;
use crate::preprocess::{design_butterworth_lowpass, filtfilt, FilterError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("preprocess: {0}")]
    Filter(#[from] FilterError),
    #[error("dwt: {0}")]
    Dwt(#[from] DwtError),
    #[error("features: {0}")]
    Feature(#[from] FeatureError),
}

/// Knobs of the extraction chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub filter_order: usize,
    pub cutoff_hz: f64,
    pub levels: usize,
    pub mode: ExtensionMode,
    pub features: FeatureConfig,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            filter_order: 4,
            cutoff_hz: 60.0,
            levels: 4,
            mode: ExtensionMode::Symmetric,
            features: FeatureConfig::default(),
        }
    }
}

/// Band-limit one segment with the zero-phase Butterworth low-pass.
pub fn band_limit(segment: &EegSegment, params: &PipelineParams) -> Result<Vec<f64>, PipelineError> {
    let cascade = design_butterworth_lowpass(params.filter_order, params.cutoff_hz, segment.fs)?;
    Ok(filtfilt(&cascade, &segment.samples)?)
}

/// Extract the feature vector of one segment, labeled with its set.
pub fn segment_features(
    segment: &EegSegment,
    params: &PipelineParams,
) -> Result<FeatureVector, PipelineError> {
    let filtered = band_limit(segment, params)?;
    let tree = decompose(&filtered, params.levels, params.mode)?;
    Ok(feature_vector(&tree, segment.set_id, &params.features)?)
}

/// Extract features for many segments in parallel; output order matches
/// input order, so results are independent of scheduling.
pub fn extract_features(
    segments: &[EegSegment],
    params: &PipelineParams,
) -> Result<Vec<FeatureVector>, PipelineError> {
    segments
        .par_iter()
        .map(|seg| segment_features(seg, params))
        .collect()
}
