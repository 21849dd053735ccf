//! EEG seizure-detection pipeline.
//!
//! The library implements the full chain used to separate ictal from
//! non-ictal single-channel EEG segments:
//!
//! 1. [`ingest`] — load the Bonn-style corpus (or synthesize surrogate
//!    segments) into [`EegSegment`] values.
//! 2. [`preprocess`] — band-limit each segment to 0–60 Hz with a zero-phase
//!    Butterworth low-pass.
//! 3. [`dwt`] — 4-level db4 wavelet decomposition into the five sub-bands
//!    D1 (gamma) … A4 (delta), with per-band reconstruction.
//! 4. [`features`] — ten statistics per band, assembled into a
//!    50-dimensional [`FeatureVector`].
//! 5. [`classifiers`] — soft-margin SVM (RBF kernel, SMO trainer),
//!    k-nearest neighbors and Gaussian naive Bayes, plus feature
//!    standardization.
//! 6. [`eval`] — repeated stratified 10-fold cross-validation over the four
//!    one-vs-E cases with confusion-matrix accounting.
//!
//! All stages are pure functions over immutable inputs; segments, trees and
//! trained models can be shared freely across threads.

pub mod classifiers;
pub mod dwt;
pub mod eval;
pub mod features;
pub mod ingest;
pub mod pipeline;
pub mod preprocess;

pub use classifiers::{
    ClassLabel, KnnModel, NbModel, Standardizer, SvmModel, TrainError, TrainedModel,
};
pub use dwt::{BandId, DecompositionTree, DwtError, ExtensionMode, WaveletFilterPair};
pub use eval::{CaseReport, ConfusionMatrix, EvalError, FoldPlan, Metrics};
pub use features::{BandFeatures, FeatureError, FeatureVector, FEATURE_COUNT};
pub use ingest::{CaseId, CaseSpec, EegSegment, IngestError, SegmentCollection, SetId};
pub use pipeline::{PipelineError, PipelineParams};
pub use preprocess::{BiquadCascade, FilterError};
