//! Three from-scratch binary classifiers plus feature standardization.
//!
//! * [`svm`] — soft-margin SVM with an RBF kernel, trained by sequential
//!   minimal optimization with maximal-violating-pair working-set selection.
//! * [`knn`] — k-nearest neighbors with Euclidean distance and
//!   index-ordered tie breaking.
//! * [`nb`] — Gaussian naive Bayes with variance smoothing, evaluated in
//!   the log domain.
//!
//! Every trainer takes standardized features. The [`Standardizer`] is
//! always fitted on training folds only and then applied to test folds;
//! this is the single place feature scaling happens, so leakage checks
//! have one thing to inspect.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod knn;
pub mod nb;
pub mod svm;

pub use knn::{knn_predict, knn_train, KnnModel};
pub use nb::{nb_predict, nb_train, NbModel};
pub use svm::{rbf_kernel, svm_predict, svm_train, svm_train_grid_search, SvmGrid, SvmModel, SvmParams};

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("training data contains a single class; both classes are required")]
    SingleClass,
    #[error("SMO did not converge within {passes} pair updates")]
    NonConvergence { passes: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("kernel width must be positive, got {0}")]
    InvalidSigma(f64),
    #[error("box constraint C must be positive, got {0}")]
    InvalidC(f64),
    #[error("k must be odd, positive and at most the training size {n}, got {k}")]
    InvalidK { k: usize, n: usize },
    #[error("variance smoothing must be nonnegative, got {0}")]
    InvalidEpsilon(f64),
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("model file {path}: {detail}")]
    ModelFormat { path: String, detail: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Binary class tag. `Positive` is the non-seizure class (sets A–D),
/// `Negative` the seizure class (set E).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    Positive,
    Negative,
}

impl ClassLabel {
    pub fn sign(self) -> f64 {
        match self {
            ClassLabel::Positive => 1.0,
            ClassLabel::Negative => -1.0,
        }
    }

    /// Label for a decision value; exact zero resolves to `Positive`.
    pub fn from_decision(value: f64) -> ClassLabel {
        if value >= 0.0 {
            ClassLabel::Positive
        } else {
            ClassLabel::Negative
        }
    }
}

pub(crate) fn check_dims(x: &[Vec<f64>], y_len: usize) -> Result<usize, TrainError> {
    if x.is_empty() {
        return Err(TrainError::EmptyTrainingSet);
    }
    if x.len() != y_len {
        return Err(TrainError::DimensionMismatch {
            expected: x.len(),
            got: y_len,
        });
    }
    let dim = x[0].len();
    for row in x {
        if row.len() != dim {
            return Err(TrainError::DimensionMismatch {
                expected: dim,
                got: row.len(),
            });
        }
    }
    Ok(dim)
}

pub(crate) fn check_two_classes(y: &[ClassLabel]) -> Result<(), TrainError> {
    let pos = y.contains(&ClassLabel::Positive);
    let neg = y.contains(&ClassLabel::Negative);
    if pos && neg {
        Ok(())
    } else {
        Err(TrainError::SingleClass)
    }
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Per-feature location/scale statistics fitted on training data.
///
/// Features with zero training variance pass through unscaled and are
/// flagged in `constant`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
    pub constant: Vec<bool>,
}

impl Standardizer {
    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn apply_row(&self, row: &[f64]) -> Vec<f64> {
        debug_assert_eq!(row.len(), self.dim());
        row.iter()
            .zip(self.means.iter().zip(&self.scales))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    pub fn apply(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        x.iter().map(|row| self.apply_row(row)).collect()
    }
}

/// Fit per-feature mean and sample standard deviation (N−1 denominator).
pub fn standardize_fit(x: &[Vec<f64>]) -> Standardizer {
    assert!(!x.is_empty(), "standardize_fit on empty matrix");
    let n = x.len() as f64;
    let dim = x[0].len();
    let mut means = vec![0.0; dim];
    for row in x {
        for (m, v) in means.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let mut scales = vec![0.0; dim];
    for row in x {
        for ((s, v), m) in scales.iter_mut().zip(row).zip(&means) {
            let d = v - m;
            *s += d * d;
        }
    }
    let mut constant = vec![false; dim];
    for (s, c) in scales.iter_mut().zip(&mut constant) {
        let var = if x.len() > 1 { *s / (n - 1.0) } else { 0.0 };
        if var > 0.0 {
            *s = var.sqrt();
        } else {
            *s = 1.0;
            *c = true;
        }
    }
    Standardizer {
        means,
        scales,
        constant,
    }
}

/// See [`Standardizer::apply`].
pub fn standardize_apply(s: &Standardizer, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
    s.apply(x)
}

/// A trained classifier together with the standardization fitted alongside
/// it, serializable as a versioned self-describing JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub format_version: u32,
    pub standardizer: Standardizer,
    pub model: ModelKind,
}

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Svm(SvmModel),
    Knn(KnnModel),
    Nb(NbModel),
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Svm(_) => "svm",
            ModelKind::Knn(_) => "knn",
            ModelKind::Nb(_) => "nb",
        }
    }
}

impl TrainedModel {
    pub fn new(standardizer: Standardizer, model: ModelKind) -> TrainedModel {
        TrainedModel {
            format_version: MODEL_FORMAT_VERSION,
            standardizer,
            model,
        }
    }

    /// Standardize a raw feature row and classify it. The margin is the raw
    /// SVM decision value; k-NN and naive Bayes report no margin.
    pub fn predict(&self, raw_row: &[f64]) -> Result<(ClassLabel, Option<f64>), TrainError> {
        let row = self.standardizer.apply_row(raw_row);
        match &self.model {
            ModelKind::Svm(m) => {
                let (label, margin) = svm_predict(m, &row)?;
                Ok((label, Some(margin)))
            }
            ModelKind::Knn(m) => Ok((knn_predict(m, &row)?, None)),
            ModelKind::Nb(m) => Ok((nb_predict(m, &row)?, None)),
        }
    }
}

/// Serialize a model to disk (JSON, full round-trip numeric precision).
pub fn save_model(path: &Path, model: &TrainedModel) -> Result<(), TrainError> {
    let json = serde_json::to_string_pretty(model).expect("model serialization cannot fail");
    std::fs::write(path, json).map_err(|source| TrainError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Load a model saved by [`save_model`], rejecting unknown format versions.
pub fn load_model(path: &Path) -> Result<TrainedModel, TrainError> {
    let text = std::fs::read_to_string(path).map_err(|source| TrainError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let model: TrainedModel =
        serde_json::from_str(&text).map_err(|e| TrainError::ModelFormat {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?;
    if model.format_version != MODEL_FORMAT_VERSION {
        return Err(TrainError::ModelFormat {
            path: path.display().to_string(),
            detail: format!(
                "unsupported format version {}, expected {}",
                model.format_version, MODEL_FORMAT_VERSION
            ),
        });
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standardize_centers_and_scales() {
        let x = vec![vec![2.0], vec![4.0], vec![6.0]];
        let s = standardize_fit(&x);
        assert_eq!(s.means, vec![4.0]);
        assert_eq!(s.scales, vec![2.0]);
        let t = s.apply(&x);
        assert_eq!(t, vec![vec![-1.0], vec![0.0], vec![1.0]]);
    }

    #[test]
    fn transformed_training_set_has_zero_mean_unit_std() {
        let x: Vec<Vec<f64>> = (0..40)
            .map(|i| {
                let v = i as f64;
                vec![3.0 * v + 1.0, (v * 0.7).sin() * 50.0, -v * v]
            })
            .collect();
        let s = standardize_fit(&x);
        let t = s.apply(&x);
        let n = t.len() as f64;
        for col in 0..3 {
            let mean: f64 = t.iter().map(|r| r[col]).sum::<f64>() / n;
            let var: f64 = t.iter().map(|r| (r[col] - mean).powi(2)).sum::<f64>() / (n - 1.0);
            assert!(mean.abs() < 1e-9, "col {col} mean {mean}");
            assert!((var.sqrt() - 1.0).abs() < 1e-9, "col {col} std {}", var.sqrt());
        }
    }

    #[test]
    fn constant_column_passes_through_flagged() {
        let x = vec![vec![5.0, 1.0], vec![5.0, 2.0], vec![5.0, 3.0]];
        let s = standardize_fit(&x);
        assert_eq!(s.constant, vec![true, false]);
        let t = s.apply(&x);
        for row in &t {
            assert_eq!(row[0], 0.0); // centered but unscaled
        }
    }

    #[test]
    fn model_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let x = vec![
            vec![0.1, -2.25],
            vec![1.7, 3.5],
            vec![-0.9, 0.125],
            vec![2.3, -1.5],
        ];
        let y = vec![
            ClassLabel::Positive,
            ClassLabel::Positive,
            ClassLabel::Negative,
            ClassLabel::Negative,
        ];
        let s = standardize_fit(&x);
        let xs = s.apply(&x);

        let svm = svm_train(&xs, &y, &SvmParams::new(10.0, 1.0)).unwrap();
        let knn = knn_train(xs.clone(), y.clone(), 1).unwrap();
        let nb = nb_train(&xs, &y, None).unwrap();

        for model in [
            TrainedModel::new(s.clone(), ModelKind::Svm(svm)),
            TrainedModel::new(s.clone(), ModelKind::Knn(knn)),
            TrainedModel::new(s.clone(), ModelKind::Nb(nb)),
        ] {
            let path = dir.path().join(format!("{}.json", model.model.name()));
            save_model(&path, &model).unwrap();
            let loaded = load_model(&path).unwrap();
            assert_eq!(loaded, model);
            for row in &x {
                assert_eq!(
                    loaded.predict(row).unwrap().0,
                    model.predict(row).unwrap().0
                );
            }
        }
    }

    #[test]
    fn all_three_classifiers_fit_a_separable_toy_problem_perfectly() {
        let x: Vec<Vec<f64>> = (0..16)
            .map(|i| {
                let side = if i % 2 == 0 { 1.0 } else { -1.0 };
                vec![side * (3.0 + (i / 2) as f64 * 0.2), (i as f64 * 0.4).sin()]
            })
            .collect();
        let y: Vec<ClassLabel> = (0..16)
            .map(|i| {
                if i % 2 == 0 {
                    ClassLabel::Positive
                } else {
                    ClassLabel::Negative
                }
            })
            .collect();
        let svm = svm_train(&x, &y, &SvmParams::new(100.0, 1.0)).unwrap();
        let knn = knn_train(x.clone(), y.clone(), 1).unwrap();
        let nb = nb_train(&x, &y, None).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert_eq!(crate::classifiers::svm_predict(&svm, xi).unwrap().0, *yi);
            assert_eq!(knn_predict(&knn, xi).unwrap(), *yi);
            assert_eq!(nb_predict(&nb, xi).unwrap(), *yi);
        }
    }

    #[test]
    fn unknown_format_version_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        std::fs::write(
            &path,
            r#"{"format_version":99,"standardizer":{"means":[],"scales":[],"constant":[]},"model":{"kind":"knn","k":1,"x":[],"y":[]}}"#,
        )
        .unwrap();
        assert!(matches!(
            load_model(&path),
            Err(TrainError::ModelFormat { .. })
        ));
    }
}
