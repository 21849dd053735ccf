//! k-nearest neighbors over standardized feature vectors.

use serde::{Deserialize, Serialize};

use super::{check_dims, sq_dist, ClassLabel, TrainError};

/// The stored reference set. k must be odd so binary votes cannot tie.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<ClassLabel>,
}

impl KnnModel {
    pub fn dim(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }
}

/// Validate and store the training set.
pub fn knn_train(x: Vec<Vec<f64>>, y: Vec<ClassLabel>, k: usize) -> Result<KnnModel, TrainError> {
    check_dims(&x, y.len())?;
    if k == 0 || k.is_multiple_of(2) || k > x.len() {
        return Err(TrainError::InvalidK { k, n: x.len() });
    }
    Ok(KnnModel { k, x, y })
}

/// Majority vote among the k nearest training points by Euclidean distance;
/// distance ties resolve to the lowest training index.
pub fn knn_predict(model: &KnnModel, x: &[f64]) -> Result<ClassLabel, TrainError> {
    if x.len() != model.dim() {
        return Err(TrainError::DimensionMismatch {
            expected: model.dim(),
            got: x.len(),
        });
    }
    let mut order: Vec<(f64, usize)> = model
        .x
        .iter()
        .enumerate()
        .map(|(i, xi)| (sq_dist(xi, x), i))
        .collect();
    order.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));

    let positive = order[..model.k]
        .iter()
        .filter(|(_, i)| model.y[*i] == ClassLabel::Positive)
        .count();
    Ok(if 2 * positive > model.k {
        ClassLabel::Positive
    } else {
        ClassLabel::Negative
    })
}
