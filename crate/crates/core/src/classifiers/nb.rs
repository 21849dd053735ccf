//! Gaussian naive Bayes: per-class, per-feature Gaussians under the
//! feature-independence assumption, evaluated in the log domain.

use serde::{Deserialize, Serialize};

use super::{check_dims, check_two_classes, ClassLabel, TrainError};

/// Per-class priors and smoothed per-feature Gaussians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub prior_positive: f64,
    pub prior_negative: f64,
    pub mean_positive: Vec<f64>,
    pub mean_negative: Vec<f64>,
    /// Smoothed variances (raw class variance + epsilon), all positive.
    pub var_positive: Vec<f64>,
    pub var_negative: Vec<f64>,
    pub epsilon: f64,
}

impl NbModel {
    pub fn dim(&self) -> usize {
        self.mean_positive.len()
    }

    /// Log posterior numerators (positive, negative) for one row.
    pub fn log_posteriors(&self, x: &[f64]) -> Result<(f64, f64), TrainError> {
        if x.len() != self.dim() {
            return Err(TrainError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let ln_2pi = (2.0 * std::f64::consts::PI).ln();
        let mut pos = self.prior_positive.ln();
        let mut neg = self.prior_negative.ln();
        for (f, &xf) in x.iter().enumerate() {
            let dp = xf - self.mean_positive[f];
            pos += -0.5 * (ln_2pi + self.var_positive[f].ln()) - dp * dp / (2.0 * self.var_positive[f]);
            let dn = xf - self.mean_negative[f];
            neg += -0.5 * (ln_2pi + self.var_negative[f].ln()) - dn * dn / (2.0 * self.var_negative[f]);
        }
        Ok((pos, neg))
    }
}

fn class_moments(x: &[Vec<f64>], y: &[ClassLabel], class: ClassLabel, dim: usize) -> (usize, Vec<f64>, Vec<f64>) {
    let rows: Vec<&Vec<f64>> = x
        .iter()
        .zip(y)
        .filter(|(_, l)| **l == class)
        .map(|(r, _)| r)
        .collect();
    let n = rows.len();
    let mut mean = vec![0.0; dim];
    for row in &rows {
        for (m, v) in mean.iter_mut().zip(row.iter()) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut var = vec![0.0; dim];
    for row in &rows {
        for ((s, v), m) in var.iter_mut().zip(row.iter()).zip(&mean) {
            let d = v - m;
            *s += d * d;
        }
    }
    for s in &mut var {
        *s /= n as f64;
    }
    (n, mean, var)
}

/// Fit class priors and per-feature Gaussians. `epsilon` is an absolute
/// variance floor added to every class variance; `None` uses
/// 1e-9 × (largest per-feature variance of the whole training set).
pub fn nb_train(
    x: &[Vec<f64>],
    y: &[ClassLabel],
    epsilon: Option<f64>,
) -> Result<NbModel, TrainError> {
    let dim = check_dims(x, y.len())?;
    check_two_classes(y)?;
    if let Some(e) = epsilon {
        if e < 0.0 || !e.is_finite() {
            return Err(TrainError::InvalidEpsilon(e));
        }
    }

    let (n_pos, mean_positive, raw_var_pos) = class_moments(x, y, ClassLabel::Positive, dim);
    let (n_neg, mean_negative, raw_var_neg) = class_moments(x, y, ClassLabel::Negative, dim);

    let epsilon = epsilon.unwrap_or_else(|| {
        let n = x.len() as f64;
        let mut overall_mean = vec![0.0; dim];
        for row in x {
            for (m, v) in overall_mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut overall_mean {
            *m /= n;
        }
        let mut max_var = 0.0f64;
        for f in 0..dim {
            let var: f64 = x.iter().map(|r| (r[f] - overall_mean[f]).powi(2)).sum::<f64>() / n;
            max_var = max_var.max(var);
        }
        1e-9 * max_var
    });

    // guard against an all-constant training matrix where epsilon itself is 0
    let floor = if epsilon > 0.0 { epsilon } else { 1e-300 };
    let var_positive: Vec<f64> = raw_var_pos.iter().map(|v| (v + epsilon).max(floor)).collect();
    let var_negative: Vec<f64> = raw_var_neg.iter().map(|v| (v + epsilon).max(floor)).collect();

    let total = (n_pos + n_neg) as f64;
    Ok(NbModel {
        prior_positive: n_pos as f64 / total,
        prior_negative: n_neg as f64 / total,
        mean_positive,
        mean_negative,
        var_positive,
        var_negative,
        epsilon,
    })
}

/// Argmax of the log posteriors; exact ties resolve to positive.
pub fn nb_predict(model: &NbModel, x: &[f64]) -> Result<ClassLabel, TrainError> {
    let (pos, neg) = model.log_posteriors(x)?;
    Ok(if pos >= neg {
        ClassLabel::Positive
    } else {
        ClassLabel::Negative
    })
}
