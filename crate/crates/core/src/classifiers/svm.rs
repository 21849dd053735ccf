//! Soft-margin SVM with an RBF kernel, trained by sequential minimal
//! optimization.
//!
//! The trainer solves the dual problem
//!
//! ```text
//! min ½·αᵀQα − eᵀα   s.t.  yᵀα = 0,  0 ≤ αᵢ ≤ C,   Qᵢⱼ = yᵢyⱼK(xᵢ,xⱼ)
//! ```
//!
//! by repeatedly optimizing the maximal-violating pair: the two points with
//! the largest first-order KKT violation, ties broken by lowest index so
//! training is deterministic under any row permutation. Convergence is
//! declared when the violation gap drops below the tolerance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_dims, check_two_classes, sq_dist, ClassLabel, TrainError};
use crate::eval::stratified_kfold;

/// RBF kernel K(x,y) = exp(−‖x−y‖² / 2σ²), in (0, 1] with K(x,x) = 1.
pub fn rbf_kernel(x: &[f64], y: &[f64], sigma: f64) -> Result<f64, TrainError> {
    if x.len() != y.len() {
        return Err(TrainError::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if sigma <= 0.0 {
        return Err(TrainError::InvalidSigma(sigma));
    }
    Ok((-sq_dist(x, y) / (2.0 * sigma * sigma)).exp())
}

/// Training hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    /// Box constraint C.
    pub c: f64,
    /// Kernel width σ.
    pub sigma: f64,
    /// KKT violation gap that counts as converged.
    pub tol: f64,
    /// Pair-update budget before reporting non-convergence.
    pub max_passes: usize,
}

impl SvmParams {
    pub fn new(c: f64, sigma: f64) -> SvmParams {
        SvmParams {
            c,
            sigma,
            tol: 1e-3,
            max_passes: 10_000,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> SvmParams {
        self.tol = tol;
        self
    }

    pub fn with_max_passes(mut self, max_passes: usize) -> SvmParams {
        self.max_passes = max_passes;
        self
    }
}

/// A trained SVM: the support set, its dual coefficients αᵢyᵢ and the bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub support_vectors: Vec<Vec<f64>>,
    /// αᵢ·yᵢ per support vector.
    pub dual_coefs: Vec<f64>,
    /// αᵢ per support vector (all in (0, C]).
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub sigma: f64,
    pub c: f64,
    /// Final m(α) − M(α) violation gap at convergence.
    pub kkt_gap: f64,
    /// Pair updates spent.
    pub iterations: usize,
}

impl SvmModel {
    pub fn dim(&self) -> usize {
        self.support_vectors.first().map_or(0, Vec::len)
    }

    /// Decision value f(x) = Σ αᵢyᵢ·K(xᵢ, x) + b.
    pub fn decision(&self, x: &[f64]) -> Result<f64, TrainError> {
        let mut f = self.bias;
        for (sv, coef) in self.support_vectors.iter().zip(&self.dual_coefs) {
            f += coef * rbf_kernel(sv, x, self.sigma)?;
        }
        Ok(f)
    }

    /// Value of the dual objective Σαᵢ − ½ΣΣ αᵢαⱼyᵢyⱼK(xᵢ,xⱼ) at the
    /// trained point (zero-α terms contribute nothing).
    pub fn dual_objective(&self) -> f64 {
        let linear: f64 = self.alphas.iter().sum();
        let mut quad = 0.0;
        for i in 0..self.support_vectors.len() {
            for j in 0..self.support_vectors.len() {
                let k = rbf_kernel(
                    &self.support_vectors[i],
                    &self.support_vectors[j],
                    self.sigma,
                )
                .expect("support vectors share a dimension");
                quad += self.dual_coefs[i] * self.dual_coefs[j] * k;
            }
        }
        linear - 0.5 * quad
    }
}

/// Train on standardized features with labels mapped to ±1.
pub fn svm_train(
    x: &[Vec<f64>],
    y: &[ClassLabel],
    params: &SvmParams,
) -> Result<SvmModel, TrainError> {
    check_dims(x, y.len())?;
    check_two_classes(y)?;
    if params.c <= 0.0 {
        return Err(TrainError::InvalidC(params.c));
    }
    if params.sigma <= 0.0 {
        return Err(TrainError::InvalidSigma(params.sigma));
    }

    let n = x.len();
    let c = params.c;
    let signs: Vec<f64> = y.iter().map(|l| l.sign()).collect();

    // dense Gram matrix; training sets here are a few hundred rows
    let gram: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (-sq_dist(&x[i], &x[j]) / (2.0 * params.sigma * params.sigma)).exp())
                .collect()
        })
        .collect();

    let mut alpha = vec![0.0f64; n];
    // gradient of the dual objective: G_i = (Qα)_i − 1
    let mut grad = vec![-1.0f64; n];
    let mut iterations = 0;
    let mut gap = f64::INFINITY;

    for pass in 0..params.max_passes {
        // maximal-violating pair: i maximizes −y·G over I_up,
        // j minimizes −y·G over I_low; strict comparisons keep the
        // lowest-index extremum on ties
        let mut i_sel = None;
        let mut m_val = f64::NEG_INFINITY;
        let mut j_sel = None;
        let mut m_low = f64::INFINITY;
        for t in 0..n {
            let u = -signs[t] * grad[t];
            let in_up = (signs[t] > 0.0 && alpha[t] < c) || (signs[t] < 0.0 && alpha[t] > 0.0);
            let in_low = (signs[t] > 0.0 && alpha[t] > 0.0) || (signs[t] < 0.0 && alpha[t] < c);
            if in_up && u > m_val {
                m_val = u;
                i_sel = Some(t);
            }
            if in_low && u < m_low {
                m_low = u;
                j_sel = Some(t);
            }
        }
        let (Some(i), Some(j)) = (i_sel, j_sel) else {
            break;
        };
        gap = m_val - m_low;
        if gap < params.tol {
            iterations = pass;
            break;
        }

        let quad = (gram[i][i] + gram[j][j] - 2.0 * gram[i][j]).max(1e-12);
        // unconstrained step along α_i += y_i·t, α_j −= y_j·t
        let mut t_step = gap / quad;
        let headroom_i = if signs[i] > 0.0 { c - alpha[i] } else { alpha[i] };
        let headroom_j = if signs[j] > 0.0 { alpha[j] } else { c - alpha[j] };
        t_step = t_step.min(headroom_i).min(headroom_j);

        alpha[i] += signs[i] * t_step;
        alpha[j] -= signs[j] * t_step;
        // clamp away accumulated rounding at the box boundary
        alpha[i] = alpha[i].clamp(0.0, c);
        alpha[j] = alpha[j].clamp(0.0, c);

        for t in 0..n {
            grad[t] += signs[t] * t_step * (gram[t][i] - gram[t][j]);
        }
        iterations = pass + 1;
    }

    if gap >= params.tol {
        return Err(TrainError::NonConvergence {
            passes: params.max_passes,
        });
    }

    // bias from free support vectors when any exist, else the violation
    // interval midpoint
    let free: Vec<usize> = (0..n)
        .filter(|&t| alpha[t] > 0.0 && alpha[t] < c)
        .collect();
    let bias = if free.is_empty() {
        let mut m_val = f64::NEG_INFINITY;
        let mut m_low = f64::INFINITY;
        for t in 0..n {
            let u = -signs[t] * grad[t];
            let in_up = (signs[t] > 0.0 && alpha[t] < c) || (signs[t] < 0.0 && alpha[t] > 0.0);
            let in_low = (signs[t] > 0.0 && alpha[t] > 0.0) || (signs[t] < 0.0 && alpha[t] < c);
            if in_up {
                m_val = m_val.max(u);
            }
            if in_low {
                m_low = m_low.min(u);
            }
        }
        0.5 * (m_val + m_low)
    } else {
        free.iter().map(|&t| -signs[t] * grad[t]).sum::<f64>() / free.len() as f64
    };

    let mut support_vectors = Vec::new();
    let mut dual_coefs = Vec::new();
    let mut alphas = Vec::new();
    for t in 0..n {
        if alpha[t] > 0.0 {
            support_vectors.push(x[t].clone());
            dual_coefs.push(alpha[t] * signs[t]);
            alphas.push(alpha[t]);
        }
    }

    Ok(SvmModel {
        support_vectors,
        dual_coefs,
        alphas,
        bias,
        sigma: params.sigma,
        c,
        kkt_gap: gap.max(0.0),
        iterations,
    })
}

/// Classify `x`; ties (decision value exactly zero) resolve to positive.
pub fn svm_predict(model: &SvmModel, x: &[f64]) -> Result<(ClassLabel, f64), TrainError> {
    if x.len() != model.dim() {
        return Err(TrainError::DimensionMismatch {
            expected: model.dim(),
            got: x.len(),
        });
    }
    let f = model.decision(x)?;
    Ok((ClassLabel::from_decision(f), f))
}

/// Hyperparameter grid: every C is paired with every σ = scale·√d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmGrid {
    pub c_values: Vec<f64>,
    pub sigma_scales: Vec<f64>,
    pub inner_folds: usize,
}

impl Default for SvmGrid {
    fn default() -> Self {
        SvmGrid {
            c_values: vec![0.1, 1.0, 10.0, 100.0],
            sigma_scales: vec![0.5, 1.0, 2.0, 4.0, 8.0],
            inner_folds: 5,
        }
    }
}

/// Select (C, σ) by inner stratified cross-validation on the training data
/// only, then train the final model on all of it.
///
/// Grid points are scored by summed inner-fold accuracy; ties keep the
/// earliest point in (C, σ) iteration order, so selection is deterministic.
pub fn svm_train_grid_search(
    x: &[Vec<f64>],
    y: &[ClassLabel],
    grid: &SvmGrid,
    base: &SvmParams,
    seed: u64,
) -> Result<(SvmModel, SvmParams), TrainError> {
    let dim = check_dims(x, y.len())?;
    check_two_classes(y)?;
    let sqrt_d = (dim as f64).sqrt();

    let plan = stratified_kfold(y, grid.inner_folds, seed).map_err(|_| TrainError::SingleClass)?;

    let candidates: Vec<SvmParams> = grid
        .c_values
        .iter()
        .flat_map(|&c| {
            grid.sigma_scales
                .iter()
                .map(move |&s| SvmParams { c, sigma: s * sqrt_d, ..*base })
        })
        .collect();

    let scores: Vec<usize> = candidates
        .par_iter()
        .map(|params| {
            let mut correct = 0usize;
            for fold in 0..grid.inner_folds {
                let (train_idx, test_idx) = plan.split(fold);
                let xt: Vec<Vec<f64>> = train_idx.iter().map(|&i| x[i].clone()).collect();
                let yt: Vec<ClassLabel> = train_idx.iter().map(|&i| y[i]).collect();
                let Ok(model) = svm_train(&xt, &yt, params) else {
                    return Ok(0); // an unusable grid point scores zero
                };
                for &i in &test_idx {
                    let (label, _) = svm_predict(&model, &x[i])?;
                    if label == y[i] {
                        correct += 1;
                    }
                }
            }
            Ok(correct)
        })
        .collect::<Result<_, TrainError>>()?;

    let mut best = 0usize;
    for (i, score) in scores.iter().enumerate() {
        if *score > scores[best] {
            best = i;
        }
    }
    let chosen = candidates[best];
    let model = svm_train(x, y, &chosen)?;
    Ok((model, chosen))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(signs: &[i8]) -> Vec<ClassLabel> {
        signs
            .iter()
            .map(|s| {
                if *s > 0 {
                    ClassLabel::Positive
                } else {
                    ClassLabel::Negative
                }
            })
            .collect()
    }

    #[test]
    fn rbf_kernel_identities() {
        let x = vec![0.3, -1.2, 4.0];
        assert_eq!(rbf_kernel(&x, &x, 2.0).unwrap(), 1.0);

        // ‖x−y‖² = 2σ² pins the exponent at −1
        let sigma = 1.5f64;
        let y = vec![0.3 + (2.0f64).sqrt() * sigma, -1.2, 4.0];
        let k = rbf_kernel(&x, &y, sigma).unwrap();
        assert!((k - (-1.0f64).exp()).abs() < 1e-12);

        // hand evaluation: ‖(0,0)−(3,4)‖² = 25, σ = 5 → exp(−0.5)
        let k = rbf_kernel(&[0.0, 0.0], &[3.0, 4.0], 5.0).unwrap();
        assert!((k - (-0.5f64).exp()).abs() < 1e-12);
        assert!((k - 0.6065306597126334).abs() < 1e-12);
    }

    #[test]
    fn rbf_kernel_rejects_bad_inputs() {
        assert!(matches!(
            rbf_kernel(&[1.0], &[1.0, 2.0], 1.0),
            Err(TrainError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            rbf_kernel(&[1.0], &[1.0], 0.0),
            Err(TrainError::InvalidSigma(_))
        ));
    }

    #[test]
    fn separable_pair_is_classified_with_opposite_signs() {
        let x = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        let y = labels(&[1, -1]);
        let model = svm_train(&x, &y, &SvmParams::new(1.0, 1.0)).unwrap();
        let (l0, f0) = svm_predict(&model, &x[0]).unwrap();
        let (l1, f1) = svm_predict(&model, &x[1]).unwrap();
        assert_eq!(l0, ClassLabel::Positive);
        assert_eq!(l1, ClassLabel::Negative);
        assert!(f0 > 0.0 && f1 < 0.0);
    }

    #[test]
    fn xor_layout_is_separated_by_rbf() {
        let x = vec![
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
        ];
        let y = labels(&[1, 1, -1, -1]);
        let model = svm_train(&x, &y, &SvmParams::new(10.0, 0.5)).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            let (label, _) = svm_predict(&model, xi).unwrap();
            assert_eq!(label, *yi);
        }
        // and the corner itself is positive
        let (label, _) = svm_predict(&model, &[0.0, 0.0]).unwrap();
        assert_eq!(label, ClassLabel::Positive);
    }

    #[test]
    fn free_support_vectors_sit_on_the_margin() {
        let x = vec![
            vec![2.0, 0.3],
            vec![1.5, -0.2],
            vec![2.5, 0.1],
            vec![-2.0, 0.2],
            vec![-1.5, -0.4],
            vec![-2.4, 0.0],
        ];
        let y = labels(&[1, 1, 1, -1, -1, -1]);
        let params = SvmParams::new(10.0, 1.0).with_tol(1e-8);
        let model = svm_train(&x, &y, &params).unwrap();
        let mut found_free = false;
        for (sv, (&a, &coef)) in model
            .support_vectors
            .iter()
            .zip(model.alphas.iter().zip(&model.dual_coefs))
        {
            if a > 1e-9 && a < model.c - 1e-9 {
                found_free = true;
                let f = model.decision(sv).unwrap();
                let sign = coef.signum();
                assert!((f - sign).abs() < 1e-6, "margin {f} for sign {sign}");
            }
        }
        assert!(found_free, "expected at least one free support vector");
    }

    #[test]
    fn far_away_points_decide_by_bias() {
        let x = vec![vec![1.0], vec![0.8], vec![-1.0], vec![-0.8]];
        let y = labels(&[1, 1, -1, -1]);
        let model = svm_train(&x, &y, &SvmParams::new(1.0, 0.5)).unwrap();
        let far = vec![1e6];
        let (_, f) = svm_predict(&model, &far).unwrap();
        assert!((f - model.bias).abs() < 1e-12);
    }

    #[test]
    fn kkt_gap_is_within_tolerance() {
        let x: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()])
            .collect();
        let y = labels(&(0..30).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect::<Vec<_>>());
        let params = SvmParams::new(5.0, 1.0).with_tol(1e-4);
        let model = svm_train(&x, &y, &params).unwrap();
        assert!(model.kkt_gap <= 1e-4, "gap {}", model.kkt_gap);
        for a in &model.alphas {
            assert!(*a > 0.0 && *a <= model.c);
        }
    }

    #[test]
    fn training_is_invariant_under_row_permutation() {
        let x: Vec<Vec<f64>> = (0..24)
            .map(|i| vec![(i as f64 * 0.37).sin() * 2.0, (i as f64 * 0.91).cos()])
            .collect();
        let y = labels(&(0..24).map(|i| if i % 3 == 0 { 1 } else { -1 }).collect::<Vec<_>>());
        let params = SvmParams::new(3.0, 1.2).with_tol(1e-8);
        let a = svm_train(&x, &y, &params).unwrap();

        let perm: Vec<usize> = (0..24).map(|i| (i * 7 + 3) % 24).collect();
        let xp: Vec<Vec<f64>> = perm.iter().map(|&i| x[i].clone()).collect();
        let yp: Vec<ClassLabel> = perm.iter().map(|&i| y[i]).collect();
        let b = svm_train(&xp, &yp, &params).unwrap();

        for (i, xi) in x.iter().enumerate() {
            let fa = a.decision(xi).unwrap();
            let fb = b.decision(xi).unwrap();
            assert!((fa - fb).abs() < 1e-6, "i={i}: {fa} vs {fb}");
        }
    }

    #[test]
    fn larger_c_never_hurts_training_accuracy_when_separable() {
        let x: Vec<Vec<f64>> = (0..20)
            .map(|i| {
                let side = if i < 10 { 1.0 } else { -1.0 };
                vec![side * (2.0 + (i % 10) as f64 * 0.1), (i as f64 * 0.3).sin()]
            })
            .collect();
        let y = labels(&(0..20).map(|i| if i < 10 { 1 } else { -1 }).collect::<Vec<_>>());
        let mut prev_errors = usize::MAX;
        for c in [0.1, 1.0, 10.0, 100.0] {
            let model = svm_train(&x, &y, &SvmParams::new(c, 1.0)).unwrap();
            let errors = x
                .iter()
                .zip(&y)
                .filter(|(xi, yi)| svm_predict(&model, xi).unwrap().0 != **yi)
                .count();
            assert!(errors <= prev_errors, "C={c}: {errors} > {prev_errors}");
            prev_errors = errors;
        }
    }

    #[test]
    fn rejects_single_class_and_bad_params() {
        let x = vec![vec![1.0], vec![2.0]];
        let y = labels(&[1, 1]);
        assert!(matches!(
            svm_train(&x, &y, &SvmParams::new(1.0, 1.0)),
            Err(TrainError::SingleClass)
        ));
        let y = labels(&[1, -1]);
        assert!(matches!(
            svm_train(&x, &y, &SvmParams::new(-1.0, 1.0)),
            Err(TrainError::InvalidC(_))
        ));
        assert!(matches!(
            svm_train(&x, &y, &SvmParams::new(1.0, 0.0)),
            Err(TrainError::InvalidSigma(_))
        ));
    }

    #[test]
    fn predict_checks_dimensions() {
        let x = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        let y = labels(&[1, -1]);
        let model = svm_train(&x, &y, &SvmParams::new(1.0, 1.0)).unwrap();
        assert!(matches!(
            svm_predict(&model, &[1.0]),
            Err(TrainError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn grid_search_picks_a_working_point_deterministically() {
        // two noisy blobs, trivially separable at sane hyperparameters
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..20 {
            let jitter = (i as f64 * 0.77).sin() * 0.2;
            x.push(vec![3.0 + jitter, 2.0 - jitter]);
            y.push(ClassLabel::Positive);
            x.push(vec![-3.0 - jitter, -2.0 + jitter]);
            y.push(ClassLabel::Negative);
        }
        let base = SvmParams::new(1.0, 1.0);
        let (m1, p1) = svm_train_grid_search(&x, &y, &SvmGrid::default(), &base, 9).unwrap();
        let (_, p2) = svm_train_grid_search(&x, &y, &SvmGrid::default(), &base, 9).unwrap();
        assert_eq!(p1, p2);
        let correct = x
            .iter()
            .zip(&y)
            .filter(|(xi, yi)| svm_predict(&m1, xi).unwrap().0 == **yi)
            .count();
        assert_eq!(correct, x.len());
    }
}
