//! Repeated stratified k-fold cross-validation over the four one-vs-E cases,
//! confusion-matrix accounting and the five derived metrics.
//!
//! One repetition = one stratified fold plan; per fold the standardizer and
//! classifier (including any hyperparameter search) see only the training
//! split. Fold confusions are summed within a repetition before metrics are
//! computed (micro-averaging; [`Aggregation::MacroOverFolds`] averages
//! per-fold metrics instead). Reported metrics are the mean over
//! repetitions. Everything is deterministic for a fixed base seed, and the
//! parallel fold execution reduces in index order so results are bit-stable.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifiers::{
    knn_predict, knn_train, nb_predict, nb_train, standardize_fit, svm_predict, svm_train,
    svm_train_grid_search, ClassLabel, SvmGrid, SvmParams, TrainError,
};
use crate::ingest::CaseSpec;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{count} samples of one class cannot be stratified into {k} folds")]
    TooFewSamples { count: usize, k: usize },
    #[error("fold count must be at least 2, got {0}")]
    InvalidFolds(usize),
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error(transparent)]
    Train(#[from] TrainError),
}

/// A stratified assignment of samples to folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    /// Fold index per sample.
    pub assignments: Vec<usize>,
    pub seed: u64,
}

impl FoldPlan {
    /// Train/test index lists for one fold.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        debug_assert!(fold < self.k);
        let mut train = Vec::with_capacity(self.assignments.len());
        let mut test = Vec::new();
        for (i, &f) in self.assignments.iter().enumerate() {
            if f == fold {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (train, test)
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &f in &self.assignments {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Stratified k-fold assignment: per class, indices are shuffled with a
/// seeded generator and dealt round-robin, continuing a global cursor so
/// fold sizes stay within one sample of each other.
pub fn stratified_kfold(
    labels: &[ClassLabel],
    k: usize,
    seed: u64,
) -> Result<FoldPlan, EvalError> {
    if k < 2 {
        return Err(EvalError::InvalidFolds(k));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut assignments = vec![0usize; labels.len()];
    let mut cursor = 0usize;
    for class in [ClassLabel::Positive, ClassLabel::Negative] {
        let mut idxs: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == class)
            .map(|(i, _)| i)
            .collect();
        if idxs.len() < k {
            return Err(EvalError::TooFewSamples {
                count: idxs.len(),
                k,
            });
        }
        idxs.shuffle(&mut rng);
        for idx in idxs {
            assignments[idx] = cursor % k;
            cursor += 1;
        }
    }
    Ok(FoldPlan {
        k,
        assignments,
        seed,
    })
}

/// Binary confusion counts. Positive = non-seizure (sets A–D), negative =
/// seizure (set E).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub true_positive: u32,
    pub true_negative: u32,
    pub false_positive: u32,
    pub false_negative: u32,
}

impl ConfusionMatrix {
    pub fn record(&mut self, actual: ClassLabel, predicted: ClassLabel) {
        match (actual, predicted) {
            (ClassLabel::Positive, ClassLabel::Positive) => self.true_positive += 1,
            (ClassLabel::Negative, ClassLabel::Negative) => self.true_negative += 1,
            (ClassLabel::Negative, ClassLabel::Positive) => self.false_positive += 1,
            (ClassLabel::Positive, ClassLabel::Negative) => self.false_negative += 1,
        }
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        self.true_positive += other.true_positive;
        self.true_negative += other.true_negative;
        self.false_positive += other.false_positive;
        self.false_negative += other.false_negative;
    }

    pub fn total(&self) -> u32 {
        self.true_positive + self.true_negative + self.false_positive + self.false_negative
    }
}

/// The five metrics as percentages. A `None` marks a zero-denominator case
/// explicitly — it is never silently reported as 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: Option<f64>,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub precision: Option<f64>,
    pub f_measure: Option<f64>,
}

impl Metrics {
    /// Mean over several metric sets; a metric undefined anywhere (or a
    /// mean over nothing) is undefined in the result.
    pub fn mean(all: &[Metrics]) -> Metrics {
        fn avg(values: impl Iterator<Item = Option<f64>>, n: usize) -> Option<f64> {
            if n == 0 {
                return None;
            }
            let mut sum = 0.0;
            for v in values {
                sum += v?;
            }
            Some(sum / n as f64)
        }
        let n = all.len();
        Metrics {
            accuracy: avg(all.iter().map(|m| m.accuracy), n),
            sensitivity: avg(all.iter().map(|m| m.sensitivity), n),
            specificity: avg(all.iter().map(|m| m.specificity), n),
            precision: avg(all.iter().map(|m| m.precision), n),
            f_measure: avg(all.iter().map(|m| m.f_measure), n),
        }
    }
}

/// Accuracy, sensitivity, specificity, precision and F-measure of one
/// confusion matrix, in percent.
pub fn compute_metrics(cm: &ConfusionMatrix) -> Result<Metrics, EvalError> {
    let total = cm.total();
    if total == 0 {
        return Err(EvalError::EmptyMatrix);
    }
    let tp = cm.true_positive as f64;
    let tn = cm.true_negative as f64;
    let fp = cm.false_positive as f64;
    let fn_ = cm.false_negative as f64;

    let ratio = |num: f64, den: f64| if den > 0.0 { Some(num / den * 100.0) } else { None };
    let accuracy = Some((tp + tn) / total as f64 * 100.0);
    let sensitivity = ratio(tp, tp + fn_);
    let specificity = ratio(tn, tn + fp);
    let precision = ratio(tp, tp + fp);
    let f_measure = match (precision, sensitivity) {
        (Some(p), Some(s)) if p + s > 0.0 => Some(2.0 * p * s / (p + s)),
        _ => None,
    };
    Ok(Metrics {
        accuracy,
        sensitivity,
        specificity,
        precision,
        f_measure,
    })
}

/// How fold results combine into one repetition's metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Sum fold confusions, then compute metrics once.
    #[default]
    MicroOverFolds,
    /// Compute metrics per fold, then average them.
    MacroOverFolds,
}

/// Which classifier to run and with what configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "classifier", rename_all = "snake_case")]
pub enum ClassifierConfig {
    Svm {
        params: SvmParams,
        /// `Some` enables nested hyperparameter selection on training folds.
        grid: Option<SvmGrid>,
    },
    Knn { k: usize },
    Nb { epsilon: Option<f64> },
}

impl ClassifierConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ClassifierConfig::Svm { .. } => "svm",
            ClassifierConfig::Knn { .. } => "knn",
            ClassifierConfig::Nb { .. } => "nb",
        }
    }
}

/// Raw (unstandardized) feature matrices of the two classes of one case.
#[derive(Debug, Clone)]
pub struct CaseData {
    pub positive: Vec<Vec<f64>>,
    pub negative: Vec<Vec<f64>>,
}

/// Cross-validation schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRunConfig {
    pub folds: usize,
    pub repetitions: usize,
    pub base_seed: u64,
    pub aggregation: Aggregation,
}

impl Default for CaseRunConfig {
    fn default() -> Self {
        CaseRunConfig {
            folds: 10,
            repetitions: 10,
            base_seed: 42,
            aggregation: Aggregation::MicroOverFolds,
        }
    }
}

/// One repetition of k-fold cross-validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionReport {
    pub seed: u64,
    pub fold_confusions: Vec<ConfusionMatrix>,
    /// Fold confusions summed.
    pub combined: ConfusionMatrix,
    pub metrics: Metrics,
    /// Hyperparameters chosen per fold when grid search ran.
    pub chosen_params: Vec<Option<SvmParams>>,
}

/// Full result of one (case, classifier) evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: CaseSpec,
    pub classifier: ClassifierConfig,
    pub run: CaseRunConfig,
    pub repetitions: Vec<RepetitionReport>,
    /// Mean of the per-repetition metrics.
    pub averaged: Metrics,
}

/// Fit on standardized training data, classify standardized test rows.
/// The closure form keeps the no-leakage choreography in one place and lets
/// tests inject degenerate classifiers.
pub fn cross_validate_with<F>(
    x: &[Vec<f64>],
    y: &[ClassLabel],
    run: &CaseRunConfig,
    fit_predict: F,
) -> Result<Vec<RepetitionReport>, EvalError>
where
    F: Fn(&[Vec<f64>], &[ClassLabel], &[Vec<f64>], u64) -> Result<(Vec<ClassLabel>, Option<SvmParams>), TrainError>
        + Sync,
{
    let plans: Vec<FoldPlan> = (0..run.repetitions)
        .map(|r| stratified_kfold(y, run.folds, run.base_seed.wrapping_add(r as u64)))
        .collect::<Result<_, _>>()?;

    let units: Vec<(usize, usize)> = (0..run.repetitions)
        .flat_map(|r| (0..run.folds).map(move |f| (r, f)))
        .collect();

    let fold_results: Vec<(ConfusionMatrix, Option<SvmParams>)> = units
        .par_iter()
        .map(|&(rep, fold)| {
            let (train_idx, test_idx) = plans[rep].split(fold);
            let train_raw: Vec<Vec<f64>> = train_idx.iter().map(|&i| x[i].clone()).collect();
            let train_y: Vec<ClassLabel> = train_idx.iter().map(|&i| y[i]).collect();
            let test_raw: Vec<Vec<f64>> = test_idx.iter().map(|&i| x[i].clone()).collect();

            // scaling statistics come from the training split only
            let standardizer = standardize_fit(&train_raw);
            let train_std = standardizer.apply(&train_raw);
            let test_std = standardizer.apply(&test_raw);

            let fold_seed = run
                .base_seed
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add((rep * run.folds + fold) as u64);
            let (predictions, chosen) = fit_predict(&train_std, &train_y, &test_std, fold_seed)?;
            debug_assert_eq!(predictions.len(), test_idx.len());

            let mut cm = ConfusionMatrix::default();
            for (&i, &pred) in test_idx.iter().zip(&predictions) {
                cm.record(y[i], pred);
            }
            Ok((cm, chosen))
        })
        .collect::<Result<_, EvalError>>()?;

    let mut reports = Vec::with_capacity(run.repetitions);
    for rep in 0..run.repetitions {
        let mut fold_confusions = Vec::with_capacity(run.folds);
        let mut chosen_params = Vec::with_capacity(run.folds);
        let mut combined = ConfusionMatrix::default();
        for fold in 0..run.folds {
            let (cm, chosen) = fold_results[rep * run.folds + fold];
            combined.merge(&cm);
            fold_confusions.push(cm);
            chosen_params.push(chosen);
        }
        let metrics = match run.aggregation {
            Aggregation::MicroOverFolds => compute_metrics(&combined)?,
            Aggregation::MacroOverFolds => {
                let per_fold: Vec<Metrics> = fold_confusions
                    .iter()
                    .map(compute_metrics)
                    .collect::<Result<_, _>>()?;
                Metrics::mean(&per_fold)
            }
        };
        reports.push(RepetitionReport {
            seed: run.base_seed.wrapping_add(rep as u64),
            fold_confusions,
            combined,
            metrics,
            chosen_params,
        });
    }
    Ok(reports)
}

/// Evaluate one classifier on one case under repeated stratified k-fold
/// cross-validation. Deterministic end to end for a fixed base seed.
pub fn run_case(
    case: CaseSpec,
    data: &CaseData,
    classifier: &ClassifierConfig,
    run: &CaseRunConfig,
) -> Result<CaseReport, EvalError> {
    let mut x: Vec<Vec<f64>> = Vec::with_capacity(data.positive.len() + data.negative.len());
    let mut y: Vec<ClassLabel> = Vec::with_capacity(x.capacity());
    x.extend(data.positive.iter().cloned());
    y.extend(std::iter::repeat_n(ClassLabel::Positive, data.positive.len()));
    x.extend(data.negative.iter().cloned());
    y.extend(std::iter::repeat_n(ClassLabel::Negative, data.negative.len()));

    let repetitions = cross_validate_with(&x, &y, run, |xt, yt, xs, seed| {
        match classifier {
            ClassifierConfig::Svm { params, grid } => {
                let (model, chosen) = match grid {
                    Some(g) => {
                        let (m, p) = svm_train_grid_search(xt, yt, g, params, seed)?;
                        (m, Some(p))
                    }
                    None => (svm_train(xt, yt, params)?, None),
                };
                let preds = xs
                    .iter()
                    .map(|row| svm_predict(&model, row).map(|(l, _)| l))
                    .collect::<Result<_, _>>()?;
                Ok((preds, chosen))
            }
            ClassifierConfig::Knn { k } => {
                let model = knn_train(xt.to_vec(), yt.to_vec(), *k)?;
                let preds = xs
                    .iter()
                    .map(|row| knn_predict(&model, row))
                    .collect::<Result<_, _>>()?;
                Ok((preds, None))
            }
            ClassifierConfig::Nb { epsilon } => {
                let model = nb_train(xt, yt, *epsilon)?;
                let preds = xs
                    .iter()
                    .map(|row| nb_predict(&model, row))
                    .collect::<Result<_, _>>()?;
                Ok((preds, None))
            }
        }
    })?;

    let averaged = Metrics::mean(
        &repetitions
            .iter()
            .map(|r| r.metrics)
            .collect::<Vec<_>>(),
    );
    Ok(CaseReport {
        case,
        classifier: classifier.clone(),
        run: *run,
        repetitions,
        averaged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::CaseId;
    use rand::Rng;

    fn balanced_labels(n_per_class: usize) -> Vec<ClassLabel> {
        let mut y = vec![ClassLabel::Positive; n_per_class];
        y.extend(vec![ClassLabel::Negative; n_per_class]);
        y
    }

    #[test]
    fn stratified_folds_balance_classes_exactly_on_200() {
        let y = balanced_labels(100);
        let plan = stratified_kfold(&y, 10, 7).unwrap();
        assert_eq!(plan.fold_sizes(), vec![20; 10]);
        for fold in 0..10 {
            let (train, test) = plan.split(fold);
            assert_eq!(train.len(), 180);
            assert_eq!(test.len(), 20);
            let pos = test.iter().filter(|&&i| y[i] == ClassLabel::Positive).count();
            assert_eq!(pos, 10, "fold {fold}");
        }
    }

    #[test]
    fn fold_plans_are_deterministic_per_seed() {
        let y = balanced_labels(50);
        let a = stratified_kfold(&y, 10, 3).unwrap();
        let b = stratified_kfold(&y, 10, 3).unwrap();
        assert_eq!(a, b);
        let c = stratified_kfold(&y, 10, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn every_sample_lands_in_exactly_one_test_fold() {
        let mut y = balanced_labels(33);
        y.push(ClassLabel::Positive); // odd total
        let plan = stratified_kfold(&y, 5, 11).unwrap();
        let mut seen = vec![0usize; y.len()];
        for fold in 0..5 {
            let (_, test) = plan.split(fold);
            for i in test {
                seen[i] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
        let sizes = plan.fold_sizes();
        let (min, max) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
        assert!(max - min <= 1, "sizes {sizes:?}");
    }

    #[test]
    fn unbalanced_classes_stay_within_one_sample_per_fold() {
        let mut y = vec![ClassLabel::Positive; 37];
        y.extend(vec![ClassLabel::Negative; 23]);
        let plan = stratified_kfold(&y, 5, 0).unwrap();
        for fold in 0..5 {
            let (_, test) = plan.split(fold);
            let pos = test.iter().filter(|&&i| y[i] == ClassLabel::Positive).count();
            let neg = test.len() - pos;
            assert!((7..=8).contains(&pos), "fold {fold}: {pos} positives");
            assert!((4..=5).contains(&neg), "fold {fold}: {neg} negatives");
        }
    }

    #[test]
    fn too_few_samples_for_stratification() {
        let mut y = vec![ClassLabel::Positive; 5];
        y.extend(vec![ClassLabel::Negative; 50]);
        assert!(matches!(
            stratified_kfold(&y, 10, 0),
            Err(EvalError::TooFewSamples { count: 5, k: 10 })
        ));
    }

    #[test]
    fn perfect_confusion_scores_all_hundred() {
        let cm = ConfusionMatrix {
            true_positive: 100,
            true_negative: 100,
            false_positive: 0,
            false_negative: 0,
        };
        let m = compute_metrics(&cm).unwrap();
        for v in [m.accuracy, m.sensitivity, m.specificity, m.precision, m.f_measure] {
            assert_eq!(v, Some(100.0));
        }
    }

    fn round3(v: f64) -> f64 {
        (v * 1000.0).round() / 1000.0
    }

    #[test]
    fn one_false_negative_row() {
        let cm = ConfusionMatrix {
            true_positive: 99,
            false_negative: 1,
            true_negative: 100,
            false_positive: 0,
        };
        let m = compute_metrics(&cm).unwrap();
        assert_eq!(m.accuracy, Some(99.5));
        assert_eq!(m.sensitivity, Some(99.0));
        assert_eq!(m.specificity, Some(100.0));
        assert_eq!(m.precision, Some(100.0));
        assert_eq!(round3(m.f_measure.unwrap()), 99.497);
    }

    #[test]
    fn one_false_positive_row() {
        let cm = ConfusionMatrix {
            true_positive: 100,
            false_negative: 0,
            true_negative: 99,
            false_positive: 1,
        };
        let m = compute_metrics(&cm).unwrap();
        assert_eq!(m.accuracy, Some(99.5));
        assert_eq!(m.sensitivity, Some(100.0));
        assert_eq!(m.specificity, Some(99.0));
        assert_eq!(round3(m.precision.unwrap()), 99.01);
        assert_eq!(round3(m.f_measure.unwrap()), 99.502);
    }

    #[test]
    fn zero_denominators_come_back_undefined() {
        let cm = ConfusionMatrix {
            true_positive: 0,
            false_negative: 0,
            true_negative: 5,
            false_positive: 0,
        };
        let m = compute_metrics(&cm).unwrap();
        assert_eq!(m.sensitivity, None);
        assert_eq!(m.precision, None);
        assert_eq!(m.f_measure, None);
        assert_eq!(m.accuracy, Some(100.0));
        assert!(matches!(
            compute_metrics(&ConfusionMatrix::default()),
            Err(EvalError::EmptyMatrix)
        ));
    }

    #[test]
    fn f_measure_identity_holds_on_every_report() {
        let cm = ConfusionMatrix {
            true_positive: 87,
            false_negative: 13,
            true_negative: 92,
            false_positive: 8,
        };
        let m = compute_metrics(&cm).unwrap();
        let (p, s) = (m.precision.unwrap(), m.sensitivity.unwrap());
        assert!((m.f_measure.unwrap() - 2.0 * p * s / (p + s)).abs() < 1e-9);
    }

    fn gaussian_case_data(separation: f64, seed: u64) -> CaseData {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut normal = move || {
            let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
            let u2: f64 = rng.random();
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        };
        let make = |offset: f64, normal: &mut dyn FnMut() -> f64| {
            (0..40)
                .map(|_| vec![normal() + offset, normal() * 3.0 + offset, normal()])
                .collect::<Vec<_>>()
        };
        CaseData {
            positive: make(separation, &mut normal),
            negative: make(-separation, &mut normal),
        }
    }

    #[test]
    fn run_case_is_deterministic_and_aggregates_to_full_coverage() {
        let data = gaussian_case_data(3.0, 5);
        let run = CaseRunConfig {
            folds: 5,
            repetitions: 3,
            base_seed: 17,
            aggregation: Aggregation::MicroOverFolds,
        };
        let cfg = ClassifierConfig::Knn { k: 5 };
        let a = run_case(CaseSpec::new(CaseId::Case1), &data, &cfg, &run).unwrap();
        let b = run_case(CaseSpec::new(CaseId::Case1), &data, &cfg, &run).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        for rep in &a.repetitions {
            assert_eq!(rep.combined.total(), 80);
            let mut sum = ConfusionMatrix::default();
            for cm in &rep.fold_confusions {
                sum.merge(cm);
            }
            assert_eq!(sum, rep.combined);
        }
        // well separated blobs classify essentially perfectly
        assert!(a.averaged.accuracy.unwrap() > 95.0);
        // averaged metrics are the mean of repetition metrics
        let recomputed =
            Metrics::mean(&a.repetitions.iter().map(|r| r.metrics).collect::<Vec<_>>());
        assert_eq!(recomputed, a.averaged);
    }

    #[test]
    fn all_three_classifiers_run_through_the_harness() {
        let data = gaussian_case_data(4.0, 9);
        let run = CaseRunConfig {
            folds: 4,
            repetitions: 2,
            base_seed: 3,
            aggregation: Aggregation::MicroOverFolds,
        };
        for cfg in [
            ClassifierConfig::Svm {
                params: SvmParams::new(10.0, 3.0),
                grid: None,
            },
            ClassifierConfig::Knn { k: 3 },
            ClassifierConfig::Nb { epsilon: None },
        ] {
            let report = run_case(CaseSpec::new(CaseId::Case2), &data, &cfg, &run).unwrap();
            assert!(
                report.averaged.accuracy.unwrap() > 90.0,
                "{} accuracy {:?}",
                cfg.name(),
                report.averaged.accuracy
            );
        }
    }

    #[test]
    fn degenerate_always_positive_classifier_scores_fifty_fifty() {
        let data = gaussian_case_data(1.0, 2);
        let run = CaseRunConfig {
            folds: 5,
            repetitions: 2,
            base_seed: 1,
            aggregation: Aggregation::MicroOverFolds,
        };
        let mut x: Vec<Vec<f64>> = data.positive.clone();
        x.extend(data.negative.clone());
        let mut y = vec![ClassLabel::Positive; data.positive.len()];
        y.extend(vec![ClassLabel::Negative; data.negative.len()]);

        let reports = cross_validate_with(&x, &y, &run, |_, _, test, _| {
            Ok((vec![ClassLabel::Positive; test.len()], None))
        })
        .unwrap();
        let averaged = Metrics::mean(&reports.iter().map(|r| r.metrics).collect::<Vec<_>>());
        assert_eq!(averaged.sensitivity, Some(100.0));
        assert_eq!(averaged.specificity, Some(0.0));
        assert_eq!(averaged.accuracy, Some(50.0));
    }

    #[test]
    fn macro_aggregation_averages_per_fold_metrics() {
        let data = gaussian_case_data(3.0, 13);
        let run = CaseRunConfig {
            folds: 4,
            repetitions: 1,
            base_seed: 0,
            aggregation: Aggregation::MacroOverFolds,
        };
        let cfg = ClassifierConfig::Nb { epsilon: None };
        let report = run_case(CaseSpec::new(CaseId::Case3), &data, &cfg, &run).unwrap();
        let rep = &report.repetitions[0];
        let per_fold: Vec<Metrics> = rep
            .fold_confusions
            .iter()
            .map(|cm| compute_metrics(cm).unwrap())
            .collect();
        assert_eq!(rep.metrics, Metrics::mean(&per_fold));
    }

    #[test]
    fn standardizer_fitted_per_fold_leaves_test_means_nonzero() {
        // proper per-fold fitting: the training split transforms to mean
        // zero, the held-out split generally does not; fitting on all rows
        // (the leaky variant) zeroes the pooled mean instead
        let data = gaussian_case_data(1.5, 21);
        let mut x: Vec<Vec<f64>> = data.positive.clone();
        x.extend(data.negative.clone());
        let mut y = vec![ClassLabel::Positive; data.positive.len()];
        y.extend(vec![ClassLabel::Negative; data.negative.len()]);
        let plan = stratified_kfold(&y, 5, 77).unwrap();
        let (train_idx, test_idx) = plan.split(0);
        let train: Vec<Vec<f64>> = train_idx.iter().map(|&i| x[i].clone()).collect();
        let test: Vec<Vec<f64>> = test_idx.iter().map(|&i| x[i].clone()).collect();

        let proper = standardize_fit(&train);
        let train_t = proper.apply(&train);
        let test_t = proper.apply(&test);
        let col_mean = |rows: &[Vec<f64>], c: usize| {
            rows.iter().map(|r| r[c]).sum::<f64>() / rows.len() as f64
        };
        for c in 0..3 {
            assert!(col_mean(&train_t, c).abs() < 1e-9, "train col {c}");
        }
        let max_test_mean = (0..3)
            .map(|c| col_mean(&test_t, c).abs())
            .fold(0.0f64, f64::max);
        assert!(max_test_mean > 1e-3, "test means suspiciously zero: {max_test_mean}");

        // deliberately leaky: fit on everything → pooled mean is exactly zero
        let leaky = standardize_fit(&x);
        let all_t = leaky.apply(&x);
        for c in 0..3 {
            assert!(col_mean(&all_t, c).abs() < 1e-9, "leaky pooled col {c}");
        }
    }
}
