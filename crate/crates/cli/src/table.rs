//! Plain-text result tables: one per classifier, rows are cases, columns the
//! five metrics.

use ictal_core::eval::{CaseRunConfig, Metrics};

/// Round to three decimals and drop trailing zeros, so 100.0 prints as
/// "100", 99.4975 as "99.497". Undefined metrics print as "undef".
pub fn fmt_metric(value: Option<f64>) -> String {
    match value {
        None => "undef".to_string(),
        Some(v) => {
            let s = format!("{:.3}", v);
            let s = s.trim_end_matches('0').trim_end_matches('.');
            s.to_string()
        }
    }
}

pub fn classifier_display(name: &str) -> &'static str {
    match name {
        "svm" => "SVMRBF",
        "knn" => "KNN",
        "nb" => "NB",
        _ => "classifier",
    }
}

/// Format the summary table of one classifier over its evaluated cases.
pub fn format_summary(
    classifier: &str,
    rows: &[(String, Metrics)],
    run: &CaseRunConfig,
) -> String {
    let header = [
        "Cases for seizure",
        "Accuracy(%)",
        "Sensitivity(%)",
        "Specificity(%)",
        "Precision(%)",
        "F-Measure(%)",
    ];
    let mut out = String::new();
    out.push_str(&format!(
        "Performance for different sets of EEG data using {}\n",
        classifier_display(classifier)
    ));
    out.push_str(&format!(
        "{:<18} {:>12} {:>14} {:>14} {:>13} {:>13}\n",
        header[0], header[1], header[2], header[3], header[4], header[5]
    ));
    for (case, m) in rows {
        out.push_str(&format!(
            "{:<18} {:>12} {:>14} {:>14} {:>13} {:>13}\n",
            case,
            fmt_metric(m.accuracy),
            fmt_metric(m.sensitivity),
            fmt_metric(m.specificity),
            fmt_metric(m.precision),
            fmt_metric(m.f_measure),
        ));
    }
    out.push_str(&format!(
        "folds: {}, repetitions: {}, base seed: {}\n",
        run.folds, run.repetitions, run.base_seed
    ));
    out
}
