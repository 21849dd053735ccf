//! End-to-end tests against the built binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ictal(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ictal"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn extract_is_deterministic_byte_for_byte() {
    let tmp = tempfile::tempdir().unwrap();
    for out in ["one", "two"] {
        let o = ictal(
            tmp.path(),
            &["extract", "--synthetic", "--seed", "5", "--out-dir", out],
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for set in ["A", "B", "C", "D", "E"] {
        let name = format!("features_{set}.csv");
        assert_eq!(
            read(&tmp.path().join("one"), &name),
            read(&tmp.path().join("two"), &name),
            "{name} differs between identical runs"
        );
    }
    assert_eq!(
        read(&tmp.path().join("one"), "manifest.txt"),
        read(&tmp.path().join("two"), "manifest.txt")
    );
}

#[test]
fn different_seeds_change_the_features() {
    let tmp = tempfile::tempdir().unwrap();
    for (out, seed) in [("s1", "1"), ("s2", "2")] {
        let o = ictal(
            tmp.path(),
            &["extract", "--synthetic", "--seed", seed, "--out-dir", out],
        );
        assert!(o.status.success());
    }
    assert_ne!(
        read(&tmp.path().join("s1"), "features_A.csv"),
        read(&tmp.path().join("s2"), "features_A.csv")
    );
}

#[test]
fn missing_corpus_without_synthetic_exits_2_with_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ictal(
        tmp.path(),
        &["extract", "--corpus-dir", "nowhere", "--out-dir", "out"],
    );
    assert_eq!(o.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("ingest"), "stderr: {stderr}");
    assert!(stderr.contains("missing"), "stderr: {stderr}");
}

#[test]
fn evaluate_writes_reports_byte_identically_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "evaluate".to_string(),
            "--synthetic".to_string(),
            "--seed".to_string(),
            "9".to_string(),
            "--out-dir".to_string(),
            out.to_string(),
            "--classifier".to_string(),
            "knn".to_string(),
            "--folds".to_string(),
            "5".to_string(),
            "--repetitions".to_string(),
            "2".to_string(),
        ]
    };
    for out in ["r1", "r2"] {
        let o = Command::new(env!("CARGO_BIN_EXE_ictal"))
            .current_dir(tmp.path())
            .args(args(out))
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for n in 1..=4 {
        let name = format!("report_case{n}_knn.json");
        assert_eq!(
            read(&tmp.path().join("r1"), &name),
            read(&tmp.path().join("r2"), &name),
            "{name} differs"
        );
    }
    assert_eq!(
        read(&tmp.path().join("r1"), "summary_knn.txt"),
        read(&tmp.path().join("r2"), "summary_knn.txt")
    );
}

#[test]
fn single_case_single_classifier_yields_exactly_one_report() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ictal(
        tmp.path(),
        &[
            "evaluate",
            "--synthetic",
            "--out-dir",
            "out",
            "--case",
            "1",
            "--classifier",
            "svm",
            "--grid-search",
            "off",
            "--folds",
            "5",
            "--repetitions",
            "1",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let reports: Vec<_> = fs::read_dir(tmp.path().join("out"))
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().to_string())
        .filter(|n| n.starts_with("report_"))
        .collect();
    assert_eq!(reports, vec!["report_case1_svm.json".to_string()]);
    let json = String::from_utf8(read(&tmp.path().join("out"), "report_case1_svm.json")).unwrap();
    assert!(json.contains("\"base_seed\""));
}

#[test]
fn full_matrix_produces_twelve_reports_and_three_summaries() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ictal(
        tmp.path(),
        &[
            "evaluate",
            "--synthetic",
            "--out-dir",
            "out",
            "--grid-search",
            "off",
            "--folds",
            "5",
            "--repetitions",
            "1",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let names: Vec<String> = fs::read_dir(tmp.path().join("out"))
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().to_string())
        .collect();
    assert_eq!(names.iter().filter(|n| n.starts_with("report_")).count(), 12);
    assert_eq!(names.iter().filter(|n| n.starts_with("summary_")).count(), 3);
    // implicit extraction produced the five feature CSVs: 100 rows + header
    for set in ["A", "B", "C", "D", "E"] {
        let csv =
            String::from_utf8(read(&tmp.path().join("out"), &format!("features_{set}.csv")))
                .unwrap();
        assert_eq!(csv.lines().count(), 101);
        assert_eq!(csv.lines().next().unwrap().split(',').count(), 51);
    }
}

#[test]
fn corrupted_feature_csv_is_a_schema_error_naming_the_column() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ictal(
        tmp.path(),
        &["extract", "--synthetic", "--out-dir", "out"],
    );
    assert!(o.status.success());
    // damage one numeric field in the set-A csv
    let path = tmp.path().join("out").join("features_A.csv");
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let mut fields: Vec<String> = lines[1].split(',').map(str::to_string).collect();
    fields[4] = "garbage".to_string();
    lines[1] = fields.join(",");
    fs::write(&path, lines.join("\n") + "\n").unwrap();

    let o = ictal(
        tmp.path(),
        &[
            "evaluate",
            "--synthetic",
            "--out-dir",
            "out",
            "--case",
            "1",
            "--classifier",
            "knn",
            "--folds",
            "5",
            "--repetitions",
            "1",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("d1_std"), "stderr: {stderr}");
    assert!(stderr.contains("features_A.csv"), "stderr: {stderr}");
}

#[test]
fn plot_emits_six_panels_and_rejects_bad_indices() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ictal(
        tmp.path(),
        &["plot", "--synthetic", "--out-dir", "out", "--set", "A", "--segment", "1"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = String::from_utf8(read(&tmp.path().join("out"), "plot_Z001.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 6);
    assert!(svg.contains("delta") && svg.contains("gamma"));

    let o = ictal(
        tmp.path(),
        &["plot", "--synthetic", "--out-dir", "out", "--set", "A", "--segment", "101"],
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn decompose_writes_one_csv_per_band() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ictal(
        tmp.path(),
        &["decompose", "--synthetic", "--out-dir", "out", "--set", "E", "--segment", "3"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // symmetric-mode coefficient counts for 4097 samples
    for (band, expected) in [("D1", 2052), ("D2", 1029), ("D3", 518), ("D4", 262), ("A4", 262)] {
        let csv = String::from_utf8(read(
            &tmp.path().join("out"),
            &format!("coeffs_S003_{band}.csv"),
        ))
        .unwrap();
        assert_eq!(csv.lines().count() - 1, expected, "{band}");
    }
}

#[test]
fn invalid_flags_exit_1() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ictal(
        tmp.path(),
        &["extract", "--synthetic", "--out-dir", "out", "--filter-order", "5"],
    );
    assert_eq!(o.status.code(), Some(1));
    let o = ictal(tmp.path(), &["evaluate", "--synthetic", "--case", "7"]);
    assert_eq!(o.status.code(), Some(1));
    let o = ictal(tmp.path(), &["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_drives_a_run_and_flags_override_it() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(
        tmp.path().join("run.toml"),
        "synthetic = true\nseed = 3\nout_dir = \"cfg_out\"\n",
    )
    .unwrap();
    let o = ictal(tmp.path(), &["extract", "--config", "run.toml"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(tmp.path().join("cfg_out").join("features_A.csv").is_file());

    // flag overrides the configured output directory
    let o = ictal(
        tmp.path(),
        &["extract", "--config", "run.toml", "--out-dir", "flag_out"],
    );
    assert!(o.status.success());
    assert!(tmp.path().join("flag_out").join("features_A.csv").is_file());
    assert_eq!(
        read(&tmp.path().join("cfg_out"), "features_A.csv"),
        read(&tmp.path().join("flag_out"), "features_A.csv")
    );
}
