//! The four subcommands: extract, evaluate, plot, decompose.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use ictal_core::dwt::{band_frequency_map, decompose, reconstruct_band, BandId};
use ictal_core::eval::{run_case, CaseData, CaseReport, ClassifierConfig};
use ictal_core::features::{read_feature_csv, write_feature_csv, FeatureVector};
use ictal_core::ingest::{CaseSpec, SetId};
use ictal_core::classifiers::{SvmGrid, SvmParams};
use ictal_core::pipeline::{band_limit, extract_features};

use crate::config::{CaseChoice, ClassifierChoice, Resolved};
use crate::corpus::{obtain_segment, obtain_set};
use crate::error::{io_data, CliError};
use crate::svg;
use crate::table;

fn feature_csv_path(cfg: &Resolved, set: SetId) -> PathBuf {
    cfg.out_dir.join(format!("features_{set}.csv"))
}

fn ensure_out_dir(cfg: &Resolved) -> Result<(), CliError> {
    fs::create_dir_all(&cfg.out_dir).map_err(|e| io_data(&cfg.out_dir, e))
}

/// `extract`: feature CSVs for all five sets plus a manifest recording the
/// configuration and seed.
pub fn extract(cfg: &Resolved) -> Result<(), CliError> {
    if cfg.levels != 4 {
        return Err(CliError::Usage(format!(
            "config: feature extraction needs exactly 4 decomposition levels, got {}",
            cfg.levels
        )));
    }
    ensure_out_dir(cfg)?;
    let params = cfg.pipeline_params();
    let mut total_rows = 0usize;
    for set in SetId::ALL {
        let collection = obtain_set(cfg, set)?;
        let features = extract_features(&collection.segments, &params)?;
        total_rows += features.len();
        let path = feature_csv_path(cfg, set);
        write_feature_csv(&path, &features)?;
        println!("wrote {} ({} rows)", path.display(), features.len());
    }
    write_manifest(cfg)?;
    println!("extracted {total_rows} feature rows");
    Ok(())
}

fn write_manifest(cfg: &Resolved) -> Result<(), CliError> {
    let mut m = String::new();
    let _ = writeln!(m, "base_seed = {}", cfg.seed);
    let _ = writeln!(m, "source = {}", if cfg.synthetic { "synthetic" } else { "corpus" });
    if !cfg.synthetic {
        let _ = writeln!(m, "corpus_dir = {}", cfg.corpus_dir.display());
    }
    let _ = writeln!(m, "filter_order = {}", cfg.filter_order);
    let _ = writeln!(m, "cutoff_hz = {}", cfg.cutoff_hz);
    let _ = writeln!(m, "levels = {}", cfg.levels);
    let _ = writeln!(m, "extension = {:?}", cfg.mode);
    let _ = writeln!(m, "strict = {}", cfg.strict);
    let path = cfg.out_dir.join("manifest.txt");
    fs::write(&path, m).map_err(|e| io_data(&path, e))
}

fn load_or_extract_features(cfg: &Resolved, sets: &[SetId]) -> Result<Vec<Vec<FeatureVector>>, CliError> {
    if sets.iter().any(|s| !feature_csv_path(cfg, *s).is_file()) {
        extract(cfg)?;
    }
    sets.iter()
        .map(|s| Ok(read_feature_csv(&feature_csv_path(cfg, *s))?))
        .collect()
}

fn classifier_configs(cfg: &Resolved, dim: usize) -> Vec<ClassifierConfig> {
    let sigma = cfg.svm_sigma.unwrap_or_else(|| (dim as f64).sqrt());
    let svm = ClassifierConfig::Svm {
        params: SvmParams::new(cfg.svm_c.unwrap_or(10.0), sigma),
        grid: cfg.grid_search.then(SvmGrid::default),
    };
    let knn = ClassifierConfig::Knn { k: cfg.knn_k };
    let nb = ClassifierConfig::Nb { epsilon: cfg.nb_epsilon };
    match cfg.classifier {
        ClassifierChoice::All => vec![svm, knn, nb],
        ClassifierChoice::Svm => vec![svm],
        ClassifierChoice::Knn => vec![knn],
        ClassifierChoice::Nb => vec![nb],
    }
}

/// `evaluate`: run the requested (case, classifier) combinations, write one
/// JSON report each plus a summary table per classifier.
pub fn evaluate(cfg: &Resolved) -> Result<(), CliError> {
    ensure_out_dir(cfg)?;
    let cases: Vec<CaseSpec> = match cfg.case {
        CaseChoice::All => CaseChoice::All.cases(),
        one => one.cases(),
    }
    .into_iter()
    .map(CaseSpec::new)
    .collect();

    let mut sets: Vec<SetId> = cases.iter().map(|c| c.positive_set).collect();
    sets.push(SetId::E);
    let vectors = load_or_extract_features(cfg, &sets)?;
    let negative_rows = rows_of(&vectors[vectors.len() - 1]);
    let dim = negative_rows.first().map_or(50, Vec::len);

    let run = cfg.run_config();
    let mut per_classifier: Vec<(String, Vec<(String, CaseReport)>)> = Vec::new();
    for clf in classifier_configs(cfg, dim) {
        let mut rows = Vec::new();
        for (case, case_vectors) in cases.iter().zip(&vectors) {
            let data = CaseData {
                positive: rows_of(case_vectors),
                negative: negative_rows.clone(),
            };
            let report = run_case(*case, &data, &clf, &run)?;
            let path = cfg
                .out_dir
                .join(format!("report_{}_{}.json", case.case_id, clf.name()));
            let json = serde_json::to_string_pretty(&report)
                .expect("reports always serialize");
            fs::write(&path, json + "\n").map_err(|e| io_data(&path, e))?;
            rows.push((case.description(), report));
        }
        per_classifier.push((clf.name().to_string(), rows));
    }

    for (name, rows) in &per_classifier {
        let table_rows: Vec<(String, ictal_core::eval::Metrics)> = rows
            .iter()
            .map(|(desc, report)| (desc.clone(), report.averaged))
            .collect();
        let text = table::format_summary(name, &table_rows, &run);
        let path = cfg.out_dir.join(format!("summary_{name}.txt"));
        fs::write(&path, &text).map_err(|e| io_data(&path, e))?;
        println!("{text}");
    }
    Ok(())
}

fn rows_of(vectors: &[FeatureVector]) -> Vec<Vec<f64>> {
    vectors.iter().map(|v| v.values.clone()).collect()
}

fn band_panel_label(band: BandId, fs: f64) -> String {
    let map = band_frequency_map(fs, 4).expect("4-level map");
    let range = map
        .iter()
        .find(|r| r.band == band)
        .expect("band present in map");
    format!(
        "{band} ({}, {:.0}-{:.0} Hz)",
        band.nominal_name(),
        range.nominal_lo_hz,
        range.nominal_hi_hz
    )
}

/// `plot`: six stacked panels — the original segment and the five sub-bands
/// reconstructed from its band-limited decomposition — as one SVG file.
pub fn plot(cfg: &Resolved, set: SetId, index: u32) -> Result<PathBuf, CliError> {
    if cfg.levels != 4 {
        return Err(CliError::Usage(format!(
            "config: band plots need exactly 4 decomposition levels, got {}",
            cfg.levels
        )));
    }
    ensure_out_dir(cfg)?;
    let segment = obtain_segment(cfg, set, index)?;
    let filtered = band_limit(&segment, &cfg.pipeline_params())?;
    let tree = decompose(&filtered, cfg.levels, cfg.mode)?;

    let mut panels = vec![("original signal".to_string(), segment.samples.clone())];
    for band in [BandId::A4, BandId::D4, BandId::D3, BandId::D2, BandId::D1] {
        let rec = reconstruct_band(&tree, band)?;
        panels.push((band_panel_label(band, segment.fs), rec));
    }
    let title = format!(
        "Set {set}, segment {index}: sub-band reconstructions (seed {})",
        cfg.seed
    );
    let svg = svg::render_panels(&title, &panels);
    let path = cfg
        .out_dir
        .join(format!("plot_{}{index:03}.svg", set.filename_prefix()));
    fs::write(&path, svg).map_err(|e| io_data(&path, e))?;
    println!("wrote {}", path.display());
    Ok(path)
}

/// `decompose`: per-band coefficient CSVs for one segment, optionally with
/// the reconstruction plot.
pub fn decompose_cmd(
    cfg: &Resolved,
    set: SetId,
    index: u32,
    with_plot: bool,
) -> Result<(), CliError> {
    ensure_out_dir(cfg)?;
    let segment = obtain_segment(cfg, set, index)?;
    let filtered = band_limit(&segment, &cfg.pipeline_params())?;
    let tree = decompose(&filtered, cfg.levels, cfg.mode)?;

    let stem = format!("{}{index:03}", set.filename_prefix());
    if cfg.levels == 4 {
        for (band, coeffs) in tree.bands().map_err(CliError::from)? {
            write_coeff_csv(cfg, &stem, &band.to_string(), coeffs)?;
        }
    } else {
        for level in 1..=tree.levels() {
            let coeffs = tree.detail(level).expect("level present");
            write_coeff_csv(cfg, &stem, &format!("D{level}"), coeffs)?;
        }
        write_coeff_csv(cfg, &stem, &format!("A{}", tree.levels()), tree.approx())?;
    }
    if with_plot {
        plot(cfg, set, index)?;
    }
    Ok(())
}

fn write_coeff_csv(cfg: &Resolved, stem: &str, band: &str, coeffs: &[f64]) -> Result<(), CliError> {
    let mut out = String::with_capacity(coeffs.len() * 12);
    out.push_str("index,value\n");
    for (i, v) in coeffs.iter().enumerate() {
        let _ = writeln!(out, "{i},{v}");
    }
    let path = cfg.out_dir.join(format!("coeffs_{stem}_{band}.csv"));
    fs::write(&path, out).map_err(|e| io_data(&path, e))?;
    println!("wrote {} ({} coefficients)", path.display(), coeffs.len());
    Ok(())
}
