//! Per-band statistics and the 50-dimensional feature vector.
//!
//! Ten features are computed on the raw wavelet coefficients of each of the
//! five sub-bands (not on reconstructed band signals): min, max, mean,
//! median, standard deviation (N−1 denominator), variance, a skewness
//! statistic, energy, relative wave energy and entropy.
//!
//! Two statistics deviate from the textbook definitions their names suggest:
//!
//! * `skewness_stat` is (1/N)·Σ((Dᵢ−μ)/σ)⁴ − 3 — algebraically the excess
//!   kurtosis. [`SkewnessMode::ThirdMoment`] switches to the conventional
//!   third-power statistic for sensitivity studies.
//! * `entropy` is Σ Dᵢ²·ln(Dᵢ²) with 0·ln 0 := 0 — no leading minus sign and
//!   no normalization of the squared coefficients to probabilities, so it
//!   can be negative when |Dᵢ| < 1. Natural logarithm.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dwt::{BandId, DecompositionTree};
use crate::ingest::SetId;

/// Number of entries in a feature vector: 10 statistics × 5 bands.
pub const FEATURE_COUNT: usize = 50;

/// Statistic names in canonical order within each band.
pub const STAT_NAMES: [&str; 10] = [
    "min", "max", "mean", "median", "std", "variance", "skewness", "energy", "rwe", "entropy",
];

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("band {band} is degenerate: zero variance, skewness undefined")]
    DegenerateBand { band: BandId },
    #[error("decomposition has zero total energy")]
    ZeroEnergy,
    #[error("expected a 4-level decomposition, got {0} levels")]
    WrongLevels(usize),
    #[error("feature {band}_{stat} is not finite")]
    NonFinite { band: BandId, stat: &'static str },
    #[error("{path}:{line}: {detail}")]
    Csv {
        path: String,
        line: usize,
        detail: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// How to treat a zero-variance band when computing the skewness statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DegeneratePolicy {
    /// Report [`FeatureError::DegenerateBand`].
    #[default]
    Error,
    /// Substitute 0 for the undefined statistic.
    SubstituteZero,
}

/// Exponent used in the standardized-moment statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SkewnessMode {
    /// (1/N)·Σ((Dᵢ−μ)/σ)⁴ − 3, the printed formula.
    #[default]
    FourthMomentMinus3,
    /// (1/N)·Σ((Dᵢ−μ)/σ)³, the conventional skewness.
    ThirdMoment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub skewness: SkewnessMode,
    pub degenerate: DegeneratePolicy,
}

/// The nine per-band statistics that depend only on that band's coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
    pub std: f64,
    pub variance: f64,
    pub skewness_stat: f64,
    pub energy: f64,
    pub entropy: f64,
}

impl BandStats {
    pub fn with_rwe(self, rwe: f64) -> BandFeatures {
        BandFeatures {
            min: self.min,
            max: self.max,
            mean: self.mean,
            median: self.median,
            std: self.std,
            variance: self.variance,
            skewness_stat: self.skewness_stat,
            energy: self.energy,
            rwe,
            entropy: self.entropy,
        }
    }
}

/// All ten features of one band in canonical order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandFeatures {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
    pub std: f64,
    pub variance: f64,
    pub skewness_stat: f64,
    pub energy: f64,
    pub rwe: f64,
    pub entropy: f64,
}

impl BandFeatures {
    pub fn as_array(&self) -> [f64; 10] {
        [
            self.min,
            self.max,
            self.mean,
            self.median,
            self.std,
            self.variance,
            self.skewness_stat,
            self.energy,
            self.rwe,
            self.entropy,
        ]
    }
}

/// 50 ordered features of one segment plus its class tag.
///
/// Ordering: bands D1, D2, D3, D4, A4, each contributing its ten statistics
/// in [`STAT_NAMES`] order, so the rwe entries sit at indices 8, 18, 28, 38
/// and 48.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub label: SetId,
}

/// Column names for the 50 features, `<band>_<stat>` in canonical order.
pub fn feature_names() -> Vec<String> {
    let mut names = Vec::with_capacity(FEATURE_COUNT);
    for band in BandId::ALL {
        for stat in STAT_NAMES {
            names.push(format!("{}_{stat}", band.to_string().to_lowercase()));
        }
    }
    names
}

/// Compute every statistic of one coefficient array except its relative
/// wave energy (which needs the whole tree).
pub fn band_stats(
    coeffs: &[f64],
    band: BandId,
    config: &FeatureConfig,
) -> Result<BandStats, FeatureError> {
    assert!(!coeffs.is_empty(), "band_stats on empty coefficient array");
    let n = coeffs.len() as f64;

    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for &c in coeffs {
        min = min.min(c);
        max = max.max(c);
        sum += c;
    }
    let mean = sum / n;

    let mut sq_dev = 0.0;
    let mut energy = 0.0;
    let mut entropy = 0.0;
    for &c in coeffs {
        let d = c - mean;
        sq_dev += d * d;
        let p = c * c;
        energy += p;
        if p > 0.0 {
            entropy += p * p.ln();
        }
    }
    let variance = if coeffs.len() > 1 {
        sq_dev / (n - 1.0)
    } else {
        0.0
    };
    let std = variance.sqrt();

    let skewness_stat = if std == 0.0 {
        match config.degenerate {
            DegeneratePolicy::Error => return Err(FeatureError::DegenerateBand { band }),
            DegeneratePolicy::SubstituteZero => 0.0,
        }
    } else {
        let exponent = match config.skewness {
            SkewnessMode::FourthMomentMinus3 => 4,
            SkewnessMode::ThirdMoment => 3,
        };
        let moment: f64 = coeffs
            .iter()
            .map(|&c| ((c - mean) / std).powi(exponent))
            .sum::<f64>()
            / n;
        match config.skewness {
            SkewnessMode::FourthMomentMinus3 => moment - 3.0,
            SkewnessMode::ThirdMoment => moment,
        }
    };

    let mut sorted = coeffs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite coefficients"));
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };

    Ok(BandStats {
        min,
        max,
        mean,
        median,
        std,
        variance,
        skewness_stat,
        energy,
        entropy,
    })
}

/// Relative wave energy per band: ρⱼ = Eⱼ / E_Total over the five bands of
/// a 4-level tree, in D1, D2, D3, D4, A4 order. The ratios sum to one.
pub fn relative_wave_energy(tree: &DecompositionTree) -> Result<[f64; 5], FeatureError> {
    if tree.levels() != 4 {
        return Err(FeatureError::WrongLevels(tree.levels()));
    }
    let mut energies = [0.0; 5];
    for (i, band) in BandId::ALL.iter().enumerate() {
        let coeffs = tree.band(*band).expect("4-level tree has all bands");
        energies[i] = coeffs.iter().map(|c| c * c).sum();
    }
    let total: f64 = energies.iter().sum();
    if total == 0.0 {
        return Err(FeatureError::ZeroEnergy);
    }
    Ok(energies.map(|e| e / total))
}

/// Assemble the 50-entry feature vector of one decomposed segment.
pub fn feature_vector(
    tree: &DecompositionTree,
    label: SetId,
    config: &FeatureConfig,
) -> Result<FeatureVector, FeatureError> {
    let rwe = relative_wave_energy(tree)?;
    let mut values = Vec::with_capacity(FEATURE_COUNT);
    for (i, band) in BandId::ALL.iter().enumerate() {
        let coeffs = tree.band(*band).expect("4-level tree has all bands");
        let stats = band_stats(coeffs, *band, config)?;
        let features = stats.with_rwe(rwe[i]).as_array();
        for (value, stat) in features.iter().zip(STAT_NAMES) {
            if !value.is_finite() {
                return Err(FeatureError::NonFinite { band: *band, stat });
            }
        }
        values.extend_from_slice(&features);
    }
    Ok(FeatureVector { values, label })
}

/// Write feature vectors as CSV: a header naming all 50 columns plus a
/// final `label` column, one row per segment, full round-trip precision.
pub fn write_feature_csv(path: &Path, vectors: &[FeatureVector]) -> Result<(), FeatureError> {
    let mut out = String::new();
    out.push_str(&feature_names().join(","));
    out.push_str(",label\n");
    for v in vectors {
        debug_assert_eq!(v.values.len(), FEATURE_COUNT);
        for value in &v.values {
            let _ = write!(out, "{value},");
        }
        let _ = writeln!(out, "{}", v.label);
    }
    std::fs::write(path, out).map_err(|source| FeatureError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Read a feature CSV produced by [`write_feature_csv`], validating the
/// header and every field.
pub fn read_feature_csv(path: &Path) -> Result<Vec<FeatureVector>, FeatureError> {
    let text = std::fs::read_to_string(path).map_err(|source| FeatureError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let display = path.display().to_string();
    let csv_err = |line: usize, detail: String| FeatureError::Csv {
        path: display.clone(),
        line,
        detail,
    };

    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| csv_err(1, "empty file".to_string()))?;
    let expected_names = feature_names();
    let header_fields: Vec<&str> = header.split(',').collect();
    if header_fields.len() != FEATURE_COUNT + 1 {
        return Err(csv_err(
            1,
            format!(
                "expected {} columns, found {}",
                FEATURE_COUNT + 1,
                header_fields.len()
            ),
        ));
    }
    for (i, (found, expected)) in header_fields.iter().zip(&expected_names).enumerate() {
        if found != expected {
            return Err(csv_err(
                1,
                format!("column {}: expected {expected:?}, found {found:?}", i + 1),
            ));
        }
    }
    if header_fields[FEATURE_COUNT] != "label" {
        return Err(csv_err(
            1,
            format!("last column must be \"label\", found {:?}", header_fields[FEATURE_COUNT]),
        ));
    }

    let mut vectors = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != FEATURE_COUNT + 1 {
            return Err(csv_err(
                idx + 1,
                format!(
                    "expected {} fields, found {}",
                    FEATURE_COUNT + 1,
                    fields.len()
                ),
            ));
        }
        let mut values = Vec::with_capacity(FEATURE_COUNT);
        for (col, field) in fields[..FEATURE_COUNT].iter().enumerate() {
            let value: f64 = field.parse().map_err(|_| {
                csv_err(
                    idx + 1,
                    format!(
                        "column {} ({}): cannot parse {field:?} as a number",
                        col + 1,
                        expected_names[col]
                    ),
                )
            })?;
            if !value.is_finite() {
                return Err(csv_err(
                    idx + 1,
                    format!("column {} ({}): non-finite value", col + 1, expected_names[col]),
                ));
            }
            values.push(value);
        }
        let label: SetId = fields[FEATURE_COUNT]
            .parse()
            .map_err(|e| csv_err(idx + 1, format!("label column: {e}")))?;
        vectors.push(FeatureVector { values, label });
    }
    Ok(vectors)
}
