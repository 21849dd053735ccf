//! Orthogonal db4 filter bank: multilevel decomposition, per-band
//! reconstruction and the band-to-frequency map.
//!
//! A 4-level decomposition of a 0–60 Hz band-limited segment yields the five
//! sub-bands D1 (gamma), D2 (beta), D3 (alpha), D4 (theta) and A4 (delta).
//! Two boundary extensions are supported: `Symmetric` (half-point mirror, the
//! usual tooling default) and `Periodic` (periodized transform, orthogonal —
//! Parseval and circular-shift identities hold exactly there).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Filter length of the db4 pair.
pub const DB4_LEN: usize = 8;

/// db4 scaling (low-pass) filter, normalized so the taps sum to √2.
const DB4_SCALING: [f64; DB4_LEN] = [
    0.230_377_813_308_855_23,
    0.714_846_570_552_541_5,
    0.630_880_767_929_590_4,
    -0.027_983_769_416_983_85,
    -0.187_034_811_718_881_14,
    0.030_841_381_835_986_965,
    0.032_883_011_666_982_945,
    -0.010_597_401_784_997_278,
];

#[derive(Debug, Error)]
pub enum DwtError {
    #[error("signal too short: {len} samples, need at least {min}")]
    SignalTooShort { len: usize, min: usize },
    #[error("decomposition levels must be in 1..=10, got {0}")]
    LevelError(usize),
    #[error("band {0} not present in this decomposition")]
    BandNotPresent(BandId),
}

/// Boundary handling for the filter bank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtensionMode {
    /// Half-point mirror extension (edge sample repeated).
    Symmetric,
    /// Periodized transform; odd lengths are zero-padded to even before
    /// wrapping, which keeps the transform orthogonal at every length.
    Periodic,
}

impl ExtensionMode {
    /// Coefficient length produced by one analysis step on `n` samples.
    pub fn step_len(self, n: usize) -> usize {
        match self {
            ExtensionMode::Symmetric => (n + DB4_LEN - 1) / 2,
            ExtensionMode::Periodic => n.div_ceil(2),
        }
    }
}

/// An orthonormal analysis filter pair.
///
/// `lowpass` is the scaling filter h, `highpass` the wavelet filter g with
/// the quadrature-mirror relation g\[k\] = (−1)^k · h\[L−1−k\].
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilterPair {
    pub lowpass: [f64; DB4_LEN],
    pub highpass: [f64; DB4_LEN],
}

/// The 8-tap db4 analysis pair (4 vanishing moments).
pub fn db4_filters() -> WaveletFilterPair {
    let lowpass = DB4_SCALING;
    let mut highpass = [0.0; DB4_LEN];
    for (k, g) in highpass.iter_mut().enumerate() {
        let h = lowpass[DB4_LEN - 1 - k];
        *g = if k % 2 == 0 { h } else { -h };
    }
    WaveletFilterPair { lowpass, highpass }
}

/// Identifier of one sub-band of a 4-level decomposition, ordered from the
/// finest detail (D1) to the final approximation (A4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BandId {
    D1,
    D2,
    D3,
    D4,
    A4,
}

impl BandId {
    /// All five bands in the canonical feature order D1, D2, D3, D4, A4.
    pub const ALL: [BandId; 5] = [BandId::D1, BandId::D2, BandId::D3, BandId::D4, BandId::A4];

    /// Physiological rhythm this band nominally carries.
    pub fn nominal_name(self) -> &'static str {
        match self {
            BandId::D1 => "gamma",
            BandId::D2 => "beta",
            BandId::D3 => "alpha",
            BandId::D4 => "theta",
            BandId::A4 => "delta",
        }
    }

    /// Nominal frequency range in Hz for 173.61 Hz data limited to 60 Hz.
    pub fn nominal_range(self) -> (f64, f64) {
        match self {
            BandId::D1 => (30.0, 60.0),
            BandId::D2 => (15.0, 30.0),
            BandId::D3 => (8.0, 15.0),
            BandId::D4 => (4.0, 8.0),
            BandId::A4 => (0.0, 4.0),
        }
    }
}

impl std::fmt::Display for BandId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BandId::D1 => "D1",
            BandId::D2 => "D2",
            BandId::D3 => "D3",
            BandId::D4 => "D4",
            BandId::A4 => "A4",
        };
        f.write_str(s)
    }
}

/// Frequency extent of one band: the nominal range (meaningful for the
/// 4-level map on 60 Hz-limited data) and the exact dyadic split
/// fs/2^(k+1) .. fs/2^k implied by the filter bank alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandRange {
    pub band: BandId,
    pub nominal_lo_hz: f64,
    pub nominal_hi_hz: f64,
    pub dyadic_lo_hz: f64,
    pub dyadic_hi_hz: f64,
}

/// Band-to-frequency map for a 4-level decomposition at sampling rate `fs`,
/// in the order D1, D2, D3, D4, A4.
pub fn band_frequency_map(fs: f64, levels: usize) -> Result<Vec<BandRange>, DwtError> {
    if levels != 4 {
        return Err(DwtError::LevelError(levels));
    }
    Ok(BandId::ALL
        .iter()
        .map(|&band| {
            let (nominal_lo_hz, nominal_hi_hz) = band.nominal_range();
            let (dyadic_lo_hz, dyadic_hi_hz) = match band {
                BandId::D1 => (fs / 4.0, fs / 2.0),
                BandId::D2 => (fs / 8.0, fs / 4.0),
                BandId::D3 => (fs / 16.0, fs / 8.0),
                BandId::D4 => (fs / 32.0, fs / 16.0),
                BandId::A4 => (0.0, fs / 32.0),
            };
            BandRange {
                band,
                nominal_lo_hz,
                nominal_hi_hz,
                dyadic_lo_hz,
                dyadic_hi_hz,
            }
        })
        .collect())
}

/// Result of a multilevel decomposition.
///
/// `details[j]` holds the level-(j+1) detail coefficients, so for four
/// levels the bands live at `details[0]`=D1 … `details[3]`=D4 and `approx`=A4.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionTree {
    details: Vec<Vec<f64>>,
    approx: Vec<f64>,
    mode: ExtensionMode,
    original_length: usize,
}

impl DecompositionTree {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    pub fn mode(&self) -> ExtensionMode {
        self.mode
    }

    pub fn original_length(&self) -> usize {
        self.original_length
    }

    /// Detail coefficients of level `level` (1-based).
    pub fn detail(&self, level: usize) -> Option<&[f64]> {
        if level == 0 {
            return None;
        }
        self.details.get(level - 1).map(Vec::as_slice)
    }

    /// Final approximation coefficients.
    pub fn approx(&self) -> &[f64] {
        &self.approx
    }

    /// Coefficients of one named band of a 4-level tree.
    pub fn band(&self, band: BandId) -> Result<&[f64], DwtError> {
        let coeffs = match band {
            BandId::D1 => self.details.first(),
            BandId::D2 => self.details.get(1),
            BandId::D3 => self.details.get(2),
            BandId::D4 => self.details.get(3),
            BandId::A4 => {
                if self.levels() == 4 {
                    Some(&self.approx)
                } else {
                    None
                }
            }
        };
        coeffs
            .map(Vec::as_slice)
            .ok_or(DwtError::BandNotPresent(band))
    }

    /// Bands in canonical order with their coefficients (4-level trees).
    pub fn bands(&self) -> Result<Vec<(BandId, &[f64])>, DwtError> {
        BandId::ALL
            .iter()
            .map(|&b| self.band(b).map(|c| (b, c)))
            .collect()
    }

    /// Total energy across all coefficient arrays.
    pub fn total_energy(&self) -> f64 {
        let det: f64 = self
            .details
            .iter()
            .map(|d| d.iter().map(|c| c * c).sum::<f64>())
            .sum();
        det + self.approx.iter().map(|c| c * c).sum::<f64>()
    }

    /// Length of the approximation signal entering each level, index 0 being
    /// the original signal.
    fn level_input_lengths(&self) -> Vec<usize> {
        let mut lens = Vec::with_capacity(self.levels() + 1);
        let mut n = self.original_length;
        lens.push(n);
        for _ in 0..self.levels() {
            n = self.mode.step_len(n);
            lens.push(n);
        }
        lens
    }

    /// Invert the full tree back to the original signal.
    pub fn reconstruct(&self) -> Vec<f64> {
        let filters = db4_filters();
        let lens = self.level_input_lengths();
        let mut cur = self.approx.clone();
        for level in (1..=self.levels()).rev() {
            cur = idwt_step(
                &cur,
                &self.details[level - 1],
                &filters,
                self.mode,
                lens[level - 1],
            );
        }
        cur
    }
}

/// One analysis step: extend, filter with both channels, downsample by two.
pub fn dwt_step(
    x: &[f64],
    filters: &WaveletFilterPair,
    mode: ExtensionMode,
) -> Result<(Vec<f64>, Vec<f64>), DwtError> {
    if x.len() < DB4_LEN {
        return Err(DwtError::SignalTooShort {
            len: x.len(),
            min: DB4_LEN,
        });
    }
    Ok(match mode {
        ExtensionMode::Periodic => dwt_step_periodic(x, filters),
        ExtensionMode::Symmetric => dwt_step_symmetric(x, filters),
    })
}

fn dwt_step_periodic(x: &[f64], filters: &WaveletFilterPair) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let m = n.div_ceil(2);
    let wrap = 2 * m; // zero-pad odd lengths to even before wrapping
    let mut approx = Vec::with_capacity(m);
    let mut detail = Vec::with_capacity(m);
    for i in 0..m {
        let mut a = 0.0;
        let mut d = 0.0;
        for k in 0..DB4_LEN {
            let idx = (2 * i + k) % wrap;
            if idx < n {
                a += filters.lowpass[k] * x[idx];
                d += filters.highpass[k] * x[idx];
            }
        }
        approx.push(a);
        detail.push(d);
    }
    (approx, detail)
}

fn dwt_step_symmetric(x: &[f64], filters: &WaveletFilterPair) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let pad = DB4_LEN - 1;
    let ext = symmetric_extend(x, pad);
    let m = (n + DB4_LEN - 1) / 2;
    let mut approx = Vec::with_capacity(m);
    let mut detail = Vec::with_capacity(m);
    for i in 0..m {
        let mut a = 0.0;
        let mut d = 0.0;
        // full convolution sampled at odd indices: ext[2i + L - k]
        for k in 0..DB4_LEN {
            let v = ext[2 * i + DB4_LEN - k];
            a += filters.lowpass[k] * v;
            d += filters.highpass[k] * v;
        }
        approx.push(a);
        detail.push(d);
    }
    (approx, detail)
}

/// Half-point symmetric extension by `pad` samples on each side.
fn symmetric_extend(x: &[f64], pad: usize) -> Vec<f64> {
    let n = x.len();
    debug_assert!(pad <= n);
    let mut ext = Vec::with_capacity(n + 2 * pad);
    for i in (0..pad).rev() {
        ext.push(x[i]);
    }
    ext.extend_from_slice(x);
    for i in 0..pad {
        ext.push(x[n - 1 - i]);
    }
    ext
}

/// One synthesis step, producing `target_len` samples.
fn idwt_step(
    approx: &[f64],
    detail: &[f64],
    filters: &WaveletFilterPair,
    mode: ExtensionMode,
    target_len: usize,
) -> Vec<f64> {
    debug_assert_eq!(approx.len(), detail.len());
    match mode {
        ExtensionMode::Periodic => {
            let m = approx.len();
            let wrap = 2 * m;
            let mut out = vec![0.0; wrap];
            for i in 0..m {
                for k in 0..DB4_LEN {
                    out[(2 * i + k) % wrap] +=
                        approx[i] * filters.lowpass[k] + detail[i] * filters.highpass[k];
                }
            }
            out.truncate(target_len);
            out
        }
        ExtensionMode::Symmetric => {
            let m = approx.len();
            let rec_len = 2 * m + DB4_LEN - 2;
            let mut rec = vec![0.0; rec_len];
            // time-reversed filters placed at even offsets: rec[2i + k] += c * f[L-1-k]
            for i in 0..m {
                for k in 0..DB4_LEN {
                    rec[2 * i + k] += approx[i] * filters.lowpass[DB4_LEN - 1 - k]
                        + detail[i] * filters.highpass[DB4_LEN - 1 - k];
                }
            }
            // analysis introduces a group delay of L-2 samples
            rec[DB4_LEN - 2..DB4_LEN - 2 + target_len].to_vec()
        }
    }
}

/// Multilevel decomposition of `x`.
pub fn decompose(
    x: &[f64],
    levels: usize,
    mode: ExtensionMode,
) -> Result<DecompositionTree, DwtError> {
    if !(1..=10).contains(&levels) {
        return Err(DwtError::LevelError(levels));
    }
    let min = DB4_LEN << levels;
    if x.len() < min {
        return Err(DwtError::SignalTooShort { len: x.len(), min });
    }
    let filters = db4_filters();
    let mut details = Vec::with_capacity(levels);
    let mut cur = x.to_vec();
    for _ in 0..levels {
        let (a, d) = dwt_step(&cur, &filters, mode)?;
        details.push(d);
        cur = a;
    }
    Ok(DecompositionTree {
        details,
        approx: cur,
        mode,
        original_length: x.len(),
    })
}

/// Inverse transform with every coefficient array zeroed except the one
/// entering at `start_level`: the detail of that level when `detail0` is
/// set, the final approximation otherwise.
fn reconstruct_single(
    tree: &DecompositionTree,
    start_level: usize,
    approx0: Vec<f64>,
    detail0: Vec<f64>,
) -> Vec<f64> {
    let filters = db4_filters();
    let lens = tree.level_input_lengths();
    let mut cur = idwt_step(&approx0, &detail0, &filters, tree.mode, lens[start_level - 1]);
    for level in (1..start_level).rev() {
        let zeros = vec![0.0; tree.details[level - 1].len()];
        cur = idwt_step(&cur, &zeros, &filters, tree.mode, lens[level - 1]);
    }
    cur
}

/// Time-domain contribution of the detail band at `level` (1-based).
pub fn reconstruct_detail(tree: &DecompositionTree, level: usize) -> Result<Vec<f64>, DwtError> {
    let d = tree
        .detail(level)
        .ok_or(DwtError::LevelError(level))?
        .to_vec();
    let zeros = vec![0.0; d.len()];
    Ok(reconstruct_single(tree, level, zeros, d))
}

/// Time-domain contribution of the final approximation band.
pub fn reconstruct_approx(tree: &DecompositionTree) -> Vec<f64> {
    let a = tree.approx.clone();
    let zeros = vec![0.0; a.len()];
    reconstruct_single(tree, tree.levels(), a, zeros)
}

/// Reconstruct the time-domain contribution of a single band: the inverse
/// transform with every other band zeroed. Summing the reconstructions of
/// all bands reproduces the original signal.
pub fn reconstruct_band(tree: &DecompositionTree, band: BandId) -> Result<Vec<f64>, DwtError> {
    tree.band(band)?;
    match band {
        BandId::A4 => Ok(reconstruct_approx(tree)),
        BandId::D1 => reconstruct_detail(tree, 1),
        BandId::D2 => reconstruct_detail(tree, 2),
        BandId::D3 => reconstruct_detail(tree, 3),
        BandId::D4 => reconstruct_detail(tree, 4),
    }
}
