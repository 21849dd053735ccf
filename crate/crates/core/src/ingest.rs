//! Corpus loading, validation and synthetic surrogate segments.
//!
//! The on-disk layout follows the public Bonn distribution: five sets named
//! A–E, each holding 100 plain-text files with one amplitude per line and
//! filenames `{Z,O,N,F,S}{001..100}.txt` (Z→A, O→B, N→C, F→D, S→E). Corpus
//! segments are 4097 samples at 173.61 Hz.
//!
//! [`synth_segment`] builds deterministic surrogate segments (sums of
//! sinusoids plus Gaussian noise) so the whole pipeline can be exercised
//! without the corpus on disk.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Sampling rate of the corpus recordings in Hz.
pub const CORPUS_FS: f64 = 173.61;
/// Samples per corpus segment.
pub const CORPUS_SEGMENT_LEN: usize = 4097;
/// Segments per corpus set.
pub const CORPUS_SET_SIZE: usize = 100;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}:{line}: cannot parse {content:?} as a finite number")]
    Parse {
        path: String,
        line: usize,
        content: String,
    },
    #[error("{path}: expected {expected} samples, found {got} (strict mode)")]
    Length {
        path: String,
        expected: usize,
        got: usize,
    },
    #[error("set {set}: missing segment files for indices {missing:?}")]
    MissingFiles { set: SetId, missing: Vec<u32> },
    #[error("component at {freq_hz} Hz violates the Nyquist limit {nyquist} Hz")]
    Alias { freq_hz: f64, nyquist: f64 },
    #[error("synthetic segment needs at least 64 samples, got {0}")]
    SynthTooShort(usize),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Which of the five corpus sets a segment belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetId {
    /// Healthy volunteers, eyes open (files Z###).
    A,
    /// Healthy volunteers, eyes closed (files O###).
    B,
    /// Interictal, hippocampal formation opposite the epileptogenic zone (N###).
    C,
    /// Interictal, epileptogenic zone (F###).
    D,
    /// Ictal: seizure activity (S###).
    E,
}

impl SetId {
    pub const ALL: [SetId; 5] = [SetId::A, SetId::B, SetId::C, SetId::D, SetId::E];

    /// First letter of this set's corpus filenames.
    pub fn filename_prefix(self) -> char {
        match self {
            SetId::A => 'Z',
            SetId::B => 'O',
            SetId::C => 'N',
            SetId::D => 'F',
            SetId::E => 'S',
        }
    }

    pub fn from_prefix(c: char) -> Option<SetId> {
        match c.to_ascii_uppercase() {
            'Z' => Some(SetId::A),
            'O' => Some(SetId::B),
            'N' => Some(SetId::C),
            'F' => Some(SetId::D),
            'S' => Some(SetId::E),
            _ => None,
        }
    }
}

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SetId::A => "A",
            SetId::B => "B",
            SetId::C => "C",
            SetId::D => "D",
            SetId::E => "E",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for SetId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(SetId::A),
            "B" => Ok(SetId::B),
            "C" => Ok(SetId::C),
            "D" => Ok(SetId::D),
            "E" => Ok(SetId::E),
            other => Err(format!("unknown set {other:?}, expected one of A..E")),
        }
    }
}

/// One channel of raw EEG samples with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EegSegment {
    pub samples: Vec<f64>,
    /// Sampling rate in Hz.
    pub fs: f64,
    pub set_id: SetId,
    /// 1-based index within the set.
    pub segment_index: u32,
}

impl EegSegment {
    /// Reassign provenance, e.g. when synthesizing a surrogate corpus.
    pub fn with_identity(mut self, set_id: SetId, segment_index: u32) -> Self {
        self.set_id = set_id;
        self.segment_index = segment_index;
        self
    }
}

/// All segments of one corpus set, sorted by segment index.
#[derive(Debug, Clone)]
pub struct SegmentCollection {
    pub segments: Vec<EegSegment>,
    pub set_id: SetId,
}

/// The four binary classification cases; the negative class is always the
/// ictal set E.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::Case1, CaseId::Case2, CaseId::Case3, CaseId::Case4];

    pub fn number(self) -> u8 {
        match self {
            CaseId::Case1 => 1,
            CaseId::Case2 => 2,
            CaseId::Case3 => 3,
            CaseId::Case4 => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<CaseId> {
        match n {
            1 => Some(CaseId::Case1),
            2 => Some(CaseId::Case2),
            3 => Some(CaseId::Case3),
            4 => Some(CaseId::Case4),
            _ => None,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case{}", self.number())
    }
}

/// Pairing of a positive (non-seizure) set with the negative set E.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub case_id: CaseId,
    pub positive_set: SetId,
    pub negative_set: SetId,
}

impl CaseSpec {
    pub fn new(case_id: CaseId) -> CaseSpec {
        let positive_set = match case_id {
            CaseId::Case1 => SetId::A,
            CaseId::Case2 => SetId::B,
            CaseId::Case3 => SetId::C,
            CaseId::Case4 => SetId::D,
        };
        CaseSpec {
            case_id,
            positive_set,
            negative_set: SetId::E,
        }
    }

    /// Human-readable pairing, e.g. "Set A vs Set E".
    pub fn description(&self) -> String {
        format!("Set {} vs Set {}", self.positive_set, self.negative_set)
    }
}

fn io_err(path: &Path, source: std::io::Error) -> IngestError {
    IngestError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Load a single corpus file: one amplitude per line.
///
/// The set is inferred from the filename prefix and the segment index from
/// the trailing digits; files without a recognizable name load as set A,
/// index 0. With `strict` the file must hold exactly 4097 values; a lenient
/// load only tolerates trailing blank lines.
pub fn load_segment(path: &Path, strict: bool) -> Result<EegSegment, IngestError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let display = path.display().to_string();

    let mut samples = Vec::new();
    let mut blank_run = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            blank_run += 1;
            continue;
        }
        if blank_run > 0 {
            // a blank line followed by data is malformed in any mode
            return Err(IngestError::Parse {
                path: display,
                line: i + 1 - blank_run,
                content: String::new(),
            });
        }
        let value: f64 = line.parse().map_err(|_| IngestError::Parse {
            path: display.clone(),
            line: i + 1,
            content: line.to_string(),
        })?;
        if !value.is_finite() {
            return Err(IngestError::Parse {
                path: display.clone(),
                line: i + 1,
                content: line.to_string(),
            });
        }
        samples.push(value);
    }
    if strict && blank_run > 0 {
        return Err(IngestError::Length {
            path: display,
            expected: CORPUS_SEGMENT_LEN,
            got: samples.len() + blank_run,
        });
    }
    if strict && samples.len() != CORPUS_SEGMENT_LEN {
        return Err(IngestError::Length {
            path: display,
            expected: CORPUS_SEGMENT_LEN,
            got: samples.len(),
        });
    }

    let (set_id, segment_index) = identity_from_filename(path);
    Ok(EegSegment {
        samples,
        fs: CORPUS_FS,
        set_id,
        segment_index,
    })
}

fn identity_from_filename(path: &Path) -> (SetId, u32) {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    let set = stem
        .chars()
        .next()
        .and_then(SetId::from_prefix)
        .unwrap_or(SetId::A);
    let index = stem
        .chars()
        .skip(1)
        .collect::<String>()
        .parse::<u32>()
        .unwrap_or(0);
    (set, index)
}

/// Load the 100 segments of one set from `dir`, sorted by segment index.
pub fn load_set(dir: &Path, set_id: SetId, strict: bool) -> Result<SegmentCollection, IngestError> {
    let prefix = set_id.filename_prefix();
    let mut missing = Vec::new();
    let mut paths = Vec::with_capacity(CORPUS_SET_SIZE);
    for index in 1..=CORPUS_SET_SIZE as u32 {
        let name = format!("{prefix}{index:03}.txt");
        let path = dir.join(&name);
        if path.is_file() {
            paths.push((index, path));
        } else {
            missing.push(index);
        }
    }
    if !missing.is_empty() {
        return Err(IngestError::MissingFiles {
            set: set_id,
            missing,
        });
    }

    let mut segments = Vec::with_capacity(CORPUS_SET_SIZE);
    for (index, path) in paths {
        let mut seg = load_segment(&path, strict)?;
        seg.set_id = set_id;
        seg.segment_index = index;
        segments.push(seg);
    }
    Ok(SegmentCollection { segments, set_id })
}

/// Write a segment in the corpus text format (one value per line, full
/// round-trip precision). Re-loading yields bit-identical samples.
pub fn write_segment(path: &Path, segment: &EegSegment) -> Result<(), IngestError> {
    let mut out = String::with_capacity(segment.samples.len() * 8);
    for v in &segment.samples {
        out.push_str(&format!("{v}\n"));
    }
    let mut file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    file.write_all(out.as_bytes()).map_err(|e| io_err(path, e))
}

/// Deterministic surrogate segment: sample i is
/// Σₖ aₖ·sin(2π fₖ i / fs) plus N(0, noise_std²) noise from a seeded stream.
pub fn synth_segment(
    components: &[(f64, f64)],
    noise_std: f64,
    n: usize,
    fs: f64,
    seed: u64,
) -> Result<EegSegment, IngestError> {
    let nyquist = fs / 2.0;
    for &(freq_hz, _) in components {
        if freq_hz >= nyquist {
            return Err(IngestError::Alias { freq_hz, nyquist });
        }
    }
    if n < 64 {
        return Err(IngestError::SynthTooShort(n));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let two_pi = 2.0 * std::f64::consts::PI;
    let samples = (0..n)
        .map(|i| {
            let mut v = 0.0;
            for &(freq, amp) in components {
                v += amp * (two_pi * freq * i as f64 / fs).sin();
            }
            if noise_std > 0.0 {
                v += noise_std * standard_normal(&mut rng);
            }
            v
        })
        .collect();

    Ok(EegSegment {
        samples,
        fs,
        set_id: SetId::A,
        segment_index: 1,
    })
}

/// One Box–Muller draw from N(0, 1).
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
