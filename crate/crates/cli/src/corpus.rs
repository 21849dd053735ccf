//! Corpus access for the CLI: load sets from disk or synthesize the
//! deterministic surrogate corpus.
//!
//! Loading first tries the flat layout `corpus_dir/Z001.txt`, then the
//! per-set subdirectories the public archives unpack into
//! (`corpus_dir/Z/Z001.txt` and `corpus_dir/A/Z001.txt`).

use std::path::PathBuf;

use ictal_core::ingest::{
    load_segment, load_set, synth_segment, EegSegment, IngestError, SegmentCollection, SetId,
    CORPUS_FS, CORPUS_SEGMENT_LEN, CORPUS_SET_SIZE,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::config::Resolved;
use crate::error::CliError;

/// Per-set surrogate recipe: (frequency Hz, amplitude) components plus a
/// noise level. Amplitudes for set E are an order of magnitude larger,
/// mimicking the high-voltage ictal pattern.
fn recipe(set: SetId) -> (Vec<(f64, f64)>, f64) {
    match set {
        SetId::A => (vec![(10.2, 45.0), (19.0, 8.0)], 12.0),
        SetId::B => (vec![(9.4, 55.0), (11.0, 10.0)], 10.0),
        SetId::C => (vec![(5.8, 35.0), (13.0, 12.0)], 16.0),
        SetId::D => (vec![(4.8, 33.0), (16.0, 10.0)], 18.0),
        SetId::E => (vec![(2.8, 260.0), (7.5, 140.0), (22.0, 60.0)], 55.0),
    }
}

fn segment_seed(base: u64, set: SetId, index: u32) -> u64 {
    let set_tag = set.filename_prefix() as u64;
    base.wrapping_mul(0x100000001b3)
        .wrapping_add(set_tag << 32)
        .wrapping_add(index as u64)
}

/// One synthetic segment with per-segment frequency and amplitude jitter.
pub fn synth_corpus_segment(base_seed: u64, set: SetId, index: u32) -> EegSegment {
    let seed = segment_seed(base_seed, set, index);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let (components, noise) = recipe(set);
    let jittered: Vec<(f64, f64)> = components
        .iter()
        .map(|&(f, a)| {
            let fj = f * (1.0 + 0.06 * (rng.random::<f64>() - 0.5));
            let aj = a * (1.0 + 0.2 * (rng.random::<f64>() - 0.5));
            (fj, aj)
        })
        .collect();
    synth_segment(
        &jittered,
        noise,
        CORPUS_SEGMENT_LEN,
        CORPUS_FS,
        seed.wrapping_add(1),
    )
    .expect("surrogate recipe satisfies the synthesis preconditions")
    .with_identity(set, index)
}

fn synth_set(base_seed: u64, set: SetId) -> SegmentCollection {
    let segments = (1..=CORPUS_SET_SIZE as u32)
        .map(|i| synth_corpus_segment(base_seed, set, i))
        .collect();
    SegmentCollection { segments, set_id: set }
}

fn corpus_candidates(cfg: &Resolved, set: SetId) -> Vec<PathBuf> {
    vec![
        cfg.corpus_dir.clone(),
        cfg.corpus_dir.join(set.filename_prefix().to_string()),
        cfg.corpus_dir.join(set.to_string()),
    ]
}

/// All 100 segments of one set, from disk or synthesized.
pub fn obtain_set(cfg: &Resolved, set: SetId) -> Result<SegmentCollection, CliError> {
    if cfg.synthetic {
        return Ok(synth_set(cfg.seed, set));
    }
    let mut first_err: Option<IngestError> = None;
    for dir in corpus_candidates(cfg, set) {
        match load_set(&dir, set, cfg.strict) {
            Ok(coll) => return Ok(coll),
            Err(e @ IngestError::MissingFiles { .. }) => {
                first_err.get_or_insert(e);
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(first_err.expect("at least one candidate directory was tried").into())
}

/// A single segment, for `plot` and `decompose`.
pub fn obtain_segment(cfg: &Resolved, set: SetId, index: u32) -> Result<EegSegment, CliError> {
    if index == 0 || index > CORPUS_SET_SIZE as u32 {
        return Err(CliError::Usage(format!(
            "segment index must be within 1..={CORPUS_SET_SIZE}, got {index}"
        )));
    }
    if cfg.synthetic {
        return Ok(synth_corpus_segment(cfg.seed, set, index));
    }
    let name = format!("{}{index:03}.txt", set.filename_prefix());
    for dir in corpus_candidates(cfg, set) {
        let path = dir.join(&name);
        if path.is_file() {
            let mut seg = load_segment(&path, cfg.strict)?;
            seg.set_id = set;
            seg.segment_index = index;
            return Ok(seg);
        }
    }
    Err(CliError::Data(format!(
        "ingest: segment file {name} not found under {}",
        cfg.corpus_dir.display()
    )))
}
