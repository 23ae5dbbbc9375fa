//! CTCP posterior files.
//!
//! Layout (all little-endian): magic `CTCP`, `u32` frame count T, `u32`
//! class count C, `u32` frame duration in microseconds, then `T·C` `f32`
//! log-probabilities, frame-major. The vocabulary lives next to it in
//! `<stem>.vocab.json`, a JSON array of token strings indexed by position.

use std::path::{Path, PathBuf};

use super::{AlignError, LogPosteriorMatrix, Vocabulary};

pub const CTCP_MAGIC: &[u8; 4] = b"CTCP";
const HEADER_LEN: usize = 16;

pub fn vocab_sidecar_path(posteriors: &Path) -> PathBuf {
    posteriors.with_extension("vocab.json")
}

pub fn decode_ctcp(bytes: &[u8], vocab: Vocabulary) -> Result<LogPosteriorMatrix, AlignError> {
    if bytes.len() < 4 || &bytes[..4] != CTCP_MAGIC {
        return Err(AlignError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(AlignError::DimensionMismatch(format!(
            "header truncated at {} bytes",
            bytes.len()
        )));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
    let (frames, classes, frame_us) = (word(4), word(8), word(12));
    if classes != vocab.len() {
        return Err(AlignError::DimensionMismatch(format!(
            "header says C = {classes}, vocabulary has {} tokens",
            vocab.len()
        )));
    }
    let payload = &bytes[HEADER_LEN..];
    let expected = frames
        .checked_mul(classes)
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| AlignError::DimensionMismatch("T·C overflows".into()))?;
    if payload.len() != expected {
        return Err(AlignError::DimensionMismatch(format!(
            "payload is {} bytes, {frames}x{classes} needs {expected}",
            payload.len()
        )));
    }
    if frame_us == 0 {
        return Err(AlignError::InvalidFrameDuration);
    }
    let data = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
        .collect();
    LogPosteriorMatrix::new(data, frames, frame_us as f64 / 1e6, vocab)
}

/// Values are narrowed to `f32`; the frame duration is rounded to whole
/// microseconds.
pub fn encode_ctcp(matrix: &LogPosteriorMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * matrix.values().len());
    out.extend_from_slice(CTCP_MAGIC);
    out.extend_from_slice(&(matrix.frames() as u32).to_le_bytes());
    out.extend_from_slice(&(matrix.classes() as u32).to_le_bytes());
    out.extend_from_slice(&((matrix.frame_duration_s() * 1e6).round() as u32).to_le_bytes());
    for &v in matrix.values() {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    out
}

fn read(path: &Path) -> Result<Vec<u8>, AlignError> {
    std::fs::read(path).map_err(|source| AlignError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), AlignError> {
    std::fs::write(path, bytes).map_err(|source| AlignError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a CTCP file and its `.vocab.json` sidecar.
pub fn load_posteriors(path: impl AsRef<Path>) -> Result<LogPosteriorMatrix, AlignError> {
    let path = path.as_ref();
    let sidecar = vocab_sidecar_path(path);
    let tokens: Vec<String> = serde_json::from_slice(&read(&sidecar)?)
        .map_err(|e| AlignError::BadVocabulary(format!("{}: {e}", sidecar.display())))?;
    decode_ctcp(&read(path)?, Vocabulary::new(tokens)?)
}

/// Writes the CTCP file and its sidecar.
pub fn save_posteriors(matrix: &LogPosteriorMatrix, path: impl AsRef<Path>) -> Result<(), AlignError> {
    let path = path.as_ref();
    let vocab = serde_json::to_vec(matrix.vocab().tokens()).expect("string list serializes");
    write(&vocab_sidecar_path(path), &vocab)?;
    write(path, &encode_ctcp(matrix))
}
