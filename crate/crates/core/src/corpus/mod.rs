//! Utterance records and everything between aligned clips and a training
//! recipe: emotion labels, train/dev/test splits, and Kaldi-style manifest
//! directories.

mod emotion;
mod manifest;
mod records;
mod split;
mod validate;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use emotion::{apply_labels, ingest_labels, parse_labels, suggest_emotion, EmotionThresholds};
pub use manifest::{emit_manifests, read_manifests, ManifestOptions, MANIFEST_FILES};
pub use records::{format_records_tsv, parse_records_tsv, read_records_tsv};
pub use split::{split, Split, SplitSpec, SplitStrategy};
pub use validate::{validate_manifest, IssueKind, ManifestIssue, ValidationReport};

pub const DEFAULT_SPEAKER_ID: &str = "commentator01";

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("duplicate utterance id {0}")]
    DuplicateUttId(String),
    #[error("line {line}: unknown emotion label {label:?}")]
    UnknownLabel { line: usize, label: String },
    #[error("{file} line {line}: {reason}")]
    MalformedLine { file: String, line: usize, reason: String },
    #[error("cannot take {requested} dev+test utterances from {available} records")]
    NotEnoughRecords { requested: usize, available: usize },
    #[error("F0 track has no voiced frames")]
    NoVoicedFrames,
    #[error("invalid pitch thresholds: need 0 < t1 < t2, got {0} / {1}")]
    InvalidThresholds(f64, f64),
    #[error("utterance {0} has no emotion label")]
    Unlabeled(String),
    #[error("utterance {0} refers to a recording with no audio path")]
    UnresolvedAudio(String),
    #[error("utterance {utt_id}: {reason}")]
    InvalidRecord { utt_id: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmotionLabel {
    Neutral,
    Excited,
    VeryExcited,
}

impl EmotionLabel {
    pub const ALL: [EmotionLabel; 3] = [Self::Neutral, Self::Excited, Self::VeryExcited];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Neutral => "neutral",
            Self::Excited => "excited",
            Self::VeryExcited => "very_excited",
        }
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EmotionLabel {
    type Err = String;

    /// Case-insensitive; accepts `very_excited`, `very-excited` and
    /// `veryexcited`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "neutral" => Ok(Self::Neutral),
            "excited" => Ok(Self::Excited),
            "very_excited" | "veryexcited" => Ok(Self::VeryExcited),
            other => Err(format!("unknown emotion label {other:?}")),
        }
    }
}

/// One training utterance: a span of a recording plus its text and label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtteranceRecord {
    pub utt_id: String,
    pub recording_id: String,
    pub start_s: f64,
    pub end_s: f64,
    pub text_raw: String,
    pub text_vowelized: String,
    /// `None` until suggested or ingested.
    pub emotion: Option<EmotionLabel>,
    pub align_score: Option<f64>,
    pub speaker_id: String,
}

impl UtteranceRecord {
    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }

    /// Checks the record-level invariants manifests rely on.
    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |reason: &str| {
            Err(CorpusError::InvalidRecord {
                utt_id: self.utt_id.clone(),
                reason: reason.to_string(),
            })
        };
        let is_field = |s: &str| !s.is_empty() && !s.chars().any(char::is_whitespace);
        if !is_field(&self.utt_id) || !is_field(&self.recording_id) || !is_field(&self.speaker_id) {
            return bad("ids must be non-empty and contain no whitespace");
        }
        if !self.utt_id.starts_with(&self.recording_id) {
            return bad("utterance id must begin with its recording id");
        }
        if !(self.start_s >= 0.0 && self.start_s < self.end_s && self.end_s.is_finite()) {
            return bad("need 0 <= start < end");
        }
        for text in [&self.text_raw, &self.text_vowelized] {
            if text.contains(['\n', '\r']) || text.trim() != text.as_str() {
                return bad("texts must be single-line without surrounding whitespace");
            }
        }
        if self.align_score.is_some_and(|s| s.is_nan() || s > 0.0) {
            return bad("alignment score must be <= 0");
        }
        Ok(())
    }
}
