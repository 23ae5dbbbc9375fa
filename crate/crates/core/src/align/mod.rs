//! CTC forced alignment of utterance transcripts against per-frame ASR
//! log-posteriors.
//!
//! The transcripts of all utterances in a long recording are concatenated
//! into one token sequence and aligned with a stay/advance Viterbi trellis
//! (see [`viterbi`]). The single best path is then split back into
//! per-utterance spans, each scored by its weakest window of aligned
//! log-posteriors.

mod posteriors;
mod trellis;

use std::collections::HashMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use posteriors::{decode_ctcp, encode_ctcp, load_posteriors, save_posteriors, vocab_sidecar_path, CTCP_MAGIC};
pub use trellis::{align, emit_segments, filter_by_score, viterbi, Alignment};

/// Entries above this are not log-probabilities (slack for float noise).
pub const LOG_PROB_SLACK: f64 = 1e-6;
pub const BLANK_TOKEN: &str = "<blank>";

#[derive(Debug, thiserror::Error)]
pub enum AlignError {
    #[error("not a CTCP file (bad magic bytes)")]
    BadMagic,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entry at frame {frame}, class {class} is {value}, not a log-probability")]
    NotLogProb { frame: usize, class: usize, value: f64 },
    #[error("cannot align {tokens} tokens to {frames} frames")]
    InfeasibleAlignment { tokens: usize, frames: usize },
    #[error("token {token:?} is not in the vocabulary")]
    TokenOutOfVocab { token: String },
    #[error("utterance {index} has no tokens")]
    EmptyUtterance { index: usize },
    #[error("nothing to align or emit")]
    Empty,
    #[error("bad vocabulary: {0}")]
    BadVocabulary(String),
    #[error("frame duration must be positive")]
    InvalidFrameDuration,
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Character vocabulary of the acoustic model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    blank_index: usize,
    lookup: HashMap<String, usize>,
}

impl Vocabulary {
    /// Blank is the `<blank>` entry if present, otherwise index 0.
    pub fn new(tokens: Vec<String>) -> Result<Self, AlignError> {
        let blank_index = tokens.iter().position(|t| t == BLANK_TOKEN).unwrap_or(0);
        Self::with_blank(tokens, blank_index)
    }

    pub fn with_blank(tokens: Vec<String>, blank_index: usize) -> Result<Self, AlignError> {
        if tokens.len() < 2 {
            return Err(AlignError::BadVocabulary(format!(
                "need at least 2 classes, got {}",
                tokens.len()
            )));
        }
        if blank_index >= tokens.len() {
            return Err(AlignError::BadVocabulary(format!(
                "blank index {blank_index} out of range"
            )));
        }
        let mut lookup = HashMap::with_capacity(tokens.len());
        for (i, t) in tokens.iter().enumerate() {
            if lookup.insert(t.clone(), i).is_some() {
                return Err(AlignError::BadVocabulary(format!("duplicate token {t:?}")));
            }
        }
        Ok(Self {
            tokens,
            blank_index,
            lookup,
        })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn blank_index(&self) -> usize {
        self.blank_index
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.lookup.get(token).copied()
    }

    /// Maps a transcript to token ids, one per character. Whitespace becomes
    /// the `" "` or `"|"` token when the vocabulary has one and is dropped
    /// otherwise.
    pub fn encode(&self, text: &str) -> Result<Vec<usize>, AlignError> {
        let space = self.index_of(" ").or_else(|| self.index_of("|"));
        let mut ids = Vec::new();
        let mut buf = [0u8; 4];
        for c in text.trim().chars() {
            if c.is_whitespace() {
                if let Some(id) = space {
                    // Collapse whitespace runs.
                    if ids.last() != Some(&id) {
                        ids.push(id);
                    }
                }
                continue;
            }
            let s: &str = c.encode_utf8(&mut buf);
            match self.index_of(s) {
                Some(id) if id != self.blank_index => ids.push(id),
                _ => {
                    return Err(AlignError::TokenOutOfVocab {
                        token: s.to_string(),
                    })
                }
            }
        }
        Ok(ids)
    }
}

/// `T × C` frame-major log-probabilities with their frame duration.
#[derive(Debug, Clone, PartialEq)]
pub struct LogPosteriorMatrix {
    frames: usize,
    classes: usize,
    data: Vec<f64>,
    frame_duration_s: f64,
    vocab: Vocabulary,
}

impl LogPosteriorMatrix {
    pub fn new(
        data: Vec<f64>,
        frames: usize,
        frame_duration_s: f64,
        vocab: Vocabulary,
    ) -> Result<Self, AlignError> {
        let classes = vocab.len();
        if frames == 0 {
            return Err(AlignError::DimensionMismatch("T must be >= 1".into()));
        }
        if data.len() != frames * classes {
            return Err(AlignError::DimensionMismatch(format!(
                "expected {frames}x{classes} = {} values, got {}",
                frames * classes,
                data.len()
            )));
        }
        if !(frame_duration_s > 0.0 && frame_duration_s.is_finite()) {
            return Err(AlignError::InvalidFrameDuration);
        }
        if let Some(pos) = data.iter().position(|v| v.is_nan() || *v > LOG_PROB_SLACK) {
            return Err(AlignError::NotLogProb {
                frame: pos / classes,
                class: pos % classes,
                value: data[pos],
            });
        }
        Ok(Self {
            frames,
            classes,
            data,
            frame_duration_s,
            vocab,
        })
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn frame_duration_s(&self) -> f64 {
        self.frame_duration_s
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, frame: usize, class: usize) -> f64 {
        self.data[frame * self.classes + class]
    }

    pub fn row(&self, frame: usize) -> &[f64] {
        &self.data[frame * self.classes..(frame + 1) * self.classes]
    }

    /// Copy with `shift[t]` added to every class of frame `t`. Shifts are
    /// not re-validated; the result may leave the log-probability range.
    pub fn shifted(&self, shift: &[f64]) -> Self {
        assert_eq!(shift.len(), self.frames);
        let mut out = self.clone();
        for (t, row) in out.data.chunks_mut(self.classes).enumerate() {
            row.iter_mut().for_each(|v| *v += shift[t]);
        }
        out
    }
}

/// How the trellis scores a frame that does not consume a new token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StayMode {
    /// Only blank may be emitted between tokens.
    BlankOnly,
    /// The better of blank and a repeat of the current token.
    #[default]
    BlankOrRepeat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlignConfig {
    pub stay: StayMode,
    /// Width of the sliding window used for the confidence score, in frames.
    pub window: usize,
    /// Utterances scoring below this are dropped. No default threshold.
    pub min_score: Option<f64>,
}

impl Default for AlignConfig {
    fn default() -> Self {
        Self {
            stay: StayMode::BlankOrRepeat,
            window: 10,
            min_score: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignedUtterance {
    pub utterance_index: usize,
    pub token_ids: Vec<usize>,
    pub start_frame: usize,
    /// Inclusive.
    pub end_frame: usize,
    pub start_s: f64,
    pub end_s: f64,
    /// Minimum over sliding windows of the mean aligned log-posterior.
    pub score: f64,
    /// Aligned class per frame of the span.
    pub frame_path: Vec<usize>,
}

/// Non-empty trimmed lines of a transcript file, one utterance each.
pub fn parse_transcript(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}
