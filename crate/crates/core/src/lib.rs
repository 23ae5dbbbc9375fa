//! Core building blocks for turning raw commentator recordings into a TTS
//! training corpus, plus the signal processing shared with the synthesis
//! gateway.
//!
//! The modules follow the order in which a recording moves through the
//! pipeline:
//!
//! * [`audio`]: WAV I/O, resampling, frame features, F0 tracking and
//!   SNR-controlled noise mixing.
//! * [`vad`]: four-class segmentation (speech / noise / music / noEnergy) and
//!   speech-only filtering.
//! * [`align`]: CTC forced alignment of utterance transcripts against ASR
//!   log-posteriors.
//! * [`text`]: normalization, Latin→Arabic transliteration and vowelization
//!   through a remote diacritizer.
//! * [`corpus`]: utterance records, emotion labels, splits and Kaldi-style
//!   manifests.
//!
//! [`transport`] and [`mock`] carry the small amount of HTTP plumbing the
//! vowelizer client and the gateway's remote backend need.

pub mod align;
pub mod audio;
pub mod corpus;
pub mod mock;
pub mod text;
pub mod transport;
pub mod vad;

pub use align::{AlignConfig, AlignError, AlignedUtterance, LogPosteriorMatrix, StayMode, Vocabulary};
pub use audio::{AudioBuffer, AudioError, F0Track, FeatureTrack, CANONICAL_SAMPLE_RATE};
pub use corpus::{EmotionLabel, SplitSpec, UtteranceRecord};
pub use text::{Token, TokenScript, Vowelizer, VowelizerConfig, VowelizerError};
pub use vad::{Segment, SegmentLabel, VadConfig};
