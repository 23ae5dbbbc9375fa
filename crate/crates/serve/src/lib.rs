//! Synthesis gateway: takes commentary text, vowelizes it through the
//! diacritizer, renders it with a pluggable TTS backend, lays crowd noise
//! underneath, and answers with a 22050 Hz WAV.
//!
//! [`Gateway`] holds the pipeline and is usable without HTTP; [`http`] wraps
//! it in an axum service.

mod config;
mod gateway;
pub mod http;
mod remote;
mod stub;

pub use config::{BackendConfig, BackendKind, ConfigError, EmotionF0, NoiseConfig, RemoteConfig, ServeConfig, StubConfig};
pub use gateway::{Gateway, Metrics, MetricsSnapshot, SynthError, SynthesisOutput, SynthesisRequest};
pub use remote::remote_synthesize;
pub use stub::{char_frequency, samples_per_char, stub_synthesize, timed_chars};
