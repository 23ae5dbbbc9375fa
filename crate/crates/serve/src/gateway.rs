use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use fooctts_core::audio::{encode_wav, mix_noise_with_report, read_wav, resample, synth, NO_NOISE_SNR_DB};
use fooctts_core::text::{normalize, VowelizedSource, VowelizerMode};
use fooctts_core::transport::{HttpTransport, UreqTransport};
use fooctts_core::{AudioBuffer, EmotionLabel, Vowelizer, CANONICAL_SAMPLE_RATE};
use serde::{Deserialize, Serialize};

use crate::config::{BackendKind, ConfigError, ServeConfig};
use crate::remote::remote_synthesize;
use crate::stub::stub_synthesize;

/// Length of the generated crowd bed when no recording is configured.
const GENERATED_BED_S: f64 = 10.0;

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("TTS backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("TTS backend returned unusable audio: {0}")]
    BadBackendAudio(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl SynthError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::InvalidRequest(_) => "invalid_request",
            Self::BackendUnavailable(_) => "backend_unavailable",
            Self::BadBackendAudio(_) => "bad_backend_audio",
            Self::Internal(_) => "internal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthesisRequest {
    pub text: String,
    #[serde(default)]
    pub emotion: Option<EmotionLabel>,
    /// Overrides the configured default SNR.
    #[serde(default)]
    pub snr_db: Option<f64>,
    /// Return the backend audio without crowd noise.
    #[serde(default)]
    pub no_noise: bool,
    #[serde(default)]
    pub backend: Option<BackendKind>,
}

impl SynthesisRequest {
    pub fn new(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            emotion: None,
            snr_db: None,
            no_noise: false,
            backend: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisOutput {
    /// PCM16 mono WAV at 22050 Hz.
    pub wav: Vec<u8>,
    pub duration_s: f64,
    /// Text handed to the backend.
    pub vowelized_text: String,
    /// False when the diacritizer was skipped or failed.
    pub vowelized: bool,
    /// `remote`, `cache`, `offline`, or the failure kind (`timeout`,
    /// `http_503`, `unreachable`, `mismatch`).
    pub vowelizer_status: String,
    pub backend: BackendKind,
    /// `None` when no noise was mixed.
    pub snr_db: Option<f64>,
}

#[derive(Debug, Default)]
pub struct Metrics {
    requests: AtomicU64,
    succeeded: AtomicU64,
    rejected: AtomicU64,
    backend_failures: AtomicU64,
    vowelizer_fallbacks: AtomicU64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MetricsSnapshot {
    pub requests: u64,
    pub succeeded: u64,
    pub rejected: u64,
    pub backend_failures: u64,
    pub vowelizer_fallbacks: u64,
}

impl Metrics {
    pub fn snapshot(&self) -> MetricsSnapshot {
        let get = |c: &AtomicU64| c.load(Ordering::Relaxed);
        MetricsSnapshot {
            requests: get(&self.requests),
            succeeded: get(&self.succeeded),
            rejected: get(&self.rejected),
            backend_failures: get(&self.backend_failures),
            vowelizer_fallbacks: get(&self.vowelizer_fallbacks),
        }
    }

    pub(crate) fn count_rejected(&self) {
        self.requests.fetch_add(1, Ordering::Relaxed);
        self.rejected.fetch_add(1, Ordering::Relaxed);
    }
}

/// Everything a request needs. Only the vowelizer cache and the metrics
/// counters are shared between requests.
pub struct Gateway {
    cfg: ServeConfig,
    vowelizer: Vowelizer,
    transport: Arc<dyn HttpTransport>,
    noise: AudioBuffer,
    metrics: Metrics,
}

impl std::fmt::Debug for Gateway {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Gateway").field("cfg", &self.cfg).finish_non_exhaustive()
    }
}

impl Gateway {
    pub fn new(cfg: ServeConfig) -> Result<Self, ConfigError> {
        Self::with_transport(cfg, Arc::new(UreqTransport::default()))
    }

    /// `transport` carries both the diacritizer and remote backend calls.
    pub fn with_transport(cfg: ServeConfig, transport: Arc<dyn HttpTransport>) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let noise = load_noise(&cfg)?;
        Ok(Self {
            vowelizer: Vowelizer::with_transport(cfg.vowelizer.clone(), Arc::clone(&transport)),
            cfg,
            transport,
            noise,
            metrics: Metrics::default(),
        })
    }

    pub fn config(&self) -> &ServeConfig {
        &self.cfg
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    /// normalize → vowelize (falls back to the plain text) → backend →
    /// crowd noise → WAV.
    pub fn synthesize(&self, req: &SynthesisRequest) -> Result<SynthesisOutput, SynthError> {
        self.metrics.requests.fetch_add(1, Ordering::Relaxed);
        let result = self.run(req);
        let counter = match &result {
            Ok(_) => &self.metrics.succeeded,
            Err(SynthError::InvalidRequest(_)) => &self.metrics.rejected,
            Err(_) => &self.metrics.backend_failures,
        };
        counter.fetch_add(1, Ordering::Relaxed);
        result
    }

    fn run(&self, req: &SynthesisRequest) -> Result<SynthesisOutput, SynthError> {
        let text = normalize(&req.text);
        if text.is_empty() {
            return Err(SynthError::InvalidRequest("text is empty".into()));
        }
        let chars = text.chars().count();
        if chars > self.cfg.max_text_chars {
            return Err(SynthError::InvalidRequest(format!(
                "text has {chars} characters, limit is {}",
                self.cfg.max_text_chars
            )));
        }
        let snr_db = match (req.no_noise || !self.cfg.noise.enabled, req.snr_db) {
            (true, _) => None,
            (false, Some(s)) if !s.is_finite() => {
                return Err(SynthError::InvalidRequest("snr_db must be a finite number".into()))
            }
            (false, s) => Some(s.unwrap_or(self.cfg.noise.default_snr_db)),
        };

        let (vowelized_text, vowelized, vowelizer_status) = if self.cfg.vowelizer.mode == VowelizerMode::OfflinePassthrough {
            (text.clone(), false, "offline".to_string())
        } else {
            match self.vowelizer.vowelize(&text) {
                Ok(v) => {
                    let status = match v.source {
                        VowelizedSource::Cache => "cache",
                        VowelizedSource::Remote => "remote",
                        VowelizedSource::Passthrough => "offline",
                    };
                    (v.text, v.source != VowelizedSource::Passthrough, status.to_string())
                }
                Err(e) => {
                    tracing::warn!(error = %e, "vowelizer failed, synthesizing undiacritized text");
                    self.metrics.vowelizer_fallbacks.fetch_add(1, Ordering::Relaxed);
                    (text.clone(), false, e.kind())
                }
            }
        };

        let backend = req.backend.unwrap_or(self.cfg.backend.kind);
        let speech = match backend {
            BackendKind::Stub => stub_synthesize(&vowelized_text, req.emotion, &self.cfg.backend.stub),
            BackendKind::Remote => {
                remote_synthesize(&vowelized_text, req.emotion, &self.cfg.backend.remote, self.transport.as_ref())?
            }
        };
        let audio = match snr_db {
            None => speech,
            Some(snr) => {
                let (mixed, report) = mix_noise_with_report(&speech, &self.noise, snr)
                    .map_err(|e| SynthError::Internal(format!("noise mixing: {e}")))?;
                tracing::debug!(snr, gain = report.output_gain, "mixed crowd noise");
                mixed
            }
        };
        Ok(SynthesisOutput {
            duration_s: audio.duration_seconds(),
            wav: encode_wav(&audio),
            vowelized_text,
            vowelized,
            vowelizer_status,
            backend,
            snr_db: snr_db.filter(|s| *s != NO_NOISE_SNR_DB),
        })
    }
}

fn load_noise(cfg: &ServeConfig) -> Result<AudioBuffer, ConfigError> {
    let Some(path) = &cfg.noise.path else {
        return Ok(synth::crowd_bed(GENERATED_BED_S, CANONICAL_SAMPLE_RATE, cfg.noise.seed));
    };
    let err = |source| ConfigError::Noise {
        path: path.clone(),
        source,
    };
    let bed = read_wav(path).map_err(err)?;
    let bed = if bed.sample_rate() == CANONICAL_SAMPLE_RATE {
        bed
    } else {
        resample(&bed, CANONICAL_SAMPLE_RATE).map_err(err)?
    };
    if bed.power() <= 0.0 {
        return Err(err(fooctts_core::AudioError::SilentNoiseSource));
    }
    Ok(bed)
}
