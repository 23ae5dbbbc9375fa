use std::time::Duration;

use fooctts_core::audio::{decode_wav, resample};
use fooctts_core::transport::HttpTransport;
use fooctts_core::{AudioBuffer, EmotionLabel, CANONICAL_SAMPLE_RATE};

use crate::config::RemoteConfig;
use crate::SynthError;

/// Posts `{"text", "emotion"}` to the configured TTS service and returns its
/// audio at 22050 Hz.
pub fn remote_synthesize(
    text: &str,
    emotion: Option<EmotionLabel>,
    cfg: &RemoteConfig,
    transport: &dyn HttpTransport,
) -> Result<AudioBuffer, SynthError> {
    let endpoint = cfg
        .endpoint
        .as_deref()
        .ok_or_else(|| SynthError::InvalidRequest("remote backend has no endpoint configured".into()))?;
    let body = serde_json::json!({ "text": text, "emotion": emotion });
    let reply = transport
        .post(
            endpoint,
            "application/json",
            body.to_string().as_bytes(),
            Duration::from_millis(cfg.timeout_ms),
        )
        .map_err(|e| SynthError::BackendUnavailable(e.to_string()))?;
    if reply.status != 200 {
        return Err(SynthError::BackendUnavailable(format!("backend answered HTTP {}", reply.status)));
    }
    let audio = decode_wav(&reply.body).map_err(|e| SynthError::BadBackendAudio(e.to_string()))?;
    if audio.is_empty() {
        return Err(SynthError::BadBackendAudio("backend returned no samples".into()));
    }
    if audio.sample_rate() == CANONICAL_SAMPLE_RATE {
        return Ok(audio);
    }
    resample(&audio, CANONICAL_SAMPLE_RATE).map_err(|e| SynthError::BadBackendAudio(e.to_string()))
}
