//! Mono PCM buffers and the signal processing built on them.

mod features;
mod mix;
mod pitch;
mod resample;
pub mod synth;
mod wav;

use std::path::PathBuf;

pub use features::{frame_features, FeatureTrack, FrameFeatures};
pub use mix::{mix_noise, mix_noise_with_report, MixReport, NO_NOISE_SNR_DB};
pub use pitch::{estimate_f0, estimate_f0_with, F0Config, F0Track};
pub use resample::resample;
pub use wav::{decode_wav, encode_wav, read_wav, wav_duration_seconds, write_wav};

/// Sample rate every corpus clip and every gateway response is delivered at.
pub const CANONICAL_SAMPLE_RATE: u32 = 22_050;

/// Default analysis framing.
pub const DEFAULT_FRAME_LEN_MS: f64 = 25.0;
pub const DEFAULT_HOP_MS: f64 = 10.0;

#[derive(Debug, thiserror::Error)]
pub enum AudioError {
    #[error("unsupported WAV format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt WAV header: {0}")]
    CorruptHeader(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("buffer has {len} samples, at least {needed} required")]
    BufferTooShort { len: usize, needed: usize },
    #[error("sample rate mismatch: speech {speech} Hz, noise {noise} Hz")]
    SampleRateMismatch { speech: u32, noise: u32 },
    #[error("noise source is silent, cannot reach a finite SNR")]
    SilentNoiseSource,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Mono audio at a fixed sample rate.
///
/// Samples are nominally in `[-1, 1]`; operations that clamp say so.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    samples: Vec<f32>,
    sample_rate: u32,
}

impl AudioBuffer {
    /// Panics if `sample_rate` is zero.
    pub fn new(samples: Vec<f32>, sample_rate: u32) -> Self {
        assert!(sample_rate > 0, "sample rate must be positive");
        Self {
            samples,
            sample_rate,
        }
    }

    pub fn silence(len: usize, sample_rate: u32) -> Self {
        Self::new(vec![0.0; len], sample_rate)
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f32> {
        self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_seconds(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// Mean of `x²` over the buffer; zero for an empty buffer.
    pub fn power(&self) -> f64 {
        mean_power(&self.samples)
    }

    pub fn rms(&self) -> f64 {
        self.power().sqrt()
    }

    /// Largest absolute sample value.
    pub fn peak(&self) -> f32 {
        self.samples.iter().fold(0.0f32, |m, s| m.max(s.abs()))
    }

    /// Copy with every sample clamped into `[-1, 1]`; NaN becomes 0.
    pub fn clamped(&self) -> Self {
        Self::new(
            self.samples.iter().map(|&s| clamp_sample(s)).collect(),
            self.sample_rate,
        )
    }

    pub fn concat(parts: &[AudioBuffer]) -> Option<Self> {
        let rate = parts.first()?.sample_rate;
        if parts.iter().any(|p| p.sample_rate != rate) {
            return None;
        }
        let samples = parts.iter().flat_map(|p| p.samples.iter().copied()).collect();
        Some(Self::new(samples, rate))
    }
}

pub(crate) fn clamp_sample(s: f32) -> f32 {
    if s.is_nan() {
        0.0
    } else {
        s.clamp(-1.0, 1.0)
    }
}

pub(crate) fn mean_power(samples: &[f32]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|&s| (s as f64) * (s as f64)).sum::<f64>() / samples.len() as f64
}

/// Converts a duration in milliseconds to a whole number of samples.
pub(crate) fn ms_to_samples(ms: f64, sample_rate: u32) -> usize {
    (ms * sample_rate as f64 / 1000.0).round() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duration_and_power() {
        let b = AudioBuffer::new(vec![0.5; 22_050], 22_050);
        assert_eq!(b.duration_seconds(), 1.0);
        assert!((b.power() - 0.25).abs() < 1e-12);
        assert!((b.rms() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn clamped_handles_nan_and_overshoot() {
        let b = AudioBuffer::new(vec![1.5, -2.0, f32::NAN, 0.25], 8000);
        assert_eq!(b.clamped().samples(), &[1.0, -1.0, 0.0, 0.25]);
    }

    #[test]
    fn concat_requires_matching_rates() {
        let a = AudioBuffer::new(vec![0.1], 8000);
        let b = AudioBuffer::new(vec![0.2], 16000);
        assert!(AudioBuffer::concat(&[a.clone(), b]).is_none());
        assert_eq!(AudioBuffer::concat(&[a.clone(), a]).unwrap().len(), 2);
        assert!(AudioBuffer::concat(&[]).is_none());
    }
}
