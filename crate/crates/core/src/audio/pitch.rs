use serde::{Deserialize, Serialize};

use super::features::{frame_count, framing};
use super::{AudioBuffer, AudioError, DEFAULT_FRAME_LEN_MS, DEFAULT_HOP_MS};

/// Candidate peaks within this fraction of the best correlation are
/// preferred at the shortest lag, which suppresses octave-down errors.
const OCTAVE_PICK_RATIO: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct F0Config {
    pub frame_len_ms: f64,
    pub hop_ms: f64,
    pub f0_min: f64,
    pub f0_max: f64,
    pub voicing_threshold: f64,
}

impl Default for F0Config {
    fn default() -> Self {
        Self {
            frame_len_ms: DEFAULT_FRAME_LEN_MS,
            hop_ms: DEFAULT_HOP_MS,
            f0_min: 60.0,
            f0_max: 400.0,
            voicing_threshold: 0.5,
        }
    }
}

/// Per-frame F0 estimates on the same framing as a `FeatureTrack`.
#[derive(Debug, Clone, PartialEq)]
pub struct F0Track {
    pub hop_ms: f64,
    pub frame_len_ms: f64,
    pub f0_min: f64,
    pub f0_max: f64,
    /// 0 marks an unvoiced frame.
    pub f0_hz: Vec<f64>,
    pub voicing_confidence: Vec<f64>,
}

impl F0Track {
    pub fn voiced(&self) -> impl Iterator<Item = f64> + '_ {
        self.f0_hz.iter().copied().filter(|&f| f > 0.0)
    }

    pub fn voiced_count(&self) -> usize {
        self.voiced().count()
    }

    /// Mean F0 over voiced frames, `None` if nothing is voiced.
    pub fn mean_voiced_f0(&self) -> Option<f64> {
        let (sum, n) = self.voiced().fold((0.0, 0usize), |(s, n), f| (s + f, n + 1));
        (n > 0).then(|| sum / n as f64)
    }
}

/// Normalized-autocorrelation F0 tracker with the default voicing threshold.
pub fn estimate_f0(
    buffer: &AudioBuffer,
    frame_len_ms: f64,
    hop_ms: f64,
    f0_min: f64,
    f0_max: f64,
) -> Result<F0Track, AudioError> {
    estimate_f0_with(
        buffer,
        &F0Config {
            frame_len_ms,
            hop_ms,
            f0_min,
            f0_max,
            ..F0Config::default()
        },
    )
}

pub fn estimate_f0_with(buffer: &AudioBuffer, cfg: &F0Config) -> Result<F0Track, AudioError> {
    let rate = buffer.sample_rate() as f64;
    if !(cfg.f0_min > 0.0 && cfg.f0_min < cfg.f0_max && cfg.f0_max <= rate / 4.0) {
        return Err(AudioError::InvalidParameter(format!(
            "need 0 < f0_min ({}) < f0_max ({}) <= rate/4 ({})",
            cfg.f0_min,
            cfg.f0_max,
            rate / 4.0
        )));
    }
    let (frame_len, hop) = framing(buffer, cfg.frame_len_ms, cfg.hop_ms)?;
    let min_lag = ((rate / cfg.f0_max).ceil() as usize).max(1);
    // Keep at least a couple of samples of overlap at the longest lag.
    let max_lag = ((rate / cfg.f0_min).floor() as usize).min(frame_len.saturating_sub(2));
    if max_lag <= min_lag + 1 {
        return Err(AudioError::InvalidParameter(format!(
            "frame of {frame_len} samples too short for f0_min {} Hz",
            cfg.f0_min
        )));
    }

    let samples = buffer.samples();
    let n_frames = frame_count(samples.len(), frame_len, hop);
    let mut f0_hz = Vec::with_capacity(n_frames);
    let mut confidence = Vec::with_capacity(n_frames);
    let mut corr = vec![0.0; max_lag + 2];

    for i in 0..n_frames {
        let frame = &samples[i * hop..i * hop + frame_len];
        match frame_pitch(frame, min_lag, max_lag, &mut corr) {
            Some((lag, peak)) if peak >= cfg.voicing_threshold => {
                f0_hz.push((rate / lag).clamp(cfg.f0_min, cfg.f0_max));
                confidence.push(peak.clamp(0.0, 1.0));
            }
            Some((_, peak)) => {
                f0_hz.push(0.0);
                confidence.push(peak.clamp(0.0, 1.0));
            }
            None => {
                f0_hz.push(0.0);
                confidence.push(0.0);
            }
        }
    }

    Ok(F0Track {
        hop_ms: cfg.hop_ms,
        frame_len_ms: cfg.frame_len_ms,
        f0_min: cfg.f0_min,
        f0_max: cfg.f0_max,
        f0_hz,
        voicing_confidence: confidence,
    })
}

/// Returns the (fractional) period in samples and its correlation, or `None`
/// for a frame without energy.
fn frame_pitch(frame: &[f32], min_lag: usize, max_lag: usize, corr: &mut [f64]) -> Option<(f64, f64)> {
    let n = frame.len();
    let x: Vec<f64> = frame.iter().map(|&s| s as f64).collect();
    // prefix[k] = sum of squares of x[..k]
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in &x {
        prefix.push(prefix.last().unwrap() + v * v);
    }
    if prefix[n] < 1e-10 {
        return None;
    }

    let lo = min_lag - 1;
    let hi = max_lag + 1;
    for lag in lo..=hi.min(n - 1) {
        let head = prefix[n - lag];
        let tail = prefix[n] - prefix[lag];
        let denom = (head * tail).sqrt();
        corr[lag] = if denom > 1e-12 {
            x[..n - lag].iter().zip(&x[lag..]).map(|(a, b)| a * b).sum::<f64>() / denom
        } else {
            0.0
        };
    }

    let (best_lag, best) = (min_lag..=max_lag)
        .map(|l| (l, corr[l]))
        .fold((min_lag, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc });

    let chosen = (min_lag..=max_lag)
        .find(|&l| {
            corr[l] >= OCTAVE_PICK_RATIO * best && corr[l] >= corr[l - 1] && corr[l] >= corr[l + 1]
        })
        .unwrap_or(best_lag);

    let (a, b, c) = (corr[chosen - 1], corr[chosen], corr[chosen + 1]);
    let curvature = a - 2.0 * b + c;
    let shift = if curvature < 0.0 {
        (0.5 * (a - c) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    Some((chosen as f64 + shift, b))
}
