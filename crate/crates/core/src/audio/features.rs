use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{mean_power, ms_to_samples, AudioBuffer, AudioError};

/// Power floor added before taking the log, i.e. -120 dBFS.
pub(crate) const ENERGY_FLOOR: f64 = 1e-12;
const SPECTRAL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameFeatures {
    /// `10·log10(mean(x²) + 1e-12)`, in dBFS.
    pub energy_db: f64,
    /// Sign changes inside the frame.
    pub zcr: u32,
    /// Geometric over arithmetic mean of the Hann-windowed magnitude
    /// spectrum, bins `1..=N/2`. Always in `[0, 1]`.
    pub spectral_flatness: f64,
}

/// Per-frame features for one buffer, plus the framing that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTrack {
    pub frame_len_ms: f64,
    pub hop_ms: f64,
    pub sample_rate: u32,
    pub frame_len: usize,
    pub hop: usize,
    /// Length of the analysed buffer, in samples.
    pub source_len: usize,
    pub frames: Vec<FrameFeatures>,
}

impl FeatureTrack {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn hop_seconds(&self) -> f64 {
        self.hop as f64 / self.sample_rate as f64
    }

    pub fn frame_seconds(&self) -> f64 {
        self.frame_len as f64 / self.sample_rate as f64
    }

    pub fn duration_seconds(&self) -> f64 {
        self.source_len as f64 / self.sample_rate as f64
    }
}

/// Number of full frames that fit into `n` samples.
pub(crate) fn frame_count(n: usize, frame_len: usize, hop: usize) -> usize {
    if n < frame_len || frame_len == 0 || hop == 0 {
        0
    } else {
        (n - frame_len) / hop + 1
    }
}

/// Validates the framing and converts it to samples.
pub(crate) fn framing(
    buffer: &AudioBuffer,
    frame_len_ms: f64,
    hop_ms: f64,
) -> Result<(usize, usize), AudioError> {
    if !(hop_ms > 0.0 && frame_len_ms >= hop_ms && frame_len_ms.is_finite()) {
        return Err(AudioError::InvalidParameter(format!(
            "frame length {frame_len_ms} ms must be >= hop {hop_ms} ms > 0"
        )));
    }
    let frame_len = ms_to_samples(frame_len_ms, buffer.sample_rate()).max(1);
    let hop = ms_to_samples(hop_ms, buffer.sample_rate()).max(1);
    if buffer.len() < frame_len {
        return Err(AudioError::BufferTooShort {
            len: buffer.len(),
            needed: frame_len,
        });
    }
    Ok((frame_len, hop))
}

pub fn frame_features(
    buffer: &AudioBuffer,
    frame_len_ms: f64,
    hop_ms: f64,
) -> Result<FeatureTrack, AudioError> {
    let (frame_len, hop) = framing(buffer, frame_len_ms, hop_ms)?;
    let samples = buffer.samples();
    let n_frames = frame_count(samples.len(), frame_len, hop);

    let window = hann(frame_len);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(frame_len);
    let mut scratch = vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut spectrum = vec![Complex::new(0.0, 0.0); frame_len];

    let frames = (0..n_frames)
        .map(|i| {
            let frame = &samples[i * hop..i * hop + frame_len];
            for ((bin, &x), &w) in spectrum.iter_mut().zip(frame).zip(&window) {
                *bin = Complex::new(x as f64 * w, 0.0);
            }
            fft.process_with_scratch(&mut spectrum, &mut scratch);
            FrameFeatures {
                energy_db: 10.0 * (mean_power(frame) + ENERGY_FLOOR).log10(),
                zcr: zero_crossings(frame),
                spectral_flatness: flatness(&spectrum[1..=frame_len / 2]),
            }
        })
        .collect();

    Ok(FeatureTrack {
        frame_len_ms,
        hop_ms,
        sample_rate: buffer.sample_rate(),
        frame_len,
        hop,
        source_len: samples.len(),
        frames,
    })
}

fn hann(len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    let denom = (len - 1) as f64;
    (0..len)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / denom).cos())
        .collect()
}

fn zero_crossings(frame: &[f32]) -> u32 {
    frame
        .windows(2)
        .filter(|w| (w[0] >= 0.0) != (w[1] >= 0.0))
        .count() as u32
}

fn flatness(bins: &[Complex<f64>]) -> f64 {
    if bins.is_empty() {
        return 0.0;
    }
    let n = bins.len() as f64;
    let (log_sum, sum) = bins.iter().fold((0.0, 0.0), |(l, s), c| {
        let m = c.norm();
        (l + (m + SPECTRAL_EPS).ln(), s + m)
    });
    let geometric = (log_sum / n).exp();
    let arithmetic = sum / n + SPECTRAL_EPS;
    (geometric / arithmetic).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const RATE: u32 = 22_050;

    #[test]
    fn frame_count_law() {
        let b = AudioBuffer::silence(RATE as usize, RATE);
        let t = frame_features(&b, 25.0, 10.0).unwrap();
        // 551-sample frames, 221-sample hop.
        assert_eq!(t.frame_len, 551);
        assert_eq!(t.hop, 221);
        assert_eq!(t.len(), (22_050 - 551) / 221 + 1);
    }

    #[test]
    fn silence_hits_energy_floor() {
        let b = AudioBuffer::silence(1000, RATE);
        let t = frame_features(&b, 25.0, 10.0).unwrap();
        for f in &t.frames {
            assert!((f.energy_db + 120.0).abs() < 1e-9);
            assert_eq!(f.zcr, 0);
        }
    }

    #[test]
    fn seeded_white_noise_is_flat() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = AudioBuffer::new((0..4096).map(|_| rng.gen_range(-0.5..0.5)).collect(), RATE);
        let t = frame_features(&b, 25.0, 10.0).unwrap();
        for f in &t.frames {
            assert!(f.spectral_flatness > 0.5, "flatness {}", f.spectral_flatness);
        }
    }

    #[test]
    fn pure_tone_is_not_flat() {
        let b = AudioBuffer::new(
            (0..4096)
                .map(|i| (0.5 * (2.0 * std::f64::consts::PI * 1000.0 * i as f64 / RATE as f64).sin()) as f32)
                .collect(),
            RATE,
        );
        let t = frame_features(&b, 25.0, 10.0).unwrap();
        for f in &t.frames {
            assert!(f.spectral_flatness < 0.1, "flatness {}", f.spectral_flatness);
            // 1 kHz over 25 ms: ~50 crossings.
            assert!((48..=52).contains(&f.zcr), "zcr {}", f.zcr);
        }
    }

    #[test]
    fn short_buffer_rejected() {
        let b = AudioBuffer::silence(100, RATE);
        assert!(matches!(
            frame_features(&b, 25.0, 10.0),
            Err(AudioError::BufferTooShort { len: 100, needed: 551 })
        ));
    }

    #[test]
    fn hop_longer_than_frame_rejected() {
        let b = AudioBuffer::silence(10_000, RATE);
        assert!(matches!(
            frame_features(&b, 10.0, 25.0),
            Err(AudioError::InvalidParameter(_))
        ));
    }
}
