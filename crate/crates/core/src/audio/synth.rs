//! Deterministic test signals: tones, seeded noise and a crude voiced-speech
//! stand-in. Used by fixtures, benches and the CLI's self-checks.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AudioBuffer;

fn samples_for(seconds: f64, rate: u32) -> usize {
    (seconds * rate as f64).round() as usize
}

pub fn sine(freq_hz: f64, amplitude: f64, seconds: f64, rate: u32) -> AudioBuffer {
    AudioBuffer::new(
        (0..samples_for(seconds, rate))
            .map(|i| (amplitude * (2.0 * PI * freq_hz * i as f64 / rate as f64).sin()) as f32)
            .collect(),
        rate,
    )
}

/// Uniform white noise in `[-amplitude, amplitude)`.
pub fn white_noise(amplitude: f64, seconds: f64, rate: u32, seed: u64) -> AudioBuffer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    AudioBuffer::new(
        (0..samples_for(seconds, rate))
            .map(|_| rng.gen_range(-amplitude..amplitude) as f32)
            .collect(),
        rate,
    )
}

/// Harmonic series on `f0_hz` (1/k amplitudes, 12 partials) under a 4 Hz
/// syllable-rate envelope with 80 % modulation depth. Peak is about
/// `amplitude`.
pub fn speech_proxy(f0_hz: f64, amplitude: f64, seconds: f64, rate: u32) -> AudioBuffer {
    let partials: Vec<(f64, f64)> = (1..=12)
        .map(|k| (f0_hz * k as f64, 1.0 / k as f64))
        .filter(|&(f, _)| f < rate as f64 / 2.0)
        .collect();
    let norm: f64 = partials.iter().map(|p| p.1).sum();
    AudioBuffer::new(
        (0..samples_for(seconds, rate))
            .map(|i| {
                let t = i as f64 / rate as f64;
                let envelope = 1.0 - 0.8 * (0.5 + 0.5 * (2.0 * PI * 4.0 * t).cos());
                let voiced: f64 = partials.iter().map(|&(f, a)| a * (2.0 * PI * f * t).sin()).sum();
                (amplitude * envelope * voiced / norm * 1.6) as f32
            })
            .collect(),
        rate,
    )
}

/// A steady chord (three sustained partials): the music class's prototype.
pub fn steady_chord(amplitude: f64, seconds: f64, rate: u32) -> AudioBuffer {
    let notes = [220.0, 277.18, 329.63];
    AudioBuffer::new(
        (0..samples_for(seconds, rate))
            .map(|i| {
                let t = i as f64 / rate as f64;
                let v: f64 = notes.iter().map(|f| (2.0 * PI * f * t).sin()).sum();
                (amplitude * v / notes.len() as f64) as f32
            })
            .collect(),
        rate,
    )
}

/// Stadium-like murmur: low-passed seeded noise whose loudness drifts slowly,
/// scaled to an RMS of 0.1. Stands in for a recorded crowd bed.
pub fn crowd_bed(seconds: f64, rate: u32, seed: u64) -> AudioBuffer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = samples_for(seconds, rate);
    // Two cascaded one-pole low-passes around 1 kHz.
    let alpha = 1.0 - (-2.0 * PI * 1000.0 / rate as f64).exp();
    let swells: Vec<(f64, f64)> = (0..3)
        .map(|_| (rng.gen_range(0.2..1.2), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    let (mut a, mut b) = (0.0f64, 0.0f64);
    let mut raw: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / rate as f64;
            a += alpha * (rng.gen_range(-1.0..1.0) - a);
            b += alpha * (a - b);
            let swell: f64 = swells.iter().map(|&(f, ph)| (2.0 * PI * f * t + ph).sin()).sum::<f64>() / 3.0;
            b * (1.0 + 0.5 * swell)
        })
        .collect();
    let rms = (raw.iter().map(|x| x * x).sum::<f64>() / n.max(1) as f64).sqrt();
    if rms > 0.0 {
        raw.iter_mut().for_each(|x| *x *= 0.1 / rms);
    }
    AudioBuffer::new(raw.into_iter().map(|x| x as f32).collect(), rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crowd_bed_is_seeded_and_scaled() {
        let a = crowd_bed(2.0, 22_050, 9);
        assert_eq!(a, crowd_bed(2.0, 22_050, 9));
        assert_ne!(a, crowd_bed(2.0, 22_050, 10));
        assert!((a.rms() - 0.1).abs() < 1e-3);
        assert!(a.peak() < 1.0);
    }
}
