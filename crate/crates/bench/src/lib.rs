//! Seeded workload generators shared by the benchmarks.

use fooctts_core::align::{LogPosteriorMatrix, Vocabulary};
use fooctts_core::audio::synth;
use fooctts_core::AudioBuffer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random per-frame log-softmax posteriors with a blank at index 0.
pub fn posteriors(frames: usize, classes: usize, seed: u64) -> LogPosteriorMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(frames * classes);
    for _ in 0..frames {
        let w: Vec<f64> = (0..classes).map(|_| rng.gen_range(1e-3..1.0)).collect();
        let total: f64 = w.iter().sum();
        data.extend(w.iter().map(|x| (x / total).ln()));
    }
    let mut tokens = vec!["<blank>".to_string()];
    tokens.extend((1..classes).map(|i| format!("t{i}")));
    LogPosteriorMatrix::new(data, frames, 0.02, Vocabulary::new(tokens).unwrap()).unwrap()
}

/// `n_utts` utterances of `len` non-blank token ids drawn from `1..classes`.
pub fn transcript(n_utts: usize, len: usize, classes: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_utts).map(|_| (0..len).map(|_| rng.gen_range(1..classes)).collect()).collect()
}

/// Alternating silence, voiced speech and noise, `seconds` long in total.
pub fn broadcast(seconds: f64, rate: u32, seed: u64) -> AudioBuffer {
    let mut parts = Vec::new();
    let mut total = 0.0;
    let mut i = 0u64;
    while total < seconds {
        parts.push(match i % 3 {
            0 => AudioBuffer::silence((rate as f64 * 0.5) as usize, rate),
            1 => synth::speech_proxy(110.0 + 20.0 * (i % 5) as f64, 0.5, 2.0, rate),
            _ => synth::white_noise(0.2, 1.0, rate, seed + i),
        });
        total += parts.last().unwrap().duration_seconds();
        i += 1;
    }
    AudioBuffer::concat(&parts).unwrap()
}
