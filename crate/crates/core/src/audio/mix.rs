use super::{mean_power, AudioBuffer, AudioError};

/// Sentinel SNR meaning "do not add noise".
pub const NO_NOISE_SNR_DB: f64 = f64::INFINITY;

const PEAK_TARGET: f32 = 0.99;

/// What the mixer actually did, for metadata and verification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixReport {
    /// Gain applied to the looped noise before summation.
    pub noise_scale: f64,
    /// `10·log10(P_speech / P_scaled_noise)` measured on the components,
    /// before any peak normalization. Infinite when no noise was added.
    pub achieved_snr_db: f64,
    /// Gain applied to the sum to bring its peak to 0.99 (1.0 if untouched).
    pub output_gain: f64,
}

/// Mixes `noise` under `speech` at `snr_db`. See [`mix_noise_with_report`].
pub fn mix_noise(speech: &AudioBuffer, noise: &AudioBuffer, snr_db: f64) -> Result<AudioBuffer, AudioError> {
    mix_noise_with_report(speech, noise, snr_db).map(|(out, _)| out)
}

/// Loops or truncates `noise` to the speech length, scales it to hit
/// `snr_db`, and sums. The sum is peak-normalized to 0.99 only if it would
/// clip. `snr_db = +inf` returns the speech untouched; so does silent speech,
/// for which no finite noise gain can meet the target.
pub fn mix_noise_with_report(
    speech: &AudioBuffer,
    noise: &AudioBuffer,
    snr_db: f64,
) -> Result<(AudioBuffer, MixReport), AudioError> {
    let untouched = MixReport {
        noise_scale: 0.0,
        achieved_snr_db: f64::INFINITY,
        output_gain: 1.0,
    };
    if snr_db == NO_NOISE_SNR_DB {
        return Ok((speech.clone(), untouched));
    }
    if !snr_db.is_finite() {
        return Err(AudioError::InvalidParameter(format!("snr_db must be finite or +inf, got {snr_db}")));
    }
    if speech.sample_rate() != noise.sample_rate() {
        return Err(AudioError::SampleRateMismatch {
            speech: speech.sample_rate(),
            noise: noise.sample_rate(),
        });
    }
    if noise.is_empty() {
        return Err(AudioError::SilentNoiseSource);
    }

    let bed: Vec<f32> = noise.samples().iter().copied().cycle().take(speech.len()).collect();
    let noise_power = mean_power(&bed);
    let speech_power = speech.power();
    if speech.is_empty() {
        return Ok((speech.clone(), untouched));
    }
    if noise_power <= 0.0 {
        return Err(AudioError::SilentNoiseSource);
    }
    if speech_power <= 0.0 {
        return Ok((speech.clone(), untouched));
    }

    let scale = (speech_power / (noise_power * 10f64.powf(snr_db / 10.0))).sqrt();
    let scaled_power = noise_power * scale * scale;

    let mut mixed: Vec<f32> = speech
        .samples()
        .iter()
        .zip(&bed)
        .map(|(&s, &n)| (s as f64 + n as f64 * scale) as f32)
        .collect();
    let peak = mixed.iter().fold(0.0f32, |m, s| m.max(s.abs()));
    let mut output_gain = 1.0;
    if peak > 1.0 {
        let g = PEAK_TARGET / peak;
        mixed.iter_mut().for_each(|s| *s *= g);
        output_gain = g as f64;
    }

    Ok((
        AudioBuffer::new(mixed, speech.sample_rate()),
        MixReport {
            noise_scale: scale,
            achieved_snr_db: 10.0 * (speech_power / scaled_power).log10(),
            output_gain,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise(seed: u64, len: usize, amp: f32) -> AudioBuffer {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        AudioBuffer::new((0..len).map(|_| rng.gen_range(-amp..amp)).collect(), 16_000)
    }

    fn with_rms(b: AudioBuffer, target: f64) -> AudioBuffer {
        let g = (target / b.rms()) as f32;
        AudioBuffer::new(b.samples().iter().map(|s| s * g).collect(), b.sample_rate())
    }

    /// SNR measured independently from the two components.
    fn measured_snr(speech: &AudioBuffer, noise: &AudioBuffer, scale: f64) -> f64 {
        let bed: Vec<f64> = noise
            .samples()
            .iter()
            .cycle()
            .take(speech.len())
            .map(|&n| n as f64 * scale)
            .collect();
        let pn = bed.iter().map(|v| v * v).sum::<f64>() / bed.len() as f64;
        10.0 * (speech.power() / pn).log10()
    }

    #[test]
    fn infinite_snr_is_identity() {
        let s = noise(1, 1000, 0.3);
        let n = noise(2, 1000, 0.3);
        assert_eq!(mix_noise(&s, &n, NO_NOISE_SNR_DB).unwrap(), s);
    }

    #[test]
    fn equal_rms_at_zero_db_gives_unit_scale() {
        let s = with_rms(noise(3, 4000, 0.5), 0.1);
        let n = with_rms(noise(4, 4000, 0.5), 0.1);
        let (_, report) = mix_noise_with_report(&s, &n, 0.0).unwrap();
        assert!((report.noise_scale - 1.0).abs() < 1e-6, "{}", report.noise_scale);
    }

    #[test]
    fn ten_db_on_unit_rms() {
        // Unit RMS forces the sum past 1.0, so normalization also kicks in;
        // the component SNR is measured before it.
        let s = with_rms(noise(5, 8000, 1.0), 1.0);
        let n = with_rms(noise(6, 8000, 1.0), 1.0);
        let (out, report) = mix_noise_with_report(&s, &n, 10.0).unwrap();
        assert!((report.noise_scale - 10f64.powf(-0.5)).abs() < 1e-4, "{}", report.noise_scale);
        assert!((measured_snr(&s, &n, report.noise_scale) - 10.0).abs() < 0.1);
        assert!(out.peak() <= 0.99 + 1e-6);
        assert!(report.output_gain < 1.0);
    }

    #[test]
    fn short_noise_is_looped() {
        let s = with_rms(noise(7, 5000, 0.2), 0.05);
        let n = noise(8, 333, 0.4);
        let (out, report) = mix_noise_with_report(&s, &n, 5.0).unwrap();
        assert_eq!(out.len(), s.len());
        assert!((measured_snr(&s, &n, report.noise_scale) - 5.0).abs() < 0.1);
        assert_eq!(report.output_gain, 1.0);
    }

    #[test]
    fn rate_mismatch_and_silent_noise() {
        let s = noise(9, 100, 0.2);
        let other_rate = AudioBuffer::new(vec![0.1; 100], 8000);
        assert!(matches!(mix_noise(&s, &other_rate, 10.0), Err(AudioError::SampleRateMismatch { .. })));
        let silent = AudioBuffer::silence(100, 16_000);
        assert!(matches!(mix_noise(&s, &silent, 10.0), Err(AudioError::SilentNoiseSource)));
        assert!(matches!(
            mix_noise(&s, &AudioBuffer::silence(0, 16_000), 10.0),
            Err(AudioError::SilentNoiseSource)
        ));
    }

    #[test]
    fn nan_snr_rejected() {
        let s = noise(10, 100, 0.2);
        assert!(mix_noise(&s, &s, f64::NAN).is_err());
        assert!(mix_noise(&s, &s, f64::NEG_INFINITY).is_err());
    }
}
