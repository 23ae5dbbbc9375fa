use super::{AudioBuffer, AudioError};

/// Linear-interpolation resampler.
///
/// Output length is `round(len * target / source)`. There is no anti-alias
/// filter, so downsampling folds content above the new Nyquist back into
/// band; good enough for speech prepared at 22.05 kHz, not for music
/// mastering.
pub fn resample(buffer: &AudioBuffer, target_rate: u32) -> Result<AudioBuffer, AudioError> {
    if target_rate == 0 {
        return Err(AudioError::InvalidParameter("target rate must be positive".into()));
    }
    let source_rate = buffer.sample_rate();
    if target_rate == source_rate {
        return Ok(buffer.clone());
    }
    let input = buffer.samples();
    let out_len = (input.len() as f64 * target_rate as f64 / source_rate as f64).round() as usize;
    if input.is_empty() || out_len == 0 {
        return Ok(AudioBuffer::new(Vec::new(), target_rate));
    }

    let step = source_rate as f64 / target_rate as f64;
    let last = input.len() - 1;
    let samples = (0..out_len)
        .map(|i| {
            let pos = i as f64 * step;
            let idx = (pos.floor() as usize).min(last);
            let frac = (pos - idx as f64).clamp(0.0, 1.0);
            let a = input[idx] as f64;
            let b = input[(idx + 1).min(last)] as f64;
            (a + (b - a) * frac) as f32
        })
        .collect();
    Ok(AudioBuffer::new(samples, target_rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sine(freq: f64, rate: u32, len: usize) -> AudioBuffer {
        AudioBuffer::new(
            (0..len)
                .map(|i| (0.5 * (2.0 * PI * freq * i as f64 / rate as f64).sin()) as f32)
                .collect(),
            rate,
        )
    }

    fn zero_crossings(samples: &[f32]) -> usize {
        samples
            .windows(2)
            .filter(|w| (w[0] >= 0.0) != (w[1] >= 0.0))
            .count()
    }

    #[test]
    fn halves_length_at_two_to_one() {
        let out = resample(&AudioBuffer::silence(44_100, 44_100), 22_050).unwrap();
        assert_eq!(out.len(), 22_050);
        assert_eq!(out.sample_rate(), 22_050);
    }

    #[test]
    fn identity_when_rates_match() {
        let b = sine(440.0, 22_050, 1000);
        assert_eq!(resample(&b, 22_050).unwrap(), b);
    }

    #[test]
    fn tone_frequency_survives_48k_to_22k() {
        // Phase offset keeps crossings off exact sample instants.
        let rate = 48_000;
        let b = AudioBuffer::new(
            (0..rate as usize * 2)
                .map(|i| (0.5 * (2.0 * PI * 100.0 * i as f64 / rate as f64 + 0.3).sin()) as f32)
                .collect(),
            rate,
        );
        let out = resample(&b, 22_050).unwrap();
        let crossings = zero_crossings(out.samples());
        let measured = crossings as f64 / 2.0 / out.duration_seconds();
        assert!((measured - 100.0).abs() <= 1.0, "measured {measured} Hz");
    }

    #[test]
    fn zero_target_rejected() {
        assert!(resample(&AudioBuffer::silence(10, 8000), 0).is_err());
    }

    #[test]
    fn empty_input_stays_empty() {
        let out = resample(&AudioBuffer::silence(0, 8000), 16_000).unwrap();
        assert!(out.is_empty());
        assert_eq!(out.sample_rate(), 16_000);
    }
}
