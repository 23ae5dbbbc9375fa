//! Deterministic stand-in for a neural TTS model: one tone per character.

use std::f64::consts::PI;
use std::hash::Hasher;

use fnv::FnvHasher;
use fooctts_core::text::is_diacritic;
use fooctts_core::{AudioBuffer, EmotionLabel, CANONICAL_SAMPLE_RATE};

use crate::config::StubConfig;

fn char_hash(c: char) -> u64 {
    let mut h = FnvHasher::default();
    let mut buf = [0u8; 4];
    h.write(c.encode_utf8(&mut buf).as_bytes());
    h.finish()
}

/// Pitch of character `c`: `base · (1 + (hash(c) mod 12) / 24)`, so within
/// half an octave above the emotion's base.
pub fn char_frequency(c: char, base_f0: f64) -> f64 {
    base_f0 * (1.0 + (char_hash(c) % 12) as f64 / 24.0)
}

/// Characters that take up a slot: everything except diacritics, which
/// modify the preceding letter rather than adding time.
pub fn timed_chars(text: &str) -> impl Iterator<Item = char> + '_ {
    text.chars().filter(|&c| !is_diacritic(c))
}

pub fn samples_per_char(cfg: &StubConfig) -> usize {
    (cfg.char_duration_ms * CANONICAL_SAMPLE_RATE as f64 / 1000.0).round() as usize
}

/// One `char_duration_ms` slot per timed character at 22050 Hz: whitespace
/// is silence, anything else a sine at [`char_frequency`] with raised-cosine
/// fades at both ends. Same input, same samples.
pub fn stub_synthesize(text: &str, emotion: Option<EmotionLabel>, cfg: &StubConfig) -> AudioBuffer {
    let rate = CANONICAL_SAMPLE_RATE as f64;
    let slot = samples_per_char(cfg);
    let fade = ((cfg.fade_ms * rate / 1000.0).round() as usize).min(slot / 2);
    let base = cfg.base_f0_hz.for_emotion(emotion);
    let mut out = Vec::with_capacity(slot * text.chars().count());
    for c in timed_chars(text) {
        if c.is_whitespace() {
            out.extend(std::iter::repeat_n(0.0f32, slot));
            continue;
        }
        let f = char_frequency(c, base);
        out.extend((0..slot).map(|i| {
            let edge = i.min(slot - 1 - i);
            let gain = if edge < fade {
                0.5 * (1.0 - (PI * edge as f64 / fade as f64).cos())
            } else {
                1.0
            };
            (cfg.amplitude * gain * (2.0 * PI * f * i as f64 / rate).sin()) as f32
        }));
    }
    AudioBuffer::new(out, CANONICAL_SAMPLE_RATE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let cfg = StubConfig::default();
        let a = stub_synthesize("هدف رائع", Some(EmotionLabel::Excited), &cfg);
        assert_eq!(a, stub_synthesize("هدف رائع", Some(EmotionLabel::Excited), &cfg));
    }

    #[test]
    fn duration_follows_char_count() {
        let cfg = StubConfig::default();
        let slot = samples_per_char(&cfg);
        assert_eq!(slot, 1985);
        assert_eq!(stub_synthesize("هدف", None, &cfg).len(), 3 * slot);
        assert_eq!(stub_synthesize("a b", None, &cfg).len(), stub_synthesize("ab", None, &cfg).len() + slot);
        // Marks ride on their letter.
        assert_eq!(stub_synthesize("هَدَفَ", None, &cfg).len(), 3 * slot);
    }

    #[test]
    fn spaces_are_silent_and_fades_start_at_zero() {
        let cfg = StubConfig::default();
        let slot = samples_per_char(&cfg);
        let a = stub_synthesize("a b", None, &cfg);
        assert!(a.samples()[slot..2 * slot].iter().all(|&s| s == 0.0));
        assert_eq!(a.samples()[0], 0.0);
        assert!(a.peak() <= cfg.amplitude as f32 + 1e-6);
    }

    #[test]
    fn frequencies_stay_in_half_octave() {
        for c in "abcdefghijklmnopqrstuvwxyzهدفرائع".chars() {
            let f = char_frequency(c, 200.0);
            assert!((200.0..=200.0 * 1.5).contains(&f));
        }
    }
}
