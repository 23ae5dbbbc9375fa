use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CorpusError, EmotionLabel, UtteranceRecord};
use crate::audio::F0Track;

/// Mean-F0 cut points. Config defaults, not properties of any annotator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmotionThresholds {
    pub excited_hz: f64,
    pub very_excited_hz: f64,
}

impl Default for EmotionThresholds {
    fn default() -> Self {
        Self {
            excited_hz: 170.0,
            very_excited_hz: 250.0,
        }
    }
}

/// `mean < t1` → neutral, `t1 <= mean < t2` → excited, `mean >= t2` → very
/// excited, over voiced frames only.
pub fn suggest_emotion(f0: &F0Track, thresholds: &EmotionThresholds) -> Result<EmotionLabel, CorpusError> {
    let (t1, t2) = (thresholds.excited_hz, thresholds.very_excited_hz);
    if !(t1 > 0.0 && t1 < t2) {
        return Err(CorpusError::InvalidThresholds(t1, t2));
    }
    let mean = f0.mean_voiced_f0().ok_or(CorpusError::NoVoicedFrames)?;
    Ok(if mean < t1 {
        EmotionLabel::Neutral
    } else if mean < t2 {
        EmotionLabel::Excited
    } else {
        EmotionLabel::VeryExcited
    })
}

/// Parses `utt_id<TAB>label` lines. Blank lines and `#` comments are
/// skipped.
pub fn parse_labels(text: &str) -> Result<BTreeMap<String, EmotionLabel>, CorpusError> {
    let mut labels = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (utt, label) = trimmed.split_once('\t').ok_or_else(|| CorpusError::MalformedLine {
            file: "labels".into(),
            line: i + 1,
            reason: "expected utt_id<TAB>label".into(),
        })?;
        let label: EmotionLabel = label.parse().map_err(|_| CorpusError::UnknownLabel {
            line: i + 1,
            label: label.trim().to_string(),
        })?;
        if labels.insert(utt.trim().to_string(), label).is_some() {
            return Err(CorpusError::DuplicateUttId(utt.trim().to_string()));
        }
    }
    Ok(labels)
}

pub fn ingest_labels(path: impl AsRef<Path>) -> Result<BTreeMap<String, EmotionLabel>, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_labels(&text)
}

/// Manual labels win over anything already on the record. Returns the ids
/// that matched no record.
pub fn apply_labels(records: &mut [UtteranceRecord], labels: &BTreeMap<String, EmotionLabel>) -> Vec<String> {
    let mut used = std::collections::BTreeSet::new();
    for r in records.iter_mut() {
        if let Some(&l) = labels.get(&r.utt_id) {
            r.emotion = Some(l);
            used.insert(r.utt_id.as_str().to_owned());
        }
    }
    labels.keys().filter(|k| !used.contains(*k)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audio::{estimate_f0, synth};

    fn track_of(hz: f64) -> F0Track {
        estimate_f0(&synth::sine(hz, 0.5, 0.5, 22_050), 25.0, 10.0, 60.0, 400.0).unwrap()
    }

    fn constant_track(hz: f64) -> F0Track {
        F0Track {
            hop_ms: 10.0,
            frame_len_ms: 25.0,
            f0_min: 60.0,
            f0_max: 400.0,
            f0_hz: vec![hz, 0.0, hz],
            voicing_confidence: vec![1.0, 0.0, 1.0],
        }
    }

    #[test]
    fn tones_map_to_classes() {
        let th = EmotionThresholds::default();
        assert_eq!(suggest_emotion(&track_of(140.0), &th).unwrap(), EmotionLabel::Neutral);
        assert_eq!(suggest_emotion(&track_of(200.0), &th).unwrap(), EmotionLabel::Excited);
        assert_eq!(suggest_emotion(&track_of(300.0), &th).unwrap(), EmotionLabel::VeryExcited);
    }

    #[test]
    fn boundaries_are_half_open() {
        let th = EmotionThresholds::default();
        assert_eq!(suggest_emotion(&constant_track(170.0), &th).unwrap(), EmotionLabel::Excited);
        assert_eq!(suggest_emotion(&constant_track(250.0), &th).unwrap(), EmotionLabel::VeryExcited);
        assert_eq!(suggest_emotion(&constant_track(169.999), &th).unwrap(), EmotionLabel::Neutral);
    }

    #[test]
    fn unvoiced_and_bad_thresholds() {
        let mut t = constant_track(100.0);
        t.f0_hz = vec![0.0; 3];
        assert!(matches!(suggest_emotion(&t, &EmotionThresholds::default()), Err(CorpusError::NoVoicedFrames)));
        let th = EmotionThresholds { excited_hz: 300.0, very_excited_hz: 200.0 };
        assert!(suggest_emotion(&constant_track(100.0), &th).is_err());
    }

    #[test]
    fn label_file_rules() {
        let l = parse_labels("m01_0000\texcited\n\n# note\nm01_0001\tVery_Excited\n").unwrap();
        assert_eq!(l["m01_0000"], EmotionLabel::Excited);
        assert_eq!(l["m01_0001"], EmotionLabel::VeryExcited);
        assert!(matches!(parse_labels("a\tneutral\na\texcited\n"), Err(CorpusError::DuplicateUttId(_))));
        assert!(matches!(parse_labels("a\tneutral\nb\tangry\n"), Err(CorpusError::UnknownLabel { line: 2, .. })));
        assert!(matches!(parse_labels("a neutral\n"), Err(CorpusError::MalformedLine { .. })));
    }
}
