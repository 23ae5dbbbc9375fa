//! Four-class segmentation of a recording into speech, noise, music and
//! noEnergy regions.
//!
//! Frames are labeled by a [`FrameClassifier`]; the bundled
//! [`HeuristicClassifier`] is a deterministic cascade over energy,
//! zero-crossing rate and spectral flatness. Labels are then mode-filtered,
//! merged into runs, and short runs are folded into their longer neighbour so
//! the resulting [`Segment`]s tile the whole recording.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::audio::{frame_features, AudioBuffer, AudioError, FeatureTrack, DEFAULT_FRAME_LEN_MS, DEFAULT_HOP_MS};

#[derive(Debug, thiserror::Error)]
pub enum VadError {
    #[error("feature track is empty")]
    EmptyTrack,
    #[error("segment {index} [{start_s:.3}, {end_s:.3}] lies outside the {duration_s:.3} s buffer")]
    SegmentOutOfRange {
        index: usize,
        start_s: f64,
        end_s: f64,
        duration_s: f64,
    },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Audio(#[from] AudioError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SegmentLabel {
    #[serde(rename = "speech")]
    Speech,
    #[serde(rename = "noise")]
    Noise,
    #[serde(rename = "music")]
    Music,
    #[serde(rename = "noEnergy")]
    NoEnergy,
}

impl SegmentLabel {
    pub const ALL: [SegmentLabel; 4] = [Self::Speech, Self::Noise, Self::Music, Self::NoEnergy];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Speech => "speech",
            Self::Noise => "noise",
            Self::Music => "music",
            Self::NoEnergy => "noEnergy",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for SegmentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SegmentLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown segment label {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start_s: f64,
    pub end_s: f64,
    pub label: SegmentLabel,
}

impl Segment {
    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VadConfig {
    pub frame_len_ms: f64,
    pub hop_ms: f64,
    /// Frames quieter than this are noEnergy.
    pub energy_floor_db: f64,
    /// Tonal frames (flatness below this) are music candidates.
    pub flatness_music_max: f64,
    /// Half-width, in frames, of the neighbourhood used for the music
    /// stability test.
    pub music_context_frames: usize,
    /// Music must be steadier than this (std of frame energy, dB) ...
    pub music_energy_std_max_db: f64,
    /// ... and than this (std of spectral flatness).
    pub music_flatness_std_max: f64,
    /// Zero crossings per second accepted as speech.
    pub zcr_speech_range: [f64; 2],
    /// Frames flatter than this are never speech.
    pub speech_flatness_max: f64,
    pub min_segment_s: f64,
    /// Width of the label mode filter, in frames.
    pub smoothing_window: usize,
}

impl Default for VadConfig {
    fn default() -> Self {
        Self {
            frame_len_ms: DEFAULT_FRAME_LEN_MS,
            hop_ms: DEFAULT_HOP_MS,
            energy_floor_db: -55.0,
            flatness_music_max: 0.15,
            music_context_frames: 25,
            music_energy_std_max_db: 3.0,
            music_flatness_std_max: 0.05,
            zcr_speech_range: [50.0, 5000.0],
            speech_flatness_max: 0.4,
            min_segment_s: 0.3,
            smoothing_window: 11,
        }
    }
}

impl VadConfig {
    pub fn validate(&self) -> Result<(), String> {
        let finite = [
            self.frame_len_ms,
            self.hop_ms,
            self.energy_floor_db,
            self.flatness_music_max,
            self.music_energy_std_max_db,
            self.music_flatness_std_max,
            self.zcr_speech_range[0],
            self.zcr_speech_range[1],
            self.speech_flatness_max,
            self.min_segment_s,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err("VAD thresholds must be finite".into());
        }
        if self.min_segment_s <= 0.0 {
            return Err("min_segment_s must be > 0".into());
        }
        if self.hop_ms <= 0.0 || self.frame_len_ms < self.hop_ms {
            return Err("need frame_len_ms >= hop_ms > 0".into());
        }
        if self.zcr_speech_range[0] > self.zcr_speech_range[1] {
            return Err("zcr_speech_range must be ordered".into());
        }
        if self.smoothing_window == 0 {
            return Err("smoothing_window must be >= 1".into());
        }
        Ok(())
    }
}

/// Anything that can label frames; lets a model-backed classifier stand in
/// for the heuristic one.
pub trait FrameClassifier {
    fn classify(&self, track: &FeatureTrack) -> Result<Vec<SegmentLabel>, VadError>;
}

#[derive(Debug, Clone, Default)]
pub struct HeuristicClassifier {
    pub cfg: VadConfig,
}

impl FrameClassifier for HeuristicClassifier {
    fn classify(&self, track: &FeatureTrack) -> Result<Vec<SegmentLabel>, VadError> {
        classify_frames(track, &self.cfg)
    }
}

/// Labels each frame:
///
/// 1. `energy_db < energy_floor_db` → noEnergy
/// 2. tonal (`flatness < flatness_music_max`) and steady over the surrounding
///    context (low std of energy and flatness) → music
/// 3. zero-crossing rate and flatness inside the speech band → speech
/// 4. otherwise → noise
pub fn classify_frames(track: &FeatureTrack, cfg: &VadConfig) -> Result<Vec<SegmentLabel>, VadError> {
    if track.is_empty() {
        return Err(VadError::EmptyTrack);
    }
    let frames = &track.frames;
    let frame_s = track.frame_seconds();
    let energy: Vec<f64> = frames.iter().map(|f| f.energy_db).collect();
    let flat: Vec<f64> = frames.iter().map(|f| f.spectral_flatness).collect();

    let labels = frames
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if f.energy_db < cfg.energy_floor_db {
                return SegmentLabel::NoEnergy;
            }
            if f.spectral_flatness < cfg.flatness_music_max {
                let lo = i.saturating_sub(cfg.music_context_frames);
                let hi = (i + cfg.music_context_frames + 1).min(frames.len());
                if std_dev(&energy[lo..hi]) < cfg.music_energy_std_max_db
                    && std_dev(&flat[lo..hi]) < cfg.music_flatness_std_max
                {
                    return SegmentLabel::Music;
                }
            }
            let zcr_rate = f.zcr as f64 / frame_s;
            if (cfg.zcr_speech_range[0]..=cfg.zcr_speech_range[1]).contains(&zcr_rate)
                && f.spectral_flatness <= cfg.speech_flatness_max
            {
                SegmentLabel::Speech
            } else {
                SegmentLabel::Noise
            }
        })
        .collect();
    Ok(labels)
}

fn std_dev(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Where frames sit on the timeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameTiming {
    pub hop_s: f64,
    pub frame_s: f64,
    pub duration_s: f64,
}

impl FrameTiming {
    pub fn from_track(track: &FeatureTrack) -> Self {
        Self {
            hop_s: track.hop_seconds(),
            frame_s: track.frame_seconds(),
            duration_s: track.duration_seconds(),
        }
    }

    /// Frames of length `hop_s` laid end to end.
    pub fn contiguous(hop_s: f64, n_frames: usize) -> Self {
        Self {
            hop_s,
            frame_s: hop_s,
            duration_s: hop_s * n_frames as f64,
        }
    }

    /// Boundary between frame `i - 1` and frame `i`: halfway between their
    /// centres.
    fn boundary_before(&self, i: usize) -> f64 {
        (i as f64 * self.hop_s + 0.5 * (self.frame_s - self.hop_s)).clamp(0.0, self.duration_s)
    }
}

/// Mode-filters the labels, merges them into runs, folds runs shorter than
/// `min_segment_s` into their longer neighbour, and returns segments that
/// exactly tile `[0, duration]`.
pub fn smooth_and_segment(labels: &[SegmentLabel], timing: FrameTiming, cfg: &VadConfig) -> Vec<Segment> {
    if labels.is_empty() {
        return Vec::new();
    }
    let smoothed = mode_filter(labels, cfg.smoothing_window.max(1));

    // Runs as (first frame, label); run k ends where run k+1 starts.
    let mut runs: Vec<(usize, SegmentLabel)> = Vec::new();
    for (i, &l) in smoothed.iter().enumerate() {
        if runs.last().map(|r| r.1) != Some(l) {
            runs.push((i, l));
        }
    }

    let bounds = |runs: &[(usize, SegmentLabel)], k: usize| -> (f64, f64) {
        let start = if k == 0 { 0.0 } else { timing.boundary_before(runs[k].0) };
        let end = if k + 1 == runs.len() {
            timing.duration_s
        } else {
            timing.boundary_before(runs[k + 1].0)
        };
        (start, end)
    };

    while runs.len() > 1 {
        let shortest = (0..runs.len())
            .map(|k| {
                let (s, e) = bounds(&runs, k);
                (k, e - s)
            })
            .filter(|&(_, d)| d < cfg.min_segment_s)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let Some((k, _)) = shortest else { break };

        let dur = |k: usize| {
            let (s, e) = bounds(&runs, k);
            e - s
        };
        let absorb_into_prev = match (k.checked_sub(1), (k + 1 < runs.len()).then_some(k + 1)) {
            (Some(p), Some(n)) => dur(p) >= dur(n),
            (Some(_), None) => true,
            _ => false,
        };
        if absorb_into_prev {
            runs.remove(k);
        } else {
            // The next run takes over this run's start.
            runs[k + 1].0 = runs[k].0;
            runs.remove(k);
        }
        runs.dedup_by(|next, prev| next.1 == prev.1);
    }

    (0..runs.len())
        .map(|k| {
            let (start_s, end_s) = bounds(&runs, k);
            Segment {
                start_s,
                end_s,
                label: runs[k].1,
            }
        })
        .collect()
}

fn mode_filter(labels: &[SegmentLabel], window: usize) -> Vec<SegmentLabel> {
    let half = window / 2;
    (0..labels.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(labels.len());
            let mut counts = [0usize; 4];
            for l in &labels[lo..hi] {
                counts[l.index()] += 1;
            }
            let best = *counts.iter().max().unwrap();
            if counts[labels[i].index()] == best {
                labels[i]
            } else {
                SegmentLabel::ALL
                    .into_iter()
                    .find(|l| counts[l.index()] == best)
                    .unwrap()
            }
        })
        .collect()
}

/// Keeps speech segments only, in order.
pub fn filter_speech(segments: &[Segment]) -> Vec<Segment> {
    segments
        .iter()
        .filter(|s| s.label == SegmentLabel::Speech)
        .copied()
        .collect()
}

/// Cuts one clip per segment.
///
/// Clip boundaries are `round(t · rate)` on both ends, so adjacent segments
/// concatenate back to exactly the covered span.
pub fn cut_audio(buffer: &AudioBuffer, segments: &[Segment]) -> Result<Vec<AudioBuffer>, VadError> {
    let rate = buffer.sample_rate() as f64;
    let duration_s = buffer.duration_seconds();
    segments
        .iter()
        .enumerate()
        .map(|(index, seg)| {
            let start = (seg.start_s * rate).round();
            let end = (seg.end_s * rate).round();
            if !(seg.start_s >= 0.0 && seg.start_s < seg.end_s && end <= buffer.len() as f64) {
                return Err(VadError::SegmentOutOfRange {
                    index,
                    start_s: seg.start_s,
                    end_s: seg.end_s,
                    duration_s,
                });
            }
            Ok(AudioBuffer::new(
                buffer.samples()[start as usize..end as usize].to_vec(),
                buffer.sample_rate(),
            ))
        })
        .collect()
}

/// Features → heuristic labels → smoothed segments for one buffer.
pub fn segment_recording(buffer: &AudioBuffer, cfg: &VadConfig) -> Result<Vec<Segment>, VadError> {
    segment_with(buffer, cfg, &HeuristicClassifier { cfg: cfg.clone() })
}

pub fn segment_with(
    buffer: &AudioBuffer,
    cfg: &VadConfig,
    classifier: &dyn FrameClassifier,
) -> Result<Vec<Segment>, VadError> {
    let track = frame_features(buffer, cfg.frame_len_ms, cfg.hop_ms)?;
    let labels = classifier.classify(&track)?;
    Ok(smooth_and_segment(&labels, FrameTiming::from_track(&track), cfg))
}

/// `<start>\t<end>\t<label>` lines, seconds with three decimals.
pub fn format_segments(segments: &[Segment]) -> String {
    segments
        .iter()
        .map(|s| format!("{:.3}\t{:.3}\t{}\n", s.start_s, s.end_s, s.label))
        .collect()
}

pub fn parse_segments(text: &str) -> Result<Vec<Segment>, VadError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let err = |reason: String| VadError::Parse { line: i + 1, reason };
            let fields: Vec<&str> = line.split('\t').collect();
            let [start, end, label] = fields[..] else {
                return Err(err(format!("expected 3 tab-separated fields, got {}", fields.len())));
            };
            let start_s: f64 = start.parse().map_err(|e| err(format!("start: {e}")))?;
            let end_s: f64 = end.parse().map_err(|e| err(format!("end: {e}")))?;
            if !(0.0 <= start_s && start_s < end_s) {
                return Err(err(format!("need 0 <= start < end, got {start_s} / {end_s}")));
            }
            Ok(Segment {
                start_s,
                end_s,
                label: label.trim().parse().map_err(err)?,
            })
        })
        .collect()
}
