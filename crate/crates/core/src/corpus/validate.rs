//! Consistency checks over a manifest directory. Never fails: every problem
//! becomes an entry in the report.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::manifest::{read_table, SCORE_FILE};
use super::{EmotionLabel, MANIFEST_FILES};
use crate::audio::wav_duration_seconds;

/// Slack for segment ends against the audio length; segment times carry
/// three decimals.
const DURATION_TOLERANCE_S: f64 = 0.0005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    MissingFile,
    MalformedLine,
    DuplicateId,
    MissingEntry,
    UnknownRecording,
    SegmentOutOfRange,
    UnreadableAudio,
    InconsistentSpeaker,
    Unsorted,
    InvalidLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestIssue {
    pub kind: IssueKind,
    pub file: String,
    /// 1-based; 0 when the issue is not tied to a line.
    pub line: usize,
    pub utt_id: Option<String>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ManifestIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn count(&self, kind: IssueKind) -> usize {
        self.issues.iter().filter(|i| i.kind == kind).count()
    }

    fn push(&mut self, kind: IssueKind, file: &str, line: usize, utt_id: Option<&str>, detail: impl Into<String>) {
        self.issues.push(ManifestIssue {
            kind,
            file: file.to_string(),
            line,
            utt_id: utt_id.map(str::to_string),
            detail: detail.into(),
        });
    }
}

struct Table {
    rows: BTreeMap<String, (usize, String)>,
}

fn load(dir: &Path, name: &str, report: &mut ValidationReport, required: bool) -> Option<Table> {
    let rows = match read_table(dir, name) {
        Ok(Some(rows)) => rows,
        Ok(None) => {
            if required {
                report.push(IssueKind::MissingFile, name, 0, None, "file not found");
            }
            return None;
        }
        Err(e) => {
            report.push(IssueKind::MissingFile, name, 0, None, e.to_string());
            return None;
        }
    };
    let mut table = Table { rows: BTreeMap::new() };
    let mut prev: Option<String> = None;
    for (line, key, value) in rows {
        if value.trim().is_empty() {
            report.push(IssueKind::MalformedLine, name, line, Some(&key), "missing value");
        }
        if prev.as_deref().is_some_and(|p| p.as_bytes() >= key.as_bytes()) && !table.rows.contains_key(&key) {
            report.push(IssueKind::Unsorted, name, line, Some(&key), "lines are not sorted by first field");
        }
        prev = Some(key.clone());
        if table.rows.contains_key(&key) {
            report.push(IssueKind::DuplicateId, name, line, Some(&key), "id appears more than once");
            continue;
        }
        table.rows.insert(key, (line, value));
    }
    Some(table)
}

/// Checks a manifest directory written by
/// [`emit_manifests`](super::emit_manifests).
///
/// Relative paths in `wav.scp` are resolved against `dir`.
pub fn validate_manifest(dir: impl AsRef<Path>) -> ValidationReport {
    let dir = dir.as_ref();
    let mut report = ValidationReport::default();
    let tables: BTreeMap<&str, Option<Table>> =
        MANIFEST_FILES.iter().map(|&f| (f, load(dir, f, &mut report, true))).collect();
    let scores = load(dir, SCORE_FILE, &mut report, false);

    let mut durations: BTreeMap<String, Option<f64>> = BTreeMap::new();
    if let Some(wav) = &tables["wav.scp"] {
        for (rec, (line, path)) in &wav.rows {
            let p = PathBuf::from(path);
            let p = if p.is_absolute() { p } else { dir.join(p) };
            let d = match wav_duration_seconds(&p) {
                Ok(d) => Some(d),
                Err(e) => {
                    report.push(IssueKind::UnreadableAudio, "wav.scp", *line, None, format!("{rec}: {e}"));
                    None
                }
            };
            durations.insert(rec.clone(), d);
        }
    }

    let Some(segments) = &tables["segments"] else {
        return report;
    };
    for (utt, (line, value)) in &segments.rows {
        let fields: Vec<&str> = value.split(' ').collect();
        let [rec, start, end] = fields[..] else {
            report.push(IssueKind::MalformedLine, "segments", *line, Some(utt), "expected <utt> <rec> <start> <end>");
            continue;
        };
        let (Ok(start), Ok(end)) = (start.parse::<f64>(), end.parse::<f64>()) else {
            report.push(IssueKind::MalformedLine, "segments", *line, Some(utt), "times are not numbers");
            continue;
        };
        if !(start >= 0.0 && start < end) {
            report.push(
                IssueKind::SegmentOutOfRange,
                "segments",
                *line,
                Some(utt),
                format!("need 0 <= start < end, got {start:.3}..{end:.3}"),
            );
        }
        match durations.get(rec) {
            None if tables["wav.scp"].is_some() => report.push(
                IssueKind::UnknownRecording,
                "segments",
                *line,
                Some(utt),
                format!("recording {rec} not in wav.scp"),
            ),
            Some(Some(d)) if end > d + DURATION_TOLERANCE_S => report.push(
                IssueKind::SegmentOutOfRange,
                "segments",
                *line,
                Some(utt),
                format!("ends at {end:.3} s, recording {rec} lasts {d:.3} s"),
            ),
            _ => {}
        }
    }

    // Every utterance must appear in every per-utterance file.
    let per_utt = ["text", "text_raw", "utt2spk", "utt2emotion"];
    let all: BTreeSet<&String> = per_utt
        .iter()
        .filter_map(|f| tables[f].as_ref())
        .chain(std::iter::once(segments))
        .flat_map(|t| t.rows.keys())
        .collect();
    for name in per_utt.iter().copied().chain(["segments"]) {
        let Some(t) = tables[name].as_ref() else { continue };
        for utt in &all {
            if !t.rows.contains_key(*utt) {
                report.push(IssueKind::MissingEntry, name, 0, Some(utt), "utterance missing from file");
            }
        }
    }
    if let Some(scores) = &scores {
        for (utt, (line, value)) in &scores.rows {
            if !segments.rows.contains_key(utt) {
                report.push(IssueKind::MissingEntry, SCORE_FILE, *line, Some(utt), "score for unknown utterance");
            }
            if !value.parse::<f64>().is_ok_and(|s| s <= 0.0) {
                report.push(IssueKind::MalformedLine, SCORE_FILE, *line, Some(utt), "score must be a number <= 0");
            }
        }
    }

    if let Some(t) = &tables["utt2emotion"] {
        for (utt, (line, label)) in &t.rows {
            if label.parse::<EmotionLabel>().map(|l| l.as_str() != label).unwrap_or(true) {
                report.push(IssueKind::InvalidLabel, "utt2emotion", *line, Some(utt), format!("label {label:?}"));
            }
        }
    }

    if let Some(t) = &tables["utt2spk"] {
        // One speaker per recording, and no spaces inside a speaker id.
        let mut per_rec: BTreeMap<&str, &str> = BTreeMap::new();
        for (utt, (line, spk)) in &t.rows {
            if spk.contains(char::is_whitespace) {
                report.push(IssueKind::MalformedLine, "utt2spk", *line, Some(utt), "speaker id contains whitespace");
                continue;
            }
            let Some(rec) = segments.rows.get(utt).and_then(|(_, v)| v.split(' ').next()) else {
                continue;
            };
            match per_rec.get(rec) {
                Some(other) if other != spk => report.push(
                    IssueKind::InconsistentSpeaker,
                    "utt2spk",
                    *line,
                    Some(utt),
                    format!("recording {rec} has speakers {other} and {spk}"),
                ),
                Some(_) => {}
                None => {
                    per_rec.insert(rec, spk);
                }
            }
        }
    }
    report
}
