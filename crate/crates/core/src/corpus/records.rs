//! Tab-separated record lists: the intermediate format between alignment
//! and manifest building.
//!
//! The first line is a header naming the columns. `utt_id`, `recording_id`,
//! `start_s`, `end_s` and `text_raw` are required; `text_vowelized`,
//! `emotion`, `align_score` and `speaker_id` are optional and may be empty.

use std::collections::HashMap;
use std::path::Path;

use super::{CorpusError, UtteranceRecord};

const COLUMNS: [&str; 9] = [
    "utt_id",
    "recording_id",
    "start_s",
    "end_s",
    "text_raw",
    "text_vowelized",
    "emotion",
    "align_score",
    "speaker_id",
];
const REQUIRED: usize = 5;

pub fn parse_records_tsv(text: &str, default_speaker: &str) -> Result<Vec<UtteranceRecord>, CorpusError> {
    let malformed = |line: usize, reason: String| CorpusError::MalformedLine {
        file: "records".into(),
        line,
        reason,
    };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Ok(Vec::new());
    };
    let columns: HashMap<&str, usize> = header.split('\t').map(str::trim).enumerate().map(|(i, c)| (c, i)).collect();
    for name in &COLUMNS[..REQUIRED] {
        if !columns.contains_key(name) {
            return Err(malformed(1, format!("header lacks column {name:?}")));
        }
    }
    if let Some(unknown) = columns.keys().find(|c| !COLUMNS.contains(c)) {
        return Err(malformed(1, format!("unknown column {unknown:?}")));
    }

    lines
        .map(|(i, line)| {
            let line_no = i + 1;
            let fields: Vec<&str> = line.split('\t').collect();
            let get = |name: &str| -> &str {
                columns
                    .get(name)
                    .and_then(|&c| fields.get(c))
                    .map(|s| s.trim())
                    .unwrap_or("")
            };
            let seconds = |name: &str| {
                get(name)
                    .parse::<f64>()
                    .map_err(|e| malformed(line_no, format!("{name}: {e}")))
            };
            let text_raw = get("text_raw").to_string();
            let text_vowelized = match get("text_vowelized") {
                "" => text_raw.clone(),
                v => v.to_string(),
            };
            let emotion = match get("emotion") {
                "" => None,
                l => Some(l.parse().map_err(|_| CorpusError::UnknownLabel {
                    line: line_no,
                    label: l.to_string(),
                })?),
            };
            let align_score = match get("align_score") {
                "" => None,
                s => Some(s.parse().map_err(|e| malformed(line_no, format!("align_score: {e}")))?),
            };
            let speaker_id = match get("speaker_id") {
                "" => default_speaker.to_string(),
                s => s.to_string(),
            };
            let record = UtteranceRecord {
                utt_id: get("utt_id").to_string(),
                recording_id: get("recording_id").to_string(),
                start_s: seconds("start_s")?,
                end_s: seconds("end_s")?,
                text_raw,
                text_vowelized,
                emotion,
                align_score,
                speaker_id,
            };
            record.validate()?;
            Ok(record)
        })
        .collect()
}

pub fn read_records_tsv(path: impl AsRef<Path>, default_speaker: &str) -> Result<Vec<UtteranceRecord>, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_records_tsv(&text, default_speaker)
}

/// Writes all nine columns with a header.
pub fn format_records_tsv(records: &[UtteranceRecord]) -> String {
    let mut out = COLUMNS.join("\t");
    out.push('\n');
    for r in records {
        let fields = [
            r.utt_id.clone(),
            r.recording_id.clone(),
            format!("{:.3}", r.start_s),
            format!("{:.3}", r.end_s),
            r.text_raw.clone(),
            r.text_vowelized.clone(),
            r.emotion.map(|e| e.to_string()).unwrap_or_default(),
            r.align_score.map(|s| s.to_string()).unwrap_or_default(),
            r.speaker_id.clone(),
        ];
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    out
}
