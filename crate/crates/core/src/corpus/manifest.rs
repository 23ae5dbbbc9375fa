//! Kaldi-style data directories.
//!
//! | file          | line                       |
//! |---------------|----------------------------|
//! | `wav.scp`     | `<rec_id> <path>`          |
//! | `segments`    | `<utt> <rec_id> <s> <e>`   |
//! | `text`        | `<utt> <vowelized text>`   |
//! | `text_raw`    | `<utt> <raw text>`         |
//! | `utt2spk`     | `<utt> <speaker>`          |
//! | `utt2emotion` | `<utt> <label>`            |
//! | `utt2score`   | `<utt> <score>` (only written when some record has one) |
//!
//! Lines are sorted bytewise by their first field; times carry three
//! decimals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{CorpusError, EmotionLabel, UtteranceRecord};

pub const MANIFEST_FILES: [&str; 6] = ["wav.scp", "segments", "text", "text_raw", "utt2spk", "utt2emotion"];
pub(crate) const SCORE_FILE: &str = "utt2score";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ManifestOptions {
    /// Write unlabeled utterances as neutral instead of failing.
    pub allow_unlabeled: bool,
}

/// Writes the manifest files for `records` into `out_dir` (created if
/// missing) and returns the paths written.
pub fn emit_manifests(
    records: &[UtteranceRecord],
    recordings: &BTreeMap<String, PathBuf>,
    out_dir: impl AsRef<Path>,
    opts: ManifestOptions,
) -> Result<Vec<PathBuf>, CorpusError> {
    let out_dir = out_dir.as_ref();
    let mut by_id: BTreeMap<&str, &UtteranceRecord> = BTreeMap::new();
    for r in records {
        r.validate()?;
        if by_id.insert(&r.utt_id, r).is_some() {
            return Err(CorpusError::DuplicateUttId(r.utt_id.clone()));
        }
    }

    let mut used: BTreeSet<&str> = BTreeSet::new();
    let mut files: BTreeMap<&str, String> = MANIFEST_FILES.iter().map(|&f| (f, String::new())).collect();
    let mut scores = String::new();
    for (id, r) in &by_id {
        let path = recordings
            .get(&r.recording_id)
            .ok_or_else(|| CorpusError::UnresolvedAudio(r.utt_id.clone()))?;
        if path.to_string_lossy().chars().any(char::is_whitespace) {
            return Err(CorpusError::InvalidRecord {
                utt_id: r.utt_id.clone(),
                reason: format!("audio path {} contains whitespace", path.display()),
            });
        }
        used.insert(&r.recording_id);
        let emotion = match (r.emotion, opts.allow_unlabeled) {
            (Some(e), _) => e,
            (None, true) => EmotionLabel::Neutral,
            (None, false) => return Err(CorpusError::Unlabeled(r.utt_id.clone())),
        };
        let line = |f: &mut BTreeMap<&str, String>, name: &str, value: &str| {
            let _ = writeln!(f.get_mut(name).unwrap(), "{id} {value}");
        };
        line(&mut files, "segments", &format!("{} {:.3} {:.3}", r.recording_id, r.start_s, r.end_s));
        line(&mut files, "text", &r.text_vowelized);
        line(&mut files, "text_raw", &r.text_raw);
        line(&mut files, "utt2spk", &r.speaker_id);
        line(&mut files, "utt2emotion", emotion.as_str());
        if let Some(s) = r.align_score {
            let _ = writeln!(scores, "{id} {s}");
        }
    }
    for rec in &used {
        let _ = writeln!(files.get_mut("wav.scp").unwrap(), "{rec} {}", recordings[*rec].display());
    }

    std::fs::create_dir_all(out_dir).map_err(|source| CorpusError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    let score_entry = (!scores.is_empty()).then_some((SCORE_FILE, scores));
    for (name, body) in files.into_iter().chain(score_entry) {
        let path = out_dir.join(name);
        std::fs::write(&path, body).map_err(|source| CorpusError::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    // A stale score file from an earlier run would no longer match.
    if !written.iter().any(|p| p.ends_with(SCORE_FILE)) {
        let stale = out_dir.join(SCORE_FILE);
        if stale.exists() {
            std::fs::remove_file(&stale).map_err(|source| CorpusError::Io { path: stale, source })?;
        }
    }
    Ok(written)
}

/// `(line number, key, rest of line)` for each non-empty line.
pub(crate) type TableRows = Vec<(usize, String, String)>;

pub(crate) fn read_table(dir: &Path, name: &str) -> Result<Option<TableRows>, CorpusError> {
    let path = dir.join(name);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).map_err(|source| CorpusError::Io { path, source })?;
    Ok(Some(
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                let (key, rest) = l.split_once(' ').unwrap_or((l, ""));
                (i + 1, key.to_string(), rest.to_string())
            })
            .collect(),
    ))
}

/// Parses a directory written by [`emit_manifests`] back into records and
/// the recording table. Records come back sorted by utterance id.
pub fn read_manifests(
    dir: impl AsRef<Path>,
) -> Result<(Vec<UtteranceRecord>, BTreeMap<String, PathBuf>), CorpusError> {
    let dir = dir.as_ref();
    let required = |name: &str| -> Result<BTreeMap<String, String>, CorpusError> {
        let rows = read_table(dir, name)?.ok_or_else(|| CorpusError::Io {
            path: dir.join(name),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "manifest file missing"),
        })?;
        let mut map = BTreeMap::new();
        for (_, k, v) in rows {
            if map.insert(k.clone(), v).is_some() {
                return Err(CorpusError::DuplicateUttId(k));
            }
        }
        Ok(map)
    };
    let recordings: BTreeMap<String, PathBuf> =
        required("wav.scp")?.into_iter().map(|(k, v)| (k, PathBuf::from(v))).collect();
    let segments = required("segments")?;
    let text = required("text")?;
    let text_raw = required("text_raw")?;
    let utt2spk = required("utt2spk")?;
    let utt2emotion = required("utt2emotion")?;
    let scores = match read_table(dir, SCORE_FILE)? {
        Some(rows) => rows.into_iter().map(|(_, k, v)| (k, v)).collect(),
        None => BTreeMap::new(),
    };

    let missing = |file: &str, utt: &str| CorpusError::MalformedLine {
        file: file.into(),
        line: 0,
        reason: format!("no entry for {utt}"),
    };
    let mut records = Vec::with_capacity(segments.len());
    for (utt, seg) in &segments {
        let fields: Vec<&str> = seg.split(' ').collect();
        let [rec, start, end] = fields[..] else {
            return Err(CorpusError::MalformedLine {
                file: "segments".into(),
                line: 0,
                reason: format!("{utt}: expected <rec> <start> <end>"),
            });
        };
        let parse = |v: &str| {
            v.parse::<f64>().map_err(|e| CorpusError::MalformedLine {
                file: "segments".into(),
                line: 0,
                reason: format!("{utt}: {e}"),
            })
        };
        let label = utt2emotion.get(utt).ok_or_else(|| missing("utt2emotion", utt))?;
        records.push(UtteranceRecord {
            utt_id: utt.clone(),
            recording_id: rec.to_string(),
            start_s: parse(start)?,
            end_s: parse(end)?,
            text_raw: text_raw.get(utt).ok_or_else(|| missing("text_raw", utt))?.clone(),
            text_vowelized: text.get(utt).ok_or_else(|| missing("text", utt))?.clone(),
            emotion: Some(label.parse().map_err(|_| CorpusError::UnknownLabel {
                line: 0,
                label: label.clone(),
            })?),
            align_score: scores.get(utt).map(|s| parse(s)).transpose()?,
            speaker_id: utt2spk.get(utt).ok_or_else(|| missing("utt2spk", utt))?.clone(),
        });
    }
    Ok((records, recordings))
}
