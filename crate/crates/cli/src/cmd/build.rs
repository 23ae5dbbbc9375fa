use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use fooctts_core::audio::{estimate_f0_with, read_wav};
use fooctts_core::corpus::{
    apply_labels, emit_manifests, format_records_tsv, ingest_labels, read_records_tsv, split, suggest_emotion,
    validate_manifest, ManifestOptions, SplitStrategy, DEFAULT_SPEAKER_ID,
};
use fooctts_core::vad::cut_audio;
use fooctts_core::{Segment, SegmentLabel, UtteranceRecord};

use super::{par_map, write_file};
use crate::config::PipelineConfig;
use crate::error::{CliError, Tag};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Random,
    Chronological,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Records TSV (see `fooctts align --records`).
    pub records: PathBuf,
    /// Directory holding `<recording_id>.wav` for every recording.
    pub audio_dir: PathBuf,
    /// Receives `train/`, `dev/`, `test/` manifest directories and the
    /// labeled `records.tsv`.
    pub out_dir: PathBuf,
    /// `utt_id<TAB>label` file; overrides suggested labels.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Label still-unlabeled utterances from their mean pitch.
    #[arg(long)]
    pub suggest_emotion: bool,
    /// Write remaining unlabeled utterances as neutral instead of failing.
    #[arg(long)]
    pub allow_unlabeled: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_dev: Option<usize>,
    #[arg(long)]
    pub n_test: Option<usize>,
    #[arg(long, value_enum)]
    pub split_strategy: Option<StrategyArg>,
    /// Speaker id for records that do not name one.
    #[arg(long, default_value = DEFAULT_SPEAKER_ID)]
    pub speaker: String,
    /// Recordings analyzed in parallel for `--suggest-emotion`.
    #[arg(short, long)]
    pub jobs: Option<usize>,
}

pub fn run(args: &BuildArgs, cfg: &PipelineConfig) -> Result<(), CliError> {
    let mut records = read_records_tsv(&args.records, &args.speaker).input_err(args.records.display())?;
    if records.is_empty() {
        return Err(CliError::Input(format!("{}: no records", args.records.display())));
    }
    let audio = resolve_audio(&records, &args.audio_dir)?;

    if args.suggest_emotion {
        suggest(&mut records, &audio, args.jobs, cfg)?;
    }
    if let Some(path) = &args.labels {
        let labels = ingest_labels(path).input_err(path.display())?;
        let unmatched = apply_labels(&mut records, &labels);
        if !unmatched.is_empty() {
            tracing::warn!(count = unmatched.len(), first = %unmatched[0], "labels for unknown utterances ignored");
        }
    }

    let mut spec = cfg.split.clone();
    spec.seed = args.seed.unwrap_or(spec.seed);
    spec.n_dev = args.n_dev.unwrap_or(spec.n_dev);
    spec.n_test = args.n_test.unwrap_or(spec.n_test);
    if let Some(s) = args.split_strategy {
        spec.strategy = match s {
            StrategyArg::Random => SplitStrategy::Random,
            StrategyArg::Chronological => SplitStrategy::Chronological,
        };
    }
    let parts = split(&records, &spec).input_err("split")?;
    let opts = ManifestOptions {
        allow_unlabeled: args.allow_unlabeled,
    };
    for (name, part) in [("train", &parts.train), ("dev", &parts.dev), ("test", &parts.test)] {
        let dir = args.out_dir.join(name);
        emit_manifests(part, &audio, &dir, opts).map_err(|e| match e {
            fooctts_core::corpus::CorpusError::Io { .. } => CliError::Runtime(format!("{name}: {e}")),
            other => CliError::Input(format!("{name}: {other}")),
        })?;
        let report = validate_manifest(&dir);
        if !report.is_valid() {
            let json = serde_json::to_string_pretty(&report).runtime_err("report")?;
            eprintln!("{json}");
            return Err(CliError::Input(format!("{name}: manifest failed validation ({} issues)", report.issues.len())));
        }
    }
    let mut all = records;
    all.sort_by(|a, b| a.utt_id.cmp(&b.utt_id));
    write_file(&args.out_dir.join("records.tsv"), format_records_tsv(&all))?;
    tracing::info!(
        train = parts.train.len(),
        dev = parts.dev.len(),
        test = parts.test.len(),
        out = %args.out_dir.display(),
        "corpus built"
    );
    Ok(())
}

fn resolve_audio(records: &[UtteranceRecord], audio_dir: &Path) -> Result<BTreeMap<String, PathBuf>, CliError> {
    let mut table = BTreeMap::new();
    for r in records {
        if table.contains_key(&r.recording_id) {
            continue;
        }
        let path = audio_dir.join(format!("{}.wav", r.recording_id));
        let path = path
            .canonicalize()
            .input_err(format!("audio for recording {} ({})", r.recording_id, path.display()))?;
        table.insert(r.recording_id.clone(), path);
    }
    Ok(table)
}

fn suggest(
    records: &mut [UtteranceRecord],
    audio: &BTreeMap<String, PathBuf>,
    jobs: Option<usize>,
    cfg: &PipelineConfig,
) -> Result<(), CliError> {
    let recordings: Vec<(&String, &PathBuf)> = audio.iter().collect();
    let per_rec = par_map(&recordings, jobs, |(rec, path)| {
        let buffer = read_wav(path).input_err(path.display())?;
        let mine: Vec<&UtteranceRecord> =
            records.iter().filter(|r| &r.recording_id == *rec && r.emotion.is_none()).collect();
        let spans: Vec<Segment> = mine
            .iter()
            .map(|r| Segment { start_s: r.start_s, end_s: r.end_s, label: SegmentLabel::Speech })
            .collect();
        let clips = cut_audio(&buffer, &spans).input_err(path.display())?;
        Ok(mine
            .iter()
            .zip(clips)
            .filter_map(|(r, clip)| {
                let label = estimate_f0_with(&clip, &cfg.f0)
                    .map_err(|e| e.to_string())
                    .and_then(|track| suggest_emotion(&track, &cfg.emotion).map_err(|e| e.to_string()));
                match label {
                    Ok(l) => Some((r.utt_id.clone(), l)),
                    Err(e) => {
                        tracing::warn!(utt = %r.utt_id, error = %e, "no emotion suggestion");
                        None
                    }
                }
            })
            .collect::<Vec<_>>())
    })?;
    let suggested: BTreeMap<_, _> = per_rec.into_iter().flatten().collect();
    apply_labels(records, &suggested);
    Ok(())
}
