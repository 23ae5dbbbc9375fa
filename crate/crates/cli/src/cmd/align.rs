use std::path::PathBuf;

use clap::{Args, ValueEnum};
use fooctts_core::align::{align, emit_segments, filter_by_score, load_posteriors, parse_transcript};
use fooctts_core::corpus::{format_records_tsv, DEFAULT_SPEAKER_ID};
use fooctts_core::{StayMode, UtteranceRecord};

use super::{file_stem, write_file};
use crate::config::PipelineConfig;
use crate::error::{CliError, Tag};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StayArg {
    BlankOnly,
    BlankOrRepeat,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    /// CTCP log-posterior file; its vocabulary is read from
    /// `<stem>.vocab.json` beside it.
    pub posteriors: PathBuf,
    /// One utterance per line, in spoken order.
    pub transcript: PathBuf,
    /// Kaldi `segments` output.
    pub out: PathBuf,
    /// Recording id used in utterance ids (default: posteriors file stem).
    #[arg(long)]
    pub recording_id: Option<String>,
    /// Drop utterances whose confidence score is below this.
    #[arg(long, allow_hyphen_values = true)]
    pub min_score: Option<f64>,
    #[arg(long, value_enum)]
    pub stay: Option<StayArg>,
    /// Confidence window, in frames.
    #[arg(long)]
    pub window: Option<usize>,
    /// Also write a records TSV (times, transcript text and score) for
    /// `fooctts build`.
    #[arg(long)]
    pub records: Option<PathBuf>,
}

pub fn run(args: &AlignArgs, cfg: &PipelineConfig) -> Result<(), CliError> {
    let mut align_cfg = cfg.align.clone();
    if let Some(s) = args.min_score {
        align_cfg.min_score = Some(s);
    }
    if let Some(w) = args.window {
        if w == 0 {
            return Err(CliError::Input("--window must be >= 1".into()));
        }
        align_cfg.window = w;
    }
    if let Some(stay) = args.stay {
        align_cfg.stay = match stay {
            StayArg::BlankOnly => StayMode::BlankOnly,
            StayArg::BlankOrRepeat => StayMode::BlankOrRepeat,
        };
    }
    let rec = match &args.recording_id {
        Some(r) => r.clone(),
        None => file_stem(&args.posteriors)?,
    };
    if rec.is_empty() || rec.contains(char::is_whitespace) {
        return Err(CliError::Input(format!("recording id {rec:?} must be non-empty without whitespace")));
    }

    let matrix = load_posteriors(&args.posteriors).input_err(args.posteriors.display())?;
    let text = std::fs::read_to_string(&args.transcript).input_err(args.transcript.display())?;
    let lines = parse_transcript(&text);
    let tokens: Vec<Vec<usize>> = lines
        .iter()
        .enumerate()
        .map(|(i, l)| matrix.vocab().encode(l).input_err(format!("{} line {}", args.transcript.display(), i + 1)))
        .collect::<Result<_, _>>()?;
    let aligned = align(&matrix, &tokens, &align_cfg).input_err("alignment")?;
    let total = aligned.len();
    let kept = filter_by_score(aligned, align_cfg.min_score);
    if kept.is_empty() {
        return Err(CliError::Input(format!("all {total} utterances fell below the minimum score")));
    }
    write_file(&args.out, emit_segments(&kept, &rec).runtime_err("segments")?)?;

    if let Some(path) = &args.records {
        let records: Vec<UtteranceRecord> = kept
            .iter()
            .map(|u| UtteranceRecord {
                utt_id: format!("{rec}_{:04}", u.utterance_index),
                recording_id: rec.clone(),
                start_s: u.start_s,
                end_s: u.end_s,
                text_raw: lines[u.utterance_index].clone(),
                text_vowelized: String::new(),
                emotion: None,
                align_score: Some(u.score),
                speaker_id: DEFAULT_SPEAKER_ID.into(),
            })
            .collect();
        write_file(path, format_records_tsv(&records))?;
    }
    tracing::info!(utterances = total, kept = kept.len(), recording = %rec, "aligned");
    Ok(())
}
