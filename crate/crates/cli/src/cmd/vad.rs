use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::Args;
use fooctts_core::audio::{read_wav, resample, write_wav};
use fooctts_core::vad::{cut_audio, filter_speech, format_segments, segment_recording};
use fooctts_core::SegmentLabel;

use super::{file_stem, par_map, write_file};
use crate::config::PipelineConfig;
use crate::error::{CliError, Tag};

#[derive(Debug, Args)]
pub struct VadArgs {
    /// WAV recordings to segment.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Segments file for a single input, or a directory receiving
    /// `<stem>.segments` when several inputs are given.
    #[arg(short, long)]
    pub out: PathBuf,
    /// Keep only speech segments.
    #[arg(long)]
    pub speech_only: bool,
    /// Also write one WAV per kept segment, named `<stem>_<index>.wav`.
    #[arg(long)]
    pub cut_dir: Option<PathBuf>,
    /// Recordings processed in parallel (default: all cores).
    #[arg(short, long)]
    pub jobs: Option<usize>,
}

pub fn run(args: &VadArgs, cfg: &PipelineConfig) -> Result<(), CliError> {
    let stems: Vec<String> = args.inputs.iter().map(|p| file_stem(p)).collect::<Result<_, _>>()?;
    if stems.iter().collect::<BTreeSet<_>>().len() != stems.len() {
        return Err(CliError::Input("input file names must be distinct".into()));
    }
    let targets: Vec<(PathBuf, PathBuf, String)> = args
        .inputs
        .iter()
        .zip(stems)
        .map(|(input, stem)| {
            let out = if args.inputs.len() == 1 {
                args.out.clone()
            } else {
                args.out.join(format!("{stem}.segments"))
            };
            (input.clone(), out, stem)
        })
        .collect();
    let counts = par_map(&targets, args.jobs, |(input, out, stem)| one(input, out, stem, args, cfg))?;
    let total: usize = counts.iter().sum();
    tracing::info!(recordings = targets.len(), segments = total, "vad done");
    Ok(())
}

fn one(input: &Path, out: &Path, stem: &str, args: &VadArgs, cfg: &PipelineConfig) -> Result<usize, CliError> {
    let audio = read_wav(input).input_err(input.display())?;
    let all = segment_recording(&audio, &cfg.vad).input_err(input.display())?;
    let kept: Vec<(usize, _)> = if args.speech_only {
        let speech = filter_speech(&all);
        all.iter().copied().enumerate().filter(|(_, s)| speech.contains(s)).collect()
    } else {
        all.iter().copied().enumerate().collect()
    };
    let segments: Vec<_> = kept.iter().map(|(_, s)| *s).collect();
    write_file(out, format_segments(&segments))?;

    if let Some(dir) = &args.cut_dir {
        let clips = cut_audio(&audio, &segments).runtime_err(input.display())?;
        for ((index, _), clip) in kept.iter().zip(clips) {
            let clip = if clip.sample_rate() == cfg.sample_rate {
                clip
            } else {
                resample(&clip, cfg.sample_rate).runtime_err(input.display())?
            };
            let path = dir.join(format!("{stem}_{index:04}.wav"));
            std::fs::create_dir_all(dir).runtime_err(dir.display())?;
            write_wav(&clip, &path).runtime_err(path.display())?;
        }
    }
    let speech = segments.iter().filter(|s| s.label == SegmentLabel::Speech).count();
    tracing::info!(input = %input.display(), segments = segments.len(), speech, "segmented");
    Ok(segments.len())
}
