use std::path::PathBuf;

use clap::Args;
use fooctts_core::corpus::{format_records_tsv, parse_records_tsv, DEFAULT_SPEAKER_ID};
use fooctts_core::text::{normalize, transliterate_text, TranslitTable, TranslitWarning, VowelizerMode};
use fooctts_core::Vowelizer;

use super::{par_map, write_file};
use crate::config::PipelineConfig;
use crate::error::{CliError, Tag};

#[derive(Debug, Args)]
pub struct TextArgs {
    /// UTF-8 text, one utterance per line (or a records TSV with
    /// `--records`).
    pub input: PathBuf,
    pub output: PathBuf,
    /// Replace Latin-script tokens with Arabic spellings.
    #[arg(long)]
    pub transliterate: bool,
    /// Add diacritics through the configured diacritizer.
    #[arg(long)]
    pub vowelize: bool,
    /// Skip the diacritizer and pass text through unchanged.
    #[arg(long)]
    pub offline: bool,
    /// Diacritizer URL (overrides the config).
    #[arg(long)]
    pub endpoint: Option<String>,
    /// Fail instead of passing text through when the diacritizer fails.
    #[arg(long)]
    pub strict: bool,
    /// Transliteration table TSV (default: the bundled table).
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Treat input and output as records TSVs: `text_raw` is normalized
    /// (and transliterated), `text_vowelized` is filled from it.
    #[arg(long)]
    pub records: bool,
}

struct Processor {
    table: Option<TranslitTable>,
    vowelizer: Option<Vowelizer>,
    strict: bool,
}

impl Processor {
    /// Returns (raw after normalize/transliterate, vowelized).
    fn line(&self, line: &str) -> Result<(String, String), CliError> {
        let mut raw = normalize(line);
        if let Some(table) = &self.table {
            let out = transliterate_text(&raw, table);
            for w in &out.warnings {
                match w {
                    TranslitWarning::Unmapped { ch, .. } => tracing::warn!(%ch, line, "no Arabic spelling for character"),
                    TranslitWarning::EmptyToken => {}
                }
            }
            raw = normalize(&out.arabic);
        }
        let vowelized = match &self.vowelizer {
            None => raw.clone(),
            Some(v) if self.strict => v.vowelize(&raw).runtime_err("diacritizer")?.text,
            Some(v) => v.vowelize_or_passthrough(&raw).0,
        };
        Ok((raw, vowelized))
    }
}

pub fn run(args: &TextArgs, cfg: &PipelineConfig) -> Result<(), CliError> {
    let table = match (&args.table, args.transliterate) {
        (Some(p), _) => Some(TranslitTable::load(p).input_err(p.display())?),
        (None, true) => Some(TranslitTable::bundled()),
        (None, false) => None,
    };
    let vowelizer = args.vowelize.then(|| {
        let mut v = cfg.vowelizer.clone();
        if args.offline {
            v.mode = VowelizerMode::OfflinePassthrough;
        }
        if let Some(e) = &args.endpoint {
            v.endpoint = e.clone();
            v.mode = VowelizerMode::Remote;
        }
        v
    });
    let jobs = vowelizer.as_ref().map(|v| v.max_in_flight);
    let proc = Processor {
        table,
        vowelizer: vowelizer.map(Vowelizer::new),
        strict: args.strict,
    };

    let text = std::fs::read_to_string(&args.input).input_err(args.input.display())?;
    let output = if args.records {
        let mut records = parse_records_tsv(&text, DEFAULT_SPEAKER_ID).input_err(args.input.display())?;
        let done = par_map(&records, jobs, |r| proc.line(&r.text_raw))?;
        for (r, (raw, vowelized)) in records.iter_mut().zip(done) {
            r.text_raw = raw;
            r.text_vowelized = vowelized;
        }
        format_records_tsv(&records)
    } else {
        let lines: Vec<&str> = text.lines().collect();
        let done = par_map(&lines, jobs, |l| proc.line(l))?;
        let which = |(raw, vowelized): (String, String)| if proc.vowelizer.is_some() { vowelized } else { raw };
        done.into_iter().map(|p| which(p) + "\n").collect()
    };
    write_file(&args.output, output)?;
    tracing::info!(output = %args.output.display(), "text done");
    Ok(())
}
