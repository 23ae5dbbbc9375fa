//! `fooctts`: corpus building stages and the synthesis gateway.
//!
//! ```text
//! fooctts vad     recording.wav -o recording.segments --speech-only
//! fooctts align   chunk.ctcp chunk.txt chunk.segments --records chunk.tsv
//! fooctts text    chunk.tsv chunk.vowelized.tsv --records --transliterate --vowelize
//! fooctts build   records.tsv audio/ data/ --labels labels.tsv
//! fooctts serve   --port 8080
//! ```

mod cmd;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tracing_subscriber::EnvFilter;

use config::PipelineConfig;
use error::{CliError, Tag};

#[derive(Debug, Parser)]
#[command(name = "fooctts", version, about = "Commentator TTS corpus builder and synthesis gateway")]
struct Cli {
    /// JSON pipeline config. Missing keys take defaults; unknown keys are
    /// rejected.
    #[arg(long, global = true, env = "FOOCTTS_CONFIG")]
    config: Option<PathBuf>,
    /// More log output (repeat for trace).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Only warnings and errors.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label recordings as speech / noise / music / noEnergy.
    Vad(cmd::vad::VadArgs),
    /// Force-align transcripts against CTC posteriors.
    Align(cmd::align::AlignArgs),
    /// Normalize, transliterate and vowelize text.
    Text(cmd::text::TextArgs),
    /// Label, split and write Kaldi-style manifests.
    Build(cmd::build::BuildArgs),
    /// Run the synthesis gateway.
    Serve(cmd::serve::ServeArgs),
    /// Print the effective configuration as JSON.
    Config,
}

fn init_logging(verbose: u8, quiet: bool) {
    let level = match (quiet, verbose) {
        (true, _) => "warn",
        (false, 0) => "info",
        (false, 1) => "debug",
        _ => "trace",
    };
    let filter = EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new(level));
    tracing_subscriber::fmt().with_env_filter(filter).with_writer(std::io::stderr).with_target(false).init();
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = PipelineConfig::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Vad(a) => cmd::vad::run(a, &cfg),
        Command::Align(a) => cmd::align::run(a, &cfg),
        Command::Text(a) => cmd::text::run(a, &cfg),
        Command::Build(a) => cmd::build::run(a, &cfg),
        Command::Serve(a) => cmd::serve::run(a, &cfg),
        Command::Config => {
            println!("{}", serde_json::to_string_pretty(&cfg).runtime_err("config")?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.verbose, cli.quiet);
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            tracing::error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
