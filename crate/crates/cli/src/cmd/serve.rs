use std::path::PathBuf;
use std::sync::Arc;

use clap::Args;
use fooctts_serve::{http, BackendKind, Gateway};

use crate::config::PipelineConfig;
use crate::error::{CliError, Tag};

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub host: Option<String>,
    #[arg(long)]
    pub port: Option<u16>,
    /// `stub` or `remote`.
    #[arg(long)]
    pub backend: Option<BackendKind>,
    /// Return backend audio without crowd noise.
    #[arg(long)]
    pub no_noise: bool,
    /// Directory with the web client's `index.html`.
    #[arg(long)]
    pub webui_dir: Option<PathBuf>,
}

pub fn run(args: &ServeArgs, cfg: &PipelineConfig) -> Result<(), CliError> {
    let mut serve = cfg.serve.clone();
    if let Some(h) = &args.host {
        serve.host = h.clone();
    }
    if let Some(p) = args.port {
        serve.port = p;
    }
    if let Some(b) = args.backend {
        serve.backend.kind = b;
    }
    if args.no_noise {
        serve.noise.enabled = false;
    }
    if let Some(d) = &args.webui_dir {
        serve.webui_dir = Some(d.clone());
    }
    let gateway = Arc::new(Gateway::new(serve).input_err("gateway config")?);
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .runtime_err("tokio runtime")?;
    runtime.block_on(http::run(gateway)).runtime_err("gateway")
}
