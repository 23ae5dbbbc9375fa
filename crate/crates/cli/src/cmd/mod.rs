pub mod align;
pub mod build;
pub mod serve;
pub mod text;
pub mod vad;

use std::path::Path;

use rayon::prelude::*;

use crate::error::{CliError, Tag};

/// Runs `f` over `items` on `jobs` threads (all cores when `None`) and
/// returns results in input order.
pub fn par_map<T: Sync, R: Send>(
    items: &[T],
    jobs: Option<usize>,
    f: impl Fn(&T) -> Result<R, CliError> + Sync + Send,
) -> Result<Vec<R>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .runtime_err("thread pool")?;
    pool.install(|| items.par_iter().map(f).collect())
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).runtime_err(format!("creating {}", parent.display()))?;
    }
    std::fs::write(path, contents).runtime_err(format!("writing {}", path.display()))
}

pub fn file_stem(path: &Path) -> Result<String, CliError> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_string)
        .ok_or_else(|| CliError::Input(format!("{}: cannot derive a name from this path", path.display())))
}
