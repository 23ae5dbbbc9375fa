//! Transcript text handling: normalization, script-aware tokenization,
//! Latin→Arabic transliteration and vowelization (diacritization) through a
//! remote service.

mod normalize;
mod tokenize;
mod translit;
mod vowelize;

pub use normalize::normalize;
pub use tokenize::{tokenize, Token, TokenScript};
pub use translit::{transliterate, transliterate_text, TranslitTable, TranslitWarning, Transliteration};
pub use vowelize::{Vowelized, VowelizedSource, Vowelizer, VowelizerConfig, VowelizerError, VowelizerMode};

pub const FATHA: char = '\u{064E}';

#[derive(Debug, thiserror::Error)]
pub enum TextError {
    #[error("token {0:?} is not a Latin-script token")]
    NotLatinToken(String),
    #[error("transliteration table line {line}: {reason}")]
    BadTable { line: usize, reason: String },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Arabic harakat, tanwin, shadda and sukun (U+064B–U+0652).
pub fn is_diacritic(c: char) -> bool {
    ('\u{064B}'..='\u{0652}').contains(&c)
}

pub fn strip_diacritics(text: &str) -> String {
    text.chars().filter(|&c| !is_diacritic(c)).collect()
}
