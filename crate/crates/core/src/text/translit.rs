use std::collections::HashMap;
use std::path::Path;

use serde::Serialize;

use super::tokenize::{tokenize, Token, TokenScript};
use super::TextError;

const BUNDLED_TABLE: &str = include_str!("../../data/translit_latin_arabic.tsv");

/// Greedy longest-match Latin→Arabic mapping loaded from a TSV data file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslitTable {
    version: Option<u32>,
    entries: HashMap<String, String>,
    longest_key: usize,
}

fn is_arabic_letter(c: char) -> bool {
    matches!(c as u32, 0x0621..=0x063A | 0x0641..=0x064A | 0x0671..=0x06D3)
}

impl TranslitTable {
    /// The table shipped in `data/translit_latin_arabic.tsv`.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_TABLE).expect("bundled transliteration table is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TextError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| TextError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, TextError> {
        let mut version = None;
        let mut entries = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let bad = |reason: String| TextError::BadTable { line, reason };
            let trimmed = raw.trim();
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("version:") {
                    version = Some(v.trim().parse().map_err(|e| bad(format!("version: {e}")))?);
                }
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
            let (latin, arabic) = raw
                .split_once('\t')
                .ok_or_else(|| bad("expected <latin>\\t<arabic>".into()))?;
            let (latin, arabic) = (latin.trim(), arabic.trim());
            if latin.is_empty() || latin.to_lowercase() != latin {
                return Err(bad(format!("key {latin:?} must be non-empty lowercase")));
            }
            if arabic.is_empty() || !arabic.chars().all(is_arabic_letter) {
                return Err(bad(format!("value {arabic:?} must be Arabic letters only")));
            }
            if entries.insert(latin.to_string(), arabic.to_string()).is_some() {
                return Err(bad(format!("duplicate key {latin:?}")));
            }
        }
        let longest_key = entries.keys().map(|k| k.chars().count()).max().unwrap_or(0);
        Ok(Self {
            version,
            entries,
            longest_key,
        })
    }

    pub fn version(&self) -> Option<u32> {
        self.version
    }

    pub fn get(&self, latin: &str) -> Option<&str> {
        self.entries.get(latin).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TranslitWarning {
    EmptyToken,
    /// A character with no table entry was dropped.
    Unmapped { ch: char, index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transliteration {
    pub arabic: String,
    pub warnings: Vec<TranslitWarning>,
}

/// Maps a Latin token to Arabic letters. Characters without an entry are
/// dropped and reported.
pub fn transliterate(token: &Token, table: &TranslitTable) -> Result<Transliteration, TextError> {
    if token.script != TokenScript::Latin {
        return Err(TextError::NotLatinToken(token.text.clone()));
    }
    let chars: Vec<char> = token.text.to_lowercase().chars().collect();
    let mut out = Transliteration {
        arabic: String::new(),
        warnings: Vec::new(),
    };
    if chars.is_empty() {
        tracing::warn!("empty Latin token");
        out.warnings.push(TranslitWarning::EmptyToken);
        return Ok(out);
    }

    let mut i = 0;
    let mut key = String::new();
    while i < chars.len() {
        let matched = (1..=table.longest_key.min(chars.len() - i)).rev().find_map(|len| {
            key.clear();
            key.extend(&chars[i..i + len]);
            table.get(&key).map(|v| (len, v))
        });
        match matched {
            Some((len, arabic)) => {
                out.arabic.push_str(arabic);
                i += len;
            }
            None => {
                tracing::warn!(ch = %chars[i], token = %token.text, "no transliteration for character");
                out.warnings.push(TranslitWarning::Unmapped { ch: chars[i], index: i });
                i += 1;
            }
        }
    }
    Ok(out)
}

/// Replaces every Latin token of `text` with its transliteration and leaves
/// everything else byte-for-byte in place.
pub fn transliterate_text(text: &str, table: &TranslitTable) -> Transliteration {
    let mut out = Transliteration {
        arabic: String::with_capacity(text.len()),
        warnings: Vec::new(),
    };
    let mut cursor = 0;
    for token in tokenize(text).into_iter().filter(|t| t.script == TokenScript::Latin) {
        out.arabic.push_str(&text[cursor..token.span.start]);
        let t = transliterate(&token, table).expect("filtered to Latin tokens");
        out.arabic.push_str(&t.arabic);
        out.warnings.extend(t.warnings);
        cursor = token.span.end;
    }
    out.arabic.push_str(&text[cursor..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn latin(s: &str) -> Token {
        Token {
            text: s.to_string(),
            script: TokenScript::Latin,
            span: 0..s.len(),
        }
    }

    #[test]
    fn bundled_table_loads() {
        let t = TranslitTable::bundled();
        assert_eq!(t.version(), Some(1));
        assert_eq!(t.get("b"), Some("ب"));
        assert_eq!(t.get("ch"), Some("ش"));
    }

    #[test]
    fn single_letter() {
        let t = transliterate(&latin("b"), &TranslitTable::bundled()).unwrap();
        assert_eq!(t.arabic, "ب");
        assert!(t.warnings.is_empty());
    }

    #[test]
    fn digraphs_win() {
        let table = TranslitTable::bundled();
        assert_eq!(transliterate(&latin("Chouchou"), &table).unwrap().arabic, "شوشو");
        assert_eq!(transliterate(&latin("Khazri"), &table).unwrap().arabic, "خازري");
        assert_eq!(transliterate(&latin("Msakni"), &table).unwrap().arabic, "مساكني");
    }

    #[test]
    fn empty_token_warns() {
        let t = transliterate(&latin(""), &TranslitTable::bundled()).unwrap();
        assert_eq!(t.arabic, "");
        assert_eq!(t.warnings, vec![TranslitWarning::EmptyToken]);
    }

    #[test]
    fn unmapped_dropped_with_warning() {
        let table = TranslitTable::parse("a\tا\n").unwrap();
        let t = transliterate(&latin("abá"), &table).unwrap();
        assert_eq!(t.arabic, "ا");
        assert_eq!(t.warnings.len(), 2);
    }

    #[test]
    fn non_latin_rejected() {
        let tok = Token {
            text: "هدف".into(),
            script: TokenScript::Arabic,
            span: 0..6,
        };
        assert!(matches!(transliterate(&tok, &TranslitTable::bundled()), Err(TextError::NotLatinToken(_))));
    }

    #[test]
    fn table_validation() {
        assert!(TranslitTable::parse("A\tا\n").is_err());
        assert!(TranslitTable::parse("a\tabc\n").is_err());
        assert!(TranslitTable::parse("a\tا\na\tب\n").is_err());
        assert!(TranslitTable::parse("no tab here\n").is_err());
        // Tatweel is not a letter.
        assert!(TranslitTable::parse("a\tـ\n").is_err());
    }

    #[test]
    fn text_keeps_non_latin() {
        let t = transliterate_text("هدف de Messi !", &TranslitTable::bundled());
        assert_eq!(t.arabic, "هدف دي ميسي !");
    }

    proptest! {
        #[test]
        fn output_is_arabic_only(s in "[a-zA-Z]{0,24}") {
            let re = regex::Regex::new(r"^[\p{Arabic}]*$").unwrap();
            let t = transliterate(&latin(&s), &TranslitTable::bundled()).unwrap();
            prop_assert!(re.is_match(&t.arabic), "{:?} -> {:?}", s, t.arabic);
        }
    }
}
