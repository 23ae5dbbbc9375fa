use std::ops::Range;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TokenScript {
    Arabic,
    Latin,
    Digit,
    Punct,
    Other,
}

impl TokenScript {
    pub fn of(c: char) -> Self {
        let u = c as u32;
        if c.is_ascii_digit() || (0x0660..=0x0669).contains(&u) || (0x06F0..=0x06F9).contains(&u) {
            Self::Digit
        } else if c.is_ascii_punctuation()
            || matches!(u, 0x060C | 0x061B | 0x061F | 0x066A..=0x066D | 0x06D4)
            || matches!(u, 0x00A1 | 0x00AB | 0x00BB | 0x00BF | 0x2010..=0x2027)
        {
            Self::Punct
        } else if matches!(u, 0x0600..=0x06FF | 0x0750..=0x077F | 0x08A0..=0x08FF | 0xFB50..=0xFDFF | 0xFE70..=0xFEFF) {
            Self::Arabic
        } else if c.is_ascii_alphabetic()
            || (matches!(u, 0x00C0..=0x024F) && u != 0x00D7 && u != 0x00F7)
        {
            Self::Latin
        } else {
            Self::Other
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub text: String,
    pub script: TokenScript,
    /// Byte range in the source string.
    pub span: Range<usize>,
}

/// Splits on whitespace, then into maximal runs of one script. The input is
/// recovered by placing each token's text at its span and keeping the
/// original bytes in between.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens: Vec<Token> = Vec::new();
    let mut open: Option<(usize, TokenScript)> = None;
    let close = |start: usize, end: usize, script: TokenScript, tokens: &mut Vec<Token>| {
        tokens.push(Token {
            text: text[start..end].to_string(),
            script,
            span: start..end,
        });
    };
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some((start, script)) = open.take() {
                close(start, i, script, &mut tokens);
            }
            continue;
        }
        let script = TokenScript::of(c);
        match open {
            Some((_, s)) if s == script => {}
            Some((start, s)) => {
                close(start, i, s, &mut tokens);
                open = Some((i, script));
            }
            None => open = Some((i, script)),
        }
    }
    if let Some((start, script)) = open {
        close(start, text.len(), script, &mut tokens);
    }
    tokens
}
