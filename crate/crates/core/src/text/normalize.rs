const TATWEEL: char = '\u{0640}';

/// Drops tatweel, collapses whitespace runs to one space and trims.
/// Idempotent.
pub fn normalize(text: &str) -> String {
    text.split(|c: char| c.is_whitespace())
        .map(|w| w.chars().filter(|&c| c != TATWEEL).collect::<String>())
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}
