//! Exhaustive reference for the alignment trellis. Enumerates every
//! monotone state path, scores it with the same left-to-right float
//! summation the trellis uses, and picks the winner under the trellis tie
//! rule: among equal scores, the path whose states read from the last frame
//! backwards are lexicographically largest (stay beats advance).

#![allow(dead_code)]

use fooctts_core::align::{LogPosteriorMatrix, StayMode};

#[derive(Debug, Clone, PartialEq)]
pub struct OraclePath {
    pub score: f64,
    pub states: Vec<usize>,
    pub symbols: Vec<usize>,
}

fn frame_symbol(m: &LogPosteriorMatrix, tokens: &[usize], mode: StayMode, t: usize, prev: Option<usize>, j: usize) -> usize {
    let blank = m.vocab().blank_index();
    let entered = match prev {
        None => j == 1,
        Some(p) => j == p + 1,
    };
    if j == 0 {
        blank
    } else if entered {
        tokens[j - 1]
    } else {
        match mode {
            StayMode::BlankOnly => blank,
            StayMode::BlankOrRepeat => {
                let tok = tokens[j - 1];
                if m.get(t, blank) >= m.get(t, tok) {
                    blank
                } else {
                    tok
                }
            }
        }
    }
}

fn better(candidate: &OraclePath, best: &OraclePath) -> bool {
    if candidate.score != best.score {
        return candidate.score > best.score;
    }
    candidate.states.iter().rev().cmp(best.states.iter().rev()) == std::cmp::Ordering::Greater
}

/// Best path, or `None` when no path consumes every token.
pub fn brute_force(m: &LogPosteriorMatrix, tokens: &[usize], mode: StayMode) -> Option<OraclePath> {
    let frames = m.frames();
    let n = tokens.len();
    if n == 0 || n > frames {
        return None;
    }
    let mut best: Option<OraclePath> = None;
    // Bit t of `steps` says whether frame t advances. Frame 0 advances
    // iff it lands in state 1.
    for steps in 0u32..(1 << frames) {
        if steps.count_ones() as usize != n {
            continue;
        }
        let mut states = Vec::with_capacity(frames);
        let mut symbols = Vec::with_capacity(frames);
        let mut score = 0.0f64;
        let mut j = 0usize;
        for t in 0..frames {
            let prev = (t > 0).then_some(j);
            if steps & (1 << t) != 0 {
                j += 1;
            }
            let s = frame_symbol(m, tokens, mode, t, prev, j);
            score = if t == 0 { m.get(t, s) } else { score + m.get(t, s) };
            states.push(j);
            symbols.push(s);
        }
        let cand = OraclePath { score, states, symbols };
        if best.as_ref().is_none_or(|b| better(&cand, b)) {
            best = Some(cand);
        }
    }
    best
}

/// `(start_frame, end_frame)` per utterance, read off an oracle path the
/// way spans are defined: first frame in the first token's state to the
/// last non-blank frame in the last token's state.
pub fn spans(path: &OraclePath, lengths: &[usize], blank: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut consumed = 0;
    for &len in lengths {
        let first = consumed + 1;
        let last = consumed + len;
        consumed = last;
        let start = path.states.iter().position(|&s| s == first).unwrap();
        let end = (0..path.states.len())
            .rfind(|&t| path.states[t] == last && path.symbols[t] != blank)
            .unwrap();
        out.push((start, end));
    }
    out
}
