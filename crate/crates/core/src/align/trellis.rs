use super::{AlignConfig, AlignError, AlignedUtterance, LogPosteriorMatrix, StayMode};

/// Best path through the stay/advance trellis.
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    /// `D[T-1][N]`: total log-score of the best path.
    pub score: f64,
    /// Tokens consumed after each frame, in `0..=N`. Non-decreasing, steps of
    /// at most one, ends at N.
    pub states: Vec<usize>,
    /// Class credited to each frame (a token, a repeat, or blank).
    pub symbols: Vec<usize>,
    /// Log-posterior of `symbols[t]` at frame `t`.
    pub frame_scores: Vec<f64>,
}

/// Backpointers, one bit per (frame, state): set when the state was entered
/// by consuming a token at that frame.
struct AdvanceBits {
    width: usize,
    words: Vec<u64>,
}

impl AdvanceBits {
    fn new(frames: usize, width: usize) -> Self {
        Self {
            width,
            words: vec![0; (frames * width).div_ceil(64)],
        }
    }

    fn set(&mut self, t: usize, j: usize) {
        let i = t * self.width + j;
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, t: usize, j: usize) -> bool {
        let i = t * self.width + j;
        self.words[i / 64] & (1 << (i % 64)) != 0
    }
}

/// Viterbi over states `j = 0..=N` (tokens consumed):
///
/// ```text
/// D[t][j] = max( D[t-1][j]   + stay(t, j),
///                D[t-1][j-1] + log p(token_j | t) )
/// stay(t, 0) = log p(blank | t)
/// stay(t, j) = log p(blank | t)                          (BlankOnly)
///            = max(log p(blank | t), log p(token_j | t))  (BlankOrRepeat)
/// D[0][0] = log p(blank | 0),  D[0][1] = log p(token_1 | 0)
/// ```
///
/// Ties go to the stay branch. Backtracking therefore keeps a token's state
/// for as long as the optimum allows, which places token onsets at the
/// earliest optimal frame.
pub fn viterbi(matrix: &LogPosteriorMatrix, tokens: &[usize], stay_mode: StayMode) -> Result<Alignment, AlignError> {
    let n = tokens.len();
    let frames = matrix.frames();
    if n == 0 {
        return Err(AlignError::Empty);
    }
    if let Some(&bad) = tokens.iter().find(|&&id| id >= matrix.classes()) {
        return Err(AlignError::TokenOutOfVocab {
            token: format!("#{bad}"),
        });
    }
    if n > frames {
        return Err(AlignError::InfeasibleAlignment { tokens: n, frames });
    }
    let blank = matrix.vocab().blank_index();
    let stay = |t: usize, j: usize| -> f64 {
        let b = matrix.get(t, blank);
        match (j, stay_mode) {
            (0, _) | (_, StayMode::BlankOnly) => b,
            (_, StayMode::BlankOrRepeat) => b.max(matrix.get(t, tokens[j - 1])),
        }
    };

    let mut prev = vec![f64::NEG_INFINITY; n + 1];
    let mut cur = vec![f64::NEG_INFINITY; n + 1];
    let mut advanced = AdvanceBits::new(frames, n + 1);
    prev[0] = matrix.get(0, blank);
    prev[1] = matrix.get(0, tokens[0]);
    advanced.set(0, 1);

    for t in 1..frames {
        let reach = n.min(t + 1);
        // No path can still reach N from below this state.
        let floor = n.saturating_sub(frames - 1 - t);
        cur.iter_mut().for_each(|v| *v = f64::NEG_INFINITY);
        for j in floor..=reach {
            let stay_score = prev[j] + stay(t, j);
            let advance_score = if j > 0 {
                prev[j - 1] + matrix.get(t, tokens[j - 1])
            } else {
                f64::NEG_INFINITY
            };
            if advance_score > stay_score {
                cur[j] = advance_score;
                advanced.set(t, j);
            } else {
                cur[j] = stay_score;
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }

    let score = prev[n];
    if score == f64::NEG_INFINITY {
        return Err(AlignError::InfeasibleAlignment { tokens: n, frames });
    }

    let mut states = vec![0; frames];
    let mut j = n;
    for t in (0..frames).rev() {
        states[t] = j;
        if advanced.get(t, j) {
            j -= 1;
        }
    }
    debug_assert_eq!(j, 0);

    let mut symbols = Vec::with_capacity(frames);
    let mut frame_scores = Vec::with_capacity(frames);
    for (t, &j) in states.iter().enumerate() {
        let entered = advanced.get(t, j);
        let symbol = if j == 0 {
            blank
        } else if entered {
            tokens[j - 1]
        } else {
            match stay_mode {
                StayMode::BlankOnly => blank,
                StayMode::BlankOrRepeat => {
                    let tok = tokens[j - 1];
                    if matrix.get(t, blank) >= matrix.get(t, tok) {
                        blank
                    } else {
                        tok
                    }
                }
            }
        };
        symbols.push(symbol);
        frame_scores.push(matrix.get(t, symbol));
    }

    Ok(Alignment {
        score,
        states,
        symbols,
        frame_scores,
    })
}

/// Aligns consecutive utterances of one recording and cuts the best path
/// into per-utterance spans.
///
/// An utterance starts at the frame that consumes its first token and ends
/// at the last frame still crediting its last token (trailing blanks go to
/// the gap). Its score is the minimum, over windows of `cfg.window` frames
/// inside the span, of the mean aligned log-posterior.
pub fn align(
    matrix: &LogPosteriorMatrix,
    utterances: &[Vec<usize>],
    cfg: &AlignConfig,
) -> Result<Vec<AlignedUtterance>, AlignError> {
    if utterances.is_empty() {
        return Err(AlignError::Empty);
    }
    if let Some(index) = utterances.iter().position(|u| u.is_empty()) {
        return Err(AlignError::EmptyUtterance { index });
    }
    let tokens: Vec<usize> = utterances.iter().flatten().copied().collect();
    let path = viterbi(matrix, &tokens, cfg.stay)?;
    let blank = matrix.vocab().blank_index();
    let fd = matrix.frame_duration_s();

    let mut out = Vec::with_capacity(utterances.len());
    let mut consumed = 0;
    for (utterance_index, utt) in utterances.iter().enumerate() {
        let first_state = consumed + 1;
        let last_state = consumed + utt.len();
        consumed = last_state;

        let start_frame = path
            .states
            .iter()
            .position(|&s| s == first_state)
            .expect("every state on a complete path is visited");
        let end_frame = (start_frame..path.states.len())
            .take_while(|&t| path.states[t] <= last_state)
            .filter(|&t| path.states[t] == last_state && path.symbols[t] != blank)
            .last()
            .expect("the entry frame of the last token credits that token");

        out.push(AlignedUtterance {
            utterance_index,
            token_ids: utt.clone(),
            start_frame,
            end_frame,
            start_s: start_frame as f64 * fd,
            end_s: (end_frame + 1) as f64 * fd,
            score: min_window_mean(&path.frame_scores[start_frame..=end_frame], cfg.window),
            frame_path: path.symbols[start_frame..=end_frame].to_vec(),
        });
    }
    Ok(out)
}

fn min_window_mean(scores: &[f64], window: usize) -> f64 {
    let w = window.clamp(1, scores.len());
    scores
        .windows(w)
        .map(|win| win.iter().sum::<f64>() / w as f64)
        .fold(f64::INFINITY, f64::min)
}

/// Drops utterances scoring below `min_score`; indices are kept.
pub fn filter_by_score(aligned: Vec<AlignedUtterance>, min_score: Option<f64>) -> Vec<AlignedUtterance> {
    match min_score {
        None => aligned,
        Some(min) => aligned.into_iter().filter(|u| u.score >= min).collect(),
    }
}

/// Kaldi `segments` lines: `<rec>_<index:04> <rec> <start> <end>`.
pub fn emit_segments(aligned: &[AlignedUtterance], recording_id: &str) -> Result<String, AlignError> {
    if aligned.is_empty() {
        return Err(AlignError::Empty);
    }
    Ok(aligned
        .iter()
        .map(|u| {
            format!(
                "{recording_id}_{:04} {recording_id} {:.3} {:.3}\n",
                u.utterance_index, u.start_s, u.end_s
            )
        })
        .collect())
}
