#[path = "support/ctc_oracle.rs"]
mod ctc_oracle;

use ctc_oracle::{brute_force, spans};
use fooctts_core::align::{
    align, decode_ctcp, encode_ctcp, load_posteriors, save_posteriors, viterbi, AlignConfig, AlignError,
    LogPosteriorMatrix, StayMode, Vocabulary,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn vocab(classes: usize) -> Vocabulary {
    let mut tokens = vec!["<blank>".to_string()];
    tokens.extend((1..classes).map(|i| char::from(b'a' + i as u8 - 1).to_string()));
    Vocabulary::new(tokens).unwrap()
}

/// Rows drawn as normalized random distributions. With `coarse`, weights
/// come from {1, 2, 3} so equal-score paths are common.
fn random_matrix(rng: &mut ChaCha8Rng, frames: usize, classes: usize, coarse: bool) -> LogPosteriorMatrix {
    let mut data = Vec::with_capacity(frames * classes);
    for _ in 0..frames {
        let w: Vec<f64> = (0..classes)
            .map(|_| if coarse { rng.gen_range(1..=3) as f64 } else { rng.gen_range(1e-3..1.0) })
            .collect();
        let total: f64 = w.iter().sum();
        data.extend(w.iter().map(|x| (x / total).ln()));
    }
    LogPosteriorMatrix::new(data, frames, 0.02, vocab(classes)).unwrap()
}

fn random_instance(rng: &mut ChaCha8Rng, coarse: bool) -> (LogPosteriorMatrix, Vec<Vec<usize>>) {
    let frames = rng.gen_range(1..=8);
    let classes = rng.gen_range(2..=4);
    let n = rng.gen_range(1..=3.min(frames));
    let tokens: Vec<usize> = (0..n).map(|_| rng.gen_range(1..classes)).collect();
    let mut utts = vec![vec![tokens[0]]];
    for &tok in &tokens[1..] {
        if rng.gen_bool(0.5) {
            utts.push(vec![tok]);
        } else {
            utts.last_mut().unwrap().push(tok);
        }
    }
    (random_matrix(rng, frames, classes, coarse), utts)
}

#[test]
fn matches_exhaustive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..400 {
        let (m, utts) = random_instance(&mut rng, case % 2 == 1);
        let tokens: Vec<usize> = utts.iter().flatten().copied().collect();
        for mode in [StayMode::BlankOrRepeat, StayMode::BlankOnly] {
            let oracle = brute_force(&m, &tokens, mode).unwrap();
            let path = viterbi(&m, &tokens, mode).unwrap();
            assert!((path.score - oracle.score).abs() < 1e-9, "case {case}: {} vs {}", path.score, oracle.score);
            assert_eq!(path.states, oracle.states, "case {case} {mode:?}");
            assert_eq!(path.symbols, oracle.symbols, "case {case} {mode:?}");

            let cfg = AlignConfig { stay: mode, ..AlignConfig::default() };
            let aligned = align(&m, &utts, &cfg).unwrap();
            let lengths: Vec<usize> = utts.iter().map(Vec::len).collect();
            let expected = spans(&oracle, &lengths, m.vocab().blank_index());
            let got: Vec<(usize, usize)> = aligned.iter().map(|u| (u.start_frame, u.end_frame)).collect();
            assert_eq!(got, expected, "case {case} {mode:?}");
        }
    }
}

#[test]
fn path_survives_per_frame_shifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let frames = rng.gen_range(4..=40);
        let classes = rng.gen_range(2..=6);
        let m = random_matrix(&mut rng, frames, classes, false);
        let n = rng.gen_range(1..=frames.min(6));
        let tokens: Vec<usize> = (0..n).map(|_| rng.gen_range(1..classes)).collect();
        let shift: Vec<f64> = (0..frames).map(|_| rng.gen_range(-5.0..0.0)).collect();
        let a = viterbi(&m, &tokens, StayMode::BlankOrRepeat).unwrap();
        let b = viterbi(&m.shifted(&shift), &tokens, StayMode::BlankOrRepeat).unwrap();
        assert_eq!(a.states, b.states);
        assert!((b.score - a.score - shift.iter().sum::<f64>()).abs() < 1e-9);
    }
}

#[test]
fn spans_tile_in_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let m = random_matrix(&mut rng, 200, 8, false);
        let utts: Vec<Vec<usize>> = (0..rng.gen_range(1..8))
            .map(|_| (0..rng.gen_range(1..6)).map(|_| rng.gen_range(1..8)).collect())
            .collect();
        let aligned = align(&m, &utts, &AlignConfig::default()).unwrap();
        assert_eq!(aligned.len(), utts.len());
        for pair in aligned.windows(2) {
            assert!(pair[0].end_frame < pair[1].start_frame);
        }
        for u in &aligned {
            assert!(u.start_frame <= u.end_frame && u.end_frame < m.frames());
            assert!(u.score <= 0.0);
            assert_eq!(u.frame_path.len(), u.end_frame - u.start_frame + 1);
        }
    }
}

#[test]
fn peaked_posteriors_recover_planted_onsets() {
    // Tokens a, b, c planted at frames 3, 9, 15 over blank elsewhere.
    let frames = 20;
    let planted = [(3usize, 1usize), (9, 2), (15, 3)];
    let mut data = Vec::new();
    for t in 0..frames {
        let hot = planted.iter().find(|(f, _)| *f == t).map(|p| p.1).unwrap_or(0);
        data.extend((0..4).map(|c| if c == hot { 0.97f64.ln() } else { 0.01f64.ln() }));
    }
    let m = LogPosteriorMatrix::new(data, frames, 0.04, vocab(4)).unwrap();
    let aligned = align(&m, &[vec![1], vec![2, 3]], &AlignConfig::default()).unwrap();
    assert_eq!((aligned[0].start_frame, aligned[0].end_frame), (3, 3));
    assert_eq!((aligned[1].start_frame, aligned[1].end_frame), (9, 15));
    assert!((aligned[1].start_s - 0.36).abs() < 1e-12);
    assert!((aligned[1].end_s - 0.64).abs() < 1e-12);
}

#[test]
fn infeasible_when_tokens_outnumber_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let m = random_matrix(&mut rng, 3, 3, false);
    assert!(matches!(
        align(&m, &[vec![1, 2, 1, 2]], &AlignConfig::default()),
        Err(AlignError::InfeasibleAlignment { tokens: 4, frames: 3 })
    ));
}

#[test]
fn ctcp_round_trip_through_disk() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let wide = random_matrix(&mut rng, 17, 5, false);
    // The file stores f32, so compare against an f32-exact matrix.
    let narrow = wide.values().iter().map(|&v| v as f32 as f64).collect();
    let m = LogPosteriorMatrix::new(narrow, 17, 0.02, vocab(5)).unwrap();
    assert_eq!(decode_ctcp(&encode_ctcp(&m), vocab(5)).unwrap(), m);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("match.ctcp");
    save_posteriors(&m, &path).unwrap();
    assert!(dir.path().join("match.vocab.json").exists());
    assert_eq!(load_posteriors(&path).unwrap(), m);
}
