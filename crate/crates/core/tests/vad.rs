use fooctts_core::audio::synth;
use fooctts_core::vad::{cut_audio, filter_speech, format_segments, parse_segments, segment_recording};
use fooctts_core::{AudioBuffer, SegmentLabel, VadConfig};

const RATE: u32 = 22_050;

/// 1 s digital silence, 1 s voiced proxy, 1 s seeded white noise.
fn three_part_fixture() -> AudioBuffer {
    AudioBuffer::concat(&[
        AudioBuffer::silence(RATE as usize, RATE),
        synth::speech_proxy(140.0, 0.6, 1.0, RATE),
        synth::white_noise(0.3, 1.0, RATE, 7),
    ])
    .unwrap()
}

#[test]
fn three_part_fixture_segments() {
    let audio = three_part_fixture();
    let segs = segment_recording(&audio, &VadConfig::default()).unwrap();
    let labels: Vec<SegmentLabel> = segs.iter().map(|s| s.label).collect();
    assert_eq!(labels, [SegmentLabel::NoEnergy, SegmentLabel::Speech, SegmentLabel::Noise]);
    assert!((segs[0].end_s - 1.0).abs() <= 0.05, "{segs:?}");
    assert!((segs[1].end_s - 2.0).abs() <= 0.05, "{segs:?}");
    assert_eq!(segs[0].start_s, 0.0);
    assert!((segs[2].end_s - 3.0).abs() < 1e-9);

    let speech = filter_speech(&segs);
    assert_eq!(speech, vec![segs[1]]);
}

#[test]
fn music_bed_is_not_speech() {
    let audio = AudioBuffer::concat(&[
        synth::speech_proxy(200.0, 0.6, 1.0, RATE),
        synth::steady_chord(0.4, 1.5, RATE),
    ])
    .unwrap();
    let segs = segment_recording(&audio, &VadConfig::default()).unwrap();
    let labels: Vec<SegmentLabel> = segs.iter().map(|s| s.label).collect();
    assert_eq!(labels, [SegmentLabel::Speech, SegmentLabel::Music]);
    assert!((segs[0].end_s - 1.0).abs() <= 0.05, "{segs:?}");
}

#[test]
fn segments_tile_and_cuts_reassemble() {
    let audio = three_part_fixture();
    let segs = segment_recording(&audio, &VadConfig::default()).unwrap();
    for pair in segs.windows(2) {
        assert_eq!(pair[0].end_s, pair[1].start_s);
        assert_ne!(pair[0].label, pair[1].label);
    }
    let clips = cut_audio(&audio, &segs).unwrap();
    assert_eq!(AudioBuffer::concat(&clips).unwrap(), audio);
    assert!(segs.iter().all(|s| s.duration_s() >= VadConfig::default().min_segment_s));
}

#[test]
fn segment_file_round_trip() {
    let segs = segment_recording(&three_part_fixture(), &VadConfig::default()).unwrap();
    let back = parse_segments(&format_segments(&segs)).unwrap();
    assert_eq!(back.len(), segs.len());
    for (a, b) in segs.iter().zip(&back) {
        assert_eq!(a.label, b.label);
        assert!((a.start_s - b.start_s).abs() <= 0.0005 && (a.end_s - b.end_s).abs() <= 0.0005);
    }
}

#[test]
fn short_bursts_are_absorbed() {
    // 100 ms of noise inside speech is shorter than the minimum segment.
    let audio = AudioBuffer::concat(&[
        synth::speech_proxy(150.0, 0.6, 1.0, RATE),
        synth::white_noise(0.3, 0.1, RATE, 3),
        synth::speech_proxy(150.0, 0.6, 1.0, RATE),
    ])
    .unwrap();
    let segs = segment_recording(&audio, &VadConfig::default()).unwrap();
    assert_eq!(segs.len(), 1, "{segs:?}");
    assert_eq!(segs[0].label, SegmentLabel::Speech);
}
