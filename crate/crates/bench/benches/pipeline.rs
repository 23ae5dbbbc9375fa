use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fooctts_bench::{broadcast, posteriors, transcript};
use fooctts_core::align::{align, AlignConfig};
use fooctts_core::audio::{estimate_f0, mix_noise, resample, synth};
use fooctts_core::text::{normalize, transliterate_text, TranslitTable};
use fooctts_core::vad::segment_recording;
use fooctts_core::VadConfig;

fn bench_align(c: &mut Criterion) {
    let mut group = c.benchmark_group("align");
    group.sample_size(10);
    // 50 frames per second; one utterance of 20 tokens every 4 seconds.
    for seconds in [30usize, 120] {
        let m = posteriors(seconds * 50, 40, 1);
        let utts = transcript(seconds / 4, 20, 40, 2);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{seconds}s")), &seconds, |b, _| {
            b.iter(|| align(black_box(&m), black_box(&utts), &AlignConfig::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_audio(c: &mut Criterion) {
    let audio = broadcast(60.0, 16_000, 3);
    let cfg = VadConfig::default();
    let mut group = c.benchmark_group("audio");
    group.sample_size(10);
    group.bench_function("vad_60s", |b| b.iter(|| segment_recording(black_box(&audio), &cfg).unwrap()));
    group.bench_function("f0_60s", |b| b.iter(|| estimate_f0(black_box(&audio), 25.0, 10.0, 60.0, 400.0).unwrap()));
    group.bench_function("resample_60s_16k_to_22k", |b| b.iter(|| resample(black_box(&audio), 22_050).unwrap()));
    let speech = synth::speech_proxy(150.0, 0.5, 5.0, 22_050);
    let bed = synth::crowd_bed(10.0, 22_050, 0);
    group.bench_function("mix_5s", |b| b.iter(|| mix_noise(black_box(&speech), &bed, 15.0).unwrap()));
    group.finish();
}

fn bench_text(c: &mut Criterion) {
    let table = TranslitTable::bundled();
    let line = "Messi يسجل هدف رائع في الدقيقة 90 وKhazri يحتفل مع الجماهير ".repeat(20);
    c.bench_function("text/normalize_transliterate", |b| {
        b.iter(|| transliterate_text(&normalize(black_box(&line)), &table))
    });
}

criterion_group!(benches, bench_align, bench_audio, bench_text);
criterion_main!(benches);
