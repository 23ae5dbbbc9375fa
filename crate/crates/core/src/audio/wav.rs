use std::fs::File;
use std::io::{BufReader, Cursor, Read, Seek};
use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::{clamp_sample, AudioBuffer, AudioError};

const PCM16_SCALE: f32 = 32767.0;

/// Reads a PCM16 or float32 WAV file, downmixing to mono.
pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioBuffer, AudioError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| AudioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_from(BufReader::new(file))
}

/// Same as [`read_wav`] for an in-memory WAV image.
pub fn decode_wav(bytes: &[u8]) -> Result<AudioBuffer, AudioError> {
    decode_from(Cursor::new(bytes))
}

fn decode_from<R: Read>(reader: R) -> Result<AudioBuffer, AudioError> {
    let mut reader = WavReader::new(reader).map_err(map_header_error)?;
    let spec = reader.spec();
    check_spec(&spec)?;

    let interleaved: Vec<f32> = match spec.sample_format {
        SampleFormat::Int => reader
            .samples::<i16>()
            .map(|s| s.map(|v| (v as f32 / PCM16_SCALE).max(-1.0)))
            .collect::<Result<_, _>>()
            .map_err(map_data_error)?,
        SampleFormat::Float => reader
            .samples::<f32>()
            .map(|s| s.map(clamp_sample))
            .collect::<Result<_, _>>()
            .map_err(map_data_error)?,
    };

    let samples = match spec.channels {
        1 => interleaved,
        _ => interleaved
            .chunks_exact(2)
            .map(|lr| 0.5 * (lr[0] + lr[1]))
            .collect(),
    };
    Ok(AudioBuffer::new(samples, spec.sample_rate))
}

fn check_spec(spec: &WavSpec) -> Result<(), AudioError> {
    if spec.channels == 0 || spec.channels > 2 {
        return Err(AudioError::UnsupportedFormat(format!(
            "{} channels (1 or 2 supported)",
            spec.channels
        )));
    }
    if spec.sample_rate == 0 {
        return Err(AudioError::CorruptHeader("sample rate is zero".into()));
    }
    match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, 16) | (SampleFormat::Float, 32) => Ok(()),
        (fmt, bits) => Err(AudioError::UnsupportedFormat(format!(
            "{bits}-bit {fmt:?} samples (16-bit PCM or 32-bit float supported)"
        ))),
    }
}

fn map_header_error(err: hound::Error) -> AudioError {
    match err {
        hound::Error::Unsupported => {
            AudioError::UnsupportedFormat("compression code other than PCM (1) or IEEE float (3)".into())
        }
        hound::Error::TooWide | hound::Error::InvalidSampleFormat => {
            AudioError::UnsupportedFormat(err.to_string())
        }
        hound::Error::FormatError(msg) => AudioError::CorruptHeader(msg.to_string()),
        hound::Error::IoError(e) => AudioError::CorruptHeader(format!("truncated header: {e}")),
        other => AudioError::CorruptHeader(other.to_string()),
    }
}

fn map_data_error(err: hound::Error) -> AudioError {
    AudioError::CorruptHeader(format!("data chunk shorter than declared: {err}"))
}

/// Writes 16-bit little-endian mono PCM. Samples are clamped to `[-1, 1]`
/// before quantization.
pub fn write_wav(buffer: &AudioBuffer, path: impl AsRef<Path>) -> Result<(), AudioError> {
    let path = path.as_ref();
    let bytes = encode_wav(buffer);
    std::fs::write(path, bytes).map_err(|source| AudioError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// In-memory form of [`write_wav`].
pub fn encode_wav(buffer: &AudioBuffer) -> Vec<u8> {
    let spec = WavSpec {
        channels: 1,
        sample_rate: buffer.sample_rate(),
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let mut cursor = Cursor::new(Vec::with_capacity(44 + 2 * buffer.len()));
    {
        // Writing into a Vec cannot fail short of allocation failure.
        let mut writer = WavWriter::new(&mut cursor, spec).expect("in-memory WAV header");
        let mut samples = writer.get_i16_writer(buffer.len() as u32);
        for &s in buffer.samples() {
            samples.write_sample(quantize(s));
        }
        samples.flush().expect("in-memory WAV samples");
        writer.finalize().expect("in-memory WAV finalize");
    }
    cursor.into_inner()
}

fn quantize(s: f32) -> i16 {
    (clamp_sample(s) * PCM16_SCALE).round() as i16
}

/// Duration of a WAV file computed from its header, without decoding samples.
pub fn wav_duration_seconds(path: impl AsRef<Path>) -> Result<f64, AudioError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| AudioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    duration_from(BufReader::new(file))
}

fn duration_from<R: Read + Seek>(reader: R) -> Result<f64, AudioError> {
    let reader = WavReader::new(reader).map_err(map_header_error)?;
    let spec = reader.spec();
    check_spec(&spec)?;
    Ok(reader.duration() as f64 / spec.sample_rate as f64)
}
