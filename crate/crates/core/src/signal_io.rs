//! Mono signal files: raw little-endian f64, 16-bit PCM or 32-bit float WAV,
//! and CSV with one value per line.

use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Sample rate reported for formats that do not carry one.
pub const DEFAULT_SAMPLE_RATE: u32 = 48_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalFormat {
    RawF64Le,
    WavPcm16,
    WavFloat32,
    Csv,
}

impl SignalFormat {
    /// Guesses the format from a file extension: `.wav` is 16-bit PCM,
    /// `.csv`/`.txt` is CSV, anything else raw f64.
    pub fn from_path(path: &Path) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
        {
            Some(e) if e == "wav" => Self::WavPcm16,
            Some(e) if e == "csv" || e == "txt" => Self::Csv,
            _ => Self::RawF64Le,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::RawF64Le => "raw-f64le",
            Self::WavPcm16 => "wav-pcm16",
            Self::WavFloat32 => "wav-float32",
            Self::Csv => "csv",
        }
    }
}

impl fmt::Display for SignalFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignalFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw-f64le" | "raw" | "f64" => Ok(Self::RawF64Le),
            "wav-pcm16" | "wav" => Ok(Self::WavPcm16),
            "wav-float32" => Ok(Self::WavFloat32),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::InvalidConfig(format!("unknown signal format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<f64>,
    /// Informational only; processing works in normalized time.
    pub sample_rate: u32,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Self {
        Self {
            samples,
            sample_rate,
        }
    }
}

fn wav_error(e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::Io(io),
        other => Error::Format(other.to_string()),
    }
}

pub fn read_signal(path: &Path, format: SignalFormat) -> Result<Signal> {
    match format {
        SignalFormat::RawF64Le => {
            let bytes = fs::read(path)?;
            decode_raw(&bytes).map(|s| Signal::new(s, DEFAULT_SAMPLE_RATE))
        }
        SignalFormat::Csv => {
            let text = fs::read_to_string(path)?;
            decode_csv(&text).map(|s| Signal::new(s, DEFAULT_SAMPLE_RATE))
        }
        SignalFormat::WavPcm16 | SignalFormat::WavFloat32 => read_wav(path, format),
    }
}

pub fn decode_raw(bytes: &[u8]) -> Result<Vec<f64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(Error::Format(format!(
            "raw f64 payload of {} bytes is not a multiple of 8",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}

pub fn decode_csv(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let v = l.trim().parse::<f64>().map_err(|_| {
                Error::Format(format!("line {}: `{}` is not a number", i + 1, l.trim()))
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Format(format!("line {}: non-finite sample", i + 1)))
            }
        })
        .collect()
}

fn read_wav(path: &Path, format: SignalFormat) -> Result<Signal> {
    let reader = hound::WavReader::open(path).map_err(wav_error)?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::Format(format!(
            "expected mono WAV, found {} channels",
            spec.channels
        )));
    }
    let samples = match (format, spec.sample_format, spec.bits_per_sample) {
        (SignalFormat::WavPcm16, hound::SampleFormat::Int, 16) => reader
            .into_samples::<i16>()
            .map(|s| s.map(|v| f64::from(v) / 32768.0))
            .collect::<std::result::Result<Vec<_>, _>>(),
        (SignalFormat::WavFloat32, hound::SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<Vec<_>, _>>(),
        (_, sf, bits) => {
            return Err(Error::Format(format!(
                "expected {format}, found {bits}-bit {} WAV",
                if sf == hound::SampleFormat::Int {
                    "integer"
                } else {
                    "float"
                }
            )))
        }
    }
    .map_err(wav_error)?;
    Ok(Signal::new(samples, spec.sample_rate))
}

pub fn write_signal(signal: &Signal, path: &Path, format: SignalFormat) -> Result<()> {
    match format {
        SignalFormat::RawF64Le => fs::write(path, encode_raw(&signal.samples))?,
        SignalFormat::Csv => {
            let mut w = BufWriter::new(fs::File::create(path)?);
            write_csv(&mut w, &signal.samples)?;
            w.flush()?;
        }
        SignalFormat::WavPcm16 | SignalFormat::WavFloat32 => write_wav(signal, path, format)?,
    }
    Ok(())
}

pub fn encode_raw(samples: &[f64]) -> Vec<u8> {
    samples.iter().flat_map(|v| v.to_le_bytes()).collect()
}

pub fn write_csv<W: Write>(w: &mut W, samples: &[f64]) -> std::io::Result<()> {
    for v in samples {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

/// Nearest 16-bit code for `x` in `[-1, 1)`, saturating outside.
pub fn quantize_pcm16(x: f64) -> i16 {
    (x * 32768.0).round().clamp(-32768.0, 32767.0) as i16
}

fn write_wav(signal: &Signal, path: &Path, format: SignalFormat) -> Result<()> {
    let (bits, sample_format) = match format {
        SignalFormat::WavFloat32 => (32, hound::SampleFormat::Float),
        _ => (16, hound::SampleFormat::Int),
    };
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: signal.sample_rate,
        bits_per_sample: bits,
        sample_format,
    };
    let mut w = hound::WavWriter::create(path, spec).map_err(wav_error)?;
    for &v in &signal.samples {
        match format {
            SignalFormat::WavFloat32 => w.write_sample(v as f32),
            _ => w.write_sample(quantize_pcm16(v)),
        }
        .map_err(wav_error)?;
    }
    w.finalize().map_err(wav_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_parsing() {
        assert_eq!(decode_csv("0.5\n-0.25\n").unwrap(), vec![0.5, -0.25]);
        assert!(decode_csv("0.5\nabc\n").is_err());
        assert!(decode_csv("inf\n").is_err());
    }

    #[test]
    fn truncated_raw_is_rejected() {
        assert!(matches!(decode_raw(&[0u8; 12]), Err(Error::Format(_))));
    }

    #[test]
    fn format_names() {
        for f in [
            SignalFormat::RawF64Le,
            SignalFormat::WavPcm16,
            SignalFormat::WavFloat32,
            SignalFormat::Csv,
        ] {
            assert_eq!(f.name().parse::<SignalFormat>().unwrap(), f);
        }
        assert_eq!(
            SignalFormat::from_path(Path::new("a.WAV")),
            SignalFormat::WavPcm16
        );
        assert_eq!(
            SignalFormat::from_path(Path::new("a.f64")),
            SignalFormat::RawF64Le
        );
    }

    #[test]
    fn pcm16_quantization_saturates() {
        assert_eq!(quantize_pcm16(1.0), 32767);
        assert_eq!(quantize_pcm16(-1.0), -32768);
        assert_eq!(quantize_pcm16(-2.0), -32768);
    }

    proptest! {
        #[test]
        fn raw_and_csv_round_trip(v in prop::collection::vec(-1e6f64..1e6, 0..200)) {
            prop_assert_eq!(decode_raw(&encode_raw(&v)).unwrap(), v.clone());
            let mut buf = Vec::new();
            write_csv(&mut buf, &v).unwrap();
            prop_assert_eq!(decode_csv(std::str::from_utf8(&buf).unwrap()).unwrap(), v);
        }
    }
}
