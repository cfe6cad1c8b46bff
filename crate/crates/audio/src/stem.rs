use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};
use puzzlegram_core::LayerId;

use crate::AudioError;

/// One instrumentation layer as interleaved 16-bit PCM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stem {
    pub layer_id: LayerId,
    pub sample_rate: u32,
    pub channels: u16,
    pub samples: Vec<i16>,
}

impl Stem {
    pub fn new(
        layer_id: LayerId,
        sample_rate: u32,
        channels: u16,
        samples: Vec<i16>,
    ) -> Result<Self, AudioError> {
        if channels == 0 || !samples.len().is_multiple_of(channels as usize) {
            return Err(AudioError::Decode {
                path: layer_id.as_str().into(),
                reason: format!(
                    "{} samples do not form whole frames of {channels} channel(s)",
                    samples.len()
                ),
            });
        }
        Ok(Self {
            layer_id,
            sample_rate,
            channels,
            samples,
        })
    }

    pub fn frames(&self) -> usize {
        self.samples.len() / self.channels as usize
    }

    pub fn read(layer_id: LayerId, path: &Path) -> Result<Self, AudioError> {
        let (sample_rate, channels, samples) = read_wav(path)?;
        Self::new(layer_id, sample_rate, channels, samples)
    }
}

fn decode_error(path: &Path, reason: impl ToString) -> AudioError {
    AudioError::Decode {
        path: path.to_owned(),
        reason: reason.to_string(),
    }
}

/// Reads a 16-bit integer PCM WAV: `(sample_rate, channels, interleaved samples)`.
pub fn read_wav(path: &Path) -> Result<(u32, u16, Vec<i16>), AudioError> {
    let reader = WavReader::open(path).map_err(|e| decode_error(path, e))?;
    let spec = reader.spec();
    if spec.sample_format != SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(decode_error(
            path,
            format!(
                "expected 16-bit integer PCM, found {}-bit {:?}",
                spec.bits_per_sample, spec.sample_format
            ),
        ));
    }
    let samples = reader
        .into_samples::<i16>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| decode_error(path, e))?;
    if samples.len() % spec.channels as usize != 0 {
        return Err(decode_error(path, "truncated final frame"));
    }
    Ok((spec.sample_rate, spec.channels, samples))
}

pub fn write_wav(
    path: &Path,
    sample_rate: u32,
    channels: u16,
    samples: &[i16],
) -> Result<(), AudioError> {
    let spec = WavSpec {
        channels,
        sample_rate,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let mut writer = WavWriter::create(path, spec)?;
    let mut pcm = writer.get_i16_writer(samples.len() as u32);
    for &s in samples {
        pcm.write_sample(s);
    }
    pcm.flush()?;
    writer.finalize()?;
    Ok(())
}
