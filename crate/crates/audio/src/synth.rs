//! Synthesized four-layer test song used in place of a real arrangement.
//!
//! Each of the 16 sections holds one melody note (sine) over a three-note
//! chord (triangle waves), so every segment of every layer is audibly distinct.

use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use puzzlegram_core::LayerId;

use crate::stem::write_wav;
use crate::AudioError;

pub const DEFAULT_SAMPLE_RATE: u32 = 8000;
pub const DEFAULT_SECONDS: u32 = 32;

// MIDI note numbers, one per section.
const MELODY: [u8; 16] = [60, 62, 64, 65, 67, 69, 71, 72, 72, 71, 69, 67, 65, 64, 62, 60];
const CHORD_ROOTS: [u8; 16] = [48, 53, 55, 48, 45, 53, 55, 48, 48, 55, 45, 53, 48, 55, 53, 48];

fn frequency(note: f64) -> f64 {
    440.0 * 2f64.powf((note - 69.0) / 12.0)
}

fn triangle(phase: f64) -> f64 {
    let x = phase.fract();
    4.0 * (x - 0.5).abs() - 1.0
}

/// Mono PCM for one layer.
pub fn render_layer(layer: LayerId, sample_rate: u32, seconds: u32) -> Vec<i16> {
    let total = (sample_rate as u64 * seconds as u64) as usize;
    let section = total.div_ceil(16).max(1);
    (0..total)
        .map(|n| {
            let k = (n / section).min(15);
            let t = n as f64 / sample_rate as f64;
            let root = CHORD_ROOTS[k] as f64;
            let value = match layer {
                LayerId::Melody => (TAU * frequency(MELODY[k] as f64) * t).sin(),
                LayerId::Harmony1 => triangle(frequency(root) * t),
                LayerId::Harmony2 => triangle(frequency(root + 4.0) * t),
                LayerId::Harmony3 => triangle(frequency(root + 7.0) * t),
            };
            (value * 0.3 * i16::MAX as f64).round() as i16
        })
        .collect()
}

/// Writes `melody.wav`, `harmony1.wav`, `harmony2.wav` and `harmony3.wav` into `dir`.
pub fn write_test_song(dir: &Path, sample_rate: u32, seconds: u32) -> Result<(), AudioError> {
    fs::create_dir_all(dir)?;
    for layer in LayerId::ALL {
        let samples = render_layer(layer, sample_rate, seconds);
        write_wav(&dir.join(format!("{layer}.wav")), sample_rate, 1, &samples)?;
    }
    Ok(())
}
