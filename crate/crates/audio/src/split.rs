use crate::{AudioError, Stem};

pub const SEGMENTS_PER_LAYER: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    /// Song order, 1-based.
    pub order: usize,
    pub start_frame: usize,
    pub frames: usize,
    pub samples: Vec<i16>,
}

/// Frame boundaries `floor(i·total/parts)` for `i` in `0..=parts`.
pub fn segment_bounds(total: usize, parts: usize) -> Vec<usize> {
    (0..=parts)
        .map(|i| ((i as u128 * total as u128) / parts as u128) as usize)
        .collect()
}

pub fn split_stem(stem: &Stem, parts: usize) -> Result<Vec<Segment>, AudioError> {
    let total = stem.frames();
    if parts == 0 || total < parts {
        return Err(AudioError::TooShort {
            frames: total,
            needed: parts.max(1),
        });
    }
    let channels = stem.channels as usize;
    let bounds = segment_bounds(total, parts);
    Ok(bounds
        .windows(2)
        .enumerate()
        .map(|(i, w)| Segment {
            order: i + 1,
            start_frame: w[0],
            frames: w[1] - w[0],
            samples: stem.samples[w[0] * channels..w[1] * channels].to_vec(),
        })
        .collect())
}
