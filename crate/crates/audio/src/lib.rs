//! Offline audio preparation for Puzzlegram.
//!
//! Four WAV stems (`melody`, `harmony1`, `harmony2`, `harmony3`) are each cut
//! into 16 equal segments. Segment `i` of an `N`-frame stem covers frames
//! `[floor(i·N/16), floor((i+1)·N/16))`, so the pieces concatenate back to the
//! original exactly and differ in length by at most one frame.
//!
//! Segments are stored in song order. Pairing segments with controller regions
//! happens at session time, not here.

mod error;
mod manifest;
mod split;
mod stem;
pub mod synth;

pub use error::AudioError;
pub use manifest::{
    build_manifest, load_manifest, validate_manifest, validate_manifest_file, SongManifest,
    ValidationReport, Violation, MANIFEST_FILE,
};
pub use split::{segment_bounds, split_stem, Segment, SEGMENTS_PER_LAYER};
pub use stem::{read_wav, write_wav, Stem};
