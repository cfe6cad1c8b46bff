//! Deterministic core of Puzzlegram: a three-player cooperative color-matching
//! game in which each solved level unlocks the next excerpt of a song.
//!
//! * [`model`] holds the palette and the seed-derived per-player assignments.
//! * [`engine`] is the session state machine.
//! * [`telemetry`] records gameplay events and derives metrics from them.

pub mod engine;
pub mod model;
pub mod rng;
pub mod telemetry;

pub use engine::{
    DisplayView, EngineError, JoinResult, Phase, PlayerState, PlayerView, PressOutcome,
    SessionState, UnlockCue,
};
pub use model::{
    ColorPalette, ConfigError, GameConfig, LayerId, ModelError, ReferenceSequence, RegionColorMap,
    RegionSegmentMap, Rgb,
};
