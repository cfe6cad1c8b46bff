//! Palette, configuration and the seed-derived assignments every other part of
//! the game consumes.
//!
//! Regions are indexed row-major over the 4×4 controller grid. All derivations
//! are pure functions of `(seed, player_id, layer)`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{shuffle, splitmix64_next, SplitMix64};

pub const NUM_PLAYERS: usize = 3;
pub const NUM_REGIONS: usize = 16;
pub const NUM_LEVELS: usize = 16;

/// Sub-seed domain for region→color maps: `seed ^ (COLOR_MAP_DOMAIN + player_id)`.
pub const COLOR_MAP_DOMAIN: u64 = 0xC0105;
/// Sub-seed domain for region→segment maps:
/// `seed ^ (SEGMENT_MAP_DOMAIN + 16 * layer_index + player_id)`.
pub const SEGMENT_MAP_DOMAIN: u64 = 0x5E6_0000;
/// Sub-seed domain for the per-level reference colors: `seed ^ REFERENCE_DOMAIN`.
pub const REFERENCE_DOMAIN: u64 = 0x4EF_0000;

const PALETTE_SATURATION: f64 = 0.80;
const PALETTE_VALUE: f64 = 0.90;
const PALETTE_HUE_STEP: f64 = 360.0 / NUM_REGIONS as f64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("player id {0} out of range (expected 0..{NUM_PLAYERS})")]
    PlayerOutOfRange(usize),
    #[error("layer `{0}` has no region assignment; only harmony layers are mapped to controllers")]
    UnmappedLayer(LayerId),
    #[error("unknown instrumentation layer `{0}`")]
    UnknownLayer(String),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{field} must be {expected}, got {actual}")]
    Constant {
        field: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("manifest {0} does not exist")]
    MissingManifest(PathBuf),
}

/// An sRGB color with 8-bit channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    /// Uppercase `#RRGGBB`.
    pub fn hex(self) -> String {
        format!("#{:02X}{:02X}{:02X}", self.0, self.1, self.2)
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

/// One of the four instrumentation layers of the arranged song.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerId {
    Melody,
    Harmony1,
    Harmony2,
    Harmony3,
}

impl LayerId {
    pub const ALL: [LayerId; 4] = [
        LayerId::Melody,
        LayerId::Harmony1,
        LayerId::Harmony2,
        LayerId::Harmony3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LayerId::Melody => "melody",
            LayerId::Harmony1 => "harmony1",
            LayerId::Harmony2 => "harmony2",
            LayerId::Harmony3 => "harmony3",
        }
    }

    pub fn index(self) -> u64 {
        match self {
            LayerId::Melody => 0,
            LayerId::Harmony1 => 1,
            LayerId::Harmony2 => 2,
            LayerId::Harmony3 => 3,
        }
    }

    /// Layer played by the controller of `player_id`; melody stays the shared loop.
    pub fn for_player(player_id: usize) -> Result<LayerId, ModelError> {
        match player_id {
            0 => Ok(LayerId::Harmony1),
            1 => Ok(LayerId::Harmony2),
            2 => Ok(LayerId::Harmony3),
            other => Err(ModelError::PlayerOutOfRange(other)),
        }
    }
}

impl fmt::Display for LayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LayerId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LayerId::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| ModelError::UnknownLayer(s.to_owned()))
    }
}

/// The 16 solid colors of the game, indexed 0–15.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorPalette {
    colors: [Rgb; NUM_REGIONS],
}

impl ColorPalette {
    /// Evenly spaced hues `i × 22.5°` at saturation 0.80 and value 0.90.
    pub fn build() -> Self {
        let colors = std::array::from_fn(|i| {
            hsv_to_rgb(i as f64 * PALETTE_HUE_STEP, PALETTE_SATURATION, PALETTE_VALUE)
        });
        Self { colors }
    }

    pub fn color(&self, index: usize) -> Rgb {
        self.colors[index]
    }

    pub fn colors(&self) -> &[Rgb; NUM_REGIONS] {
        &self.colors
    }
}

impl Default for ColorPalette {
    fn default() -> Self {
        Self::build()
    }
}

pub fn build_palette() -> ColorPalette {
    ColorPalette::build()
}

/// Sector form of HSV→RGB (`p`, `q`, `t` per 60° sector), channels rounded
/// half away from zero.
fn hsv_to_rgb(hue: f64, saturation: f64, value: f64) -> Rgb {
    let sector = (hue / 60.0).floor();
    let f = hue / 60.0 - sector;
    let p = value * (1.0 - saturation);
    let q = value * (1.0 - saturation * f);
    let t = value * (1.0 - saturation * (1.0 - f));
    let (r, g, b) = match sector as u32 % 6 {
        0 => (value, t, p),
        1 => (q, value, p),
        2 => (p, value, t),
        3 => (p, q, value),
        4 => (t, p, value),
        _ => (value, p, q),
    };
    let channel = |x: f64| (x * 255.0).round().clamp(0.0, 255.0) as u8;
    Rgb(channel(r), channel(g), channel(b))
}

/// Static parameters of one game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    pub seed: u64,
    pub num_players: usize,
    pub num_regions: usize,
    pub num_levels: usize,
    pub muted: bool,
    /// Song manifest used by clients for playback. Headless runs leave it unset.
    pub manifest_path: Option<PathBuf>,
}

impl GameConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            num_players: NUM_PLAYERS,
            num_regions: NUM_REGIONS,
            num_levels: NUM_LEVELS,
            muted: false,
            manifest_path: None,
        }
    }

    pub fn with_manifest(mut self, path: impl Into<PathBuf>) -> Self {
        self.manifest_path = Some(path.into());
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (field, expected, actual) in [
            ("num_players", NUM_PLAYERS, self.num_players),
            ("num_regions", NUM_REGIONS, self.num_regions),
            ("num_levels", NUM_LEVELS, self.num_levels),
        ] {
            if expected != actual {
                return Err(ConfigError::Constant {
                    field,
                    expected,
                    actual,
                });
            }
        }
        if let Some(path) = &self.manifest_path {
            if !path.exists() {
                return Err(ConfigError::MissingManifest(path.clone()));
            }
        }
        Ok(())
    }
}

/// Region → palette index for one controller. A bijection on `0..16`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionColorMap {
    pub player_id: usize,
    pub mapping: [u8; NUM_REGIONS],
}

impl RegionColorMap {
    pub fn color_at(&self, region: usize) -> u8 {
        self.mapping[region]
    }

    /// The region holding palette index `color`.
    pub fn region_of(&self, color: u8) -> usize {
        self.mapping
            .iter()
            .position(|&c| c == color)
            .expect("color map is a bijection")
    }
}

/// Region → segment order (1–16) for one controller and layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSegmentMap {
    pub player_id: usize,
    pub layer_id: LayerId,
    pub mapping: [u8; NUM_REGIONS],
}

impl RegionSegmentMap {
    pub fn segment_at(&self, region: usize) -> u8 {
        self.mapping[region]
    }
}

/// Reference palette index for each level; level `k` (1-based) uses `colors[k - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceSequence {
    pub colors: [u8; NUM_LEVELS],
}

impl ReferenceSequence {
    pub fn for_level(&self, level: usize) -> u8 {
        self.colors[level - 1]
    }
}

fn seeded_permutation(sub_seed: u64, offset: u8) -> [u8; NUM_REGIONS] {
    let mut rng = SplitMix64::new(splitmix64_next(sub_seed));
    let mut perm: [u8; NUM_REGIONS] = std::array::from_fn(|i| i as u8 + offset);
    shuffle(&mut perm, &mut rng);
    perm
}

fn check_player(player_id: usize) -> Result<(), ModelError> {
    if player_id < NUM_PLAYERS {
        Ok(())
    } else {
        Err(ModelError::PlayerOutOfRange(player_id))
    }
}

pub fn derive_player_color_map(seed: u64, player_id: usize) -> Result<RegionColorMap, ModelError> {
    check_player(player_id)?;
    let mapping = seeded_permutation(seed ^ (COLOR_MAP_DOMAIN + player_id as u64), 0);
    Ok(RegionColorMap { player_id, mapping })
}

pub fn derive_segment_map(
    seed: u64,
    player_id: usize,
    layer_id: LayerId,
) -> Result<RegionSegmentMap, ModelError> {
    check_player(player_id)?;
    if layer_id == LayerId::Melody {
        return Err(ModelError::UnmappedLayer(layer_id));
    }
    let domain = SEGMENT_MAP_DOMAIN + 16 * layer_id.index() + player_id as u64;
    let mapping = seeded_permutation(seed ^ domain, 1);
    Ok(RegionSegmentMap {
        player_id,
        layer_id,
        mapping,
    })
}

pub fn derive_reference_sequence(seed: u64) -> ReferenceSequence {
    ReferenceSequence {
        colors: seeded_permutation(seed ^ REFERENCE_DOMAIN, 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Chroma/hexcone form of HSV→RGB, independent of the sector form above.
    fn hexcone(h: f64, s: f64, v: f64) -> (u8, u8, u8) {
        let c = v * s;
        let x = c * (1.0 - ((h / 60.0) % 2.0 - 1.0).abs());
        let m = v - c;
        let (r, g, b) = match h {
            h if h < 60.0 => (c, x, 0.0),
            h if h < 120.0 => (x, c, 0.0),
            h if h < 180.0 => (0.0, c, x),
            h if h < 240.0 => (0.0, x, c),
            h if h < 300.0 => (x, 0.0, c),
            _ => (c, 0.0, x),
        };
        let ch = |u: f64| ((u + m) * 255.0).round() as u8;
        (ch(r), ch(g), ch(b))
    }

    #[test]
    fn palette_matches_hexcone_oracle() {
        let palette = build_palette();
        for i in 0..16 {
            let (r, g, b) = hexcone(i as f64 * 22.5, 0.8, 0.9);
            assert_eq!(palette.color(i), Rgb(r, g, b), "index {i}");
        }
    }

    #[test]
    fn palette_anchor_colors() {
        let palette = build_palette();
        assert_eq!(palette.color(0), Rgb(230, 46, 46));
        assert_eq!(palette.color(8), Rgb(46, 230, 230));
        assert_eq!(palette.color(0).hex(), "#E62E2E");
    }

    #[test]
    fn palette_is_distinct_and_deterministic() {
        let palette = build_palette();
        let mut seen = palette.colors().to_vec();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 16);
        assert_eq!(palette, build_palette());
    }

    #[test]
    fn color_map_rejects_fourth_player() {
        assert_eq!(
            derive_player_color_map(1, 3),
            Err(ModelError::PlayerOutOfRange(3))
        );
    }

    #[test]
    fn segment_map_rejects_melody() {
        assert_eq!(
            derive_segment_map(1, 0, LayerId::Melody),
            Err(ModelError::UnmappedLayer(LayerId::Melody))
        );
        assert!(matches!(
            "bass".parse::<LayerId>(),
            Err(ModelError::UnknownLayer(_))
        ));
    }

    #[test]
    fn segment_map_covers_orders_one_to_sixteen() {
        let map = derive_segment_map(5, 1, LayerId::Harmony2).unwrap();
        let mut orders = map.mapping.to_vec();
        orders.sort_unstable();
        assert_eq!(orders, (1..=16).collect::<Vec<u8>>());
    }

    #[test]
    fn config_constants_are_validated() {
        let mut config = GameConfig::new(1);
        assert!(config.validate().is_ok());
        config.num_players = 2;
        assert!(matches!(
            config.validate(),
            Err(ConfigError::Constant {
                field: "num_players",
                ..
            })
        ));
        let config = GameConfig::new(1).with_manifest("/definitely/not/here.json");
        assert!(matches!(
            config.validate(),
            Err(ConfigError::MissingManifest(_))
        ));
    }

    #[test]
    fn layer_names_round_trip() {
        for layer in LayerId::ALL {
            assert_eq!(layer.as_str().parse::<LayerId>().unwrap(), layer);
            assert_eq!(
                serde_json::to_string(&layer).unwrap(),
                format!("\"{}\"", layer.as_str())
            );
        }
    }
}
