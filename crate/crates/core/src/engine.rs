//! Session state machine.
//!
//! A session pairs three controllers, then runs 16 levels. Each level shows
//! one reference color; every player searches their own grid for the region
//! holding it. Wrong presses reveal colors and cost nothing. Once all three
//! players have matched, the next song excerpt unlocks and the level advances.
//!
//! Time inside the engine is a caller-supplied logical tick so that replays are
//! exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    derive_player_color_map, derive_reference_sequence, derive_segment_map, ColorPalette,
    ConfigError, GameConfig, LayerId, ModelError, ReferenceSequence, RegionColorMap,
    RegionSegmentMap, Rgb, NUM_LEVELS, NUM_PLAYERS, NUM_REGIONS,
};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("session already has {NUM_PLAYERS} players")]
    SessionFull,
    #[error("game has not started; waiting for players to pair")]
    NotStarted,
    #[error("game is already complete")]
    Finished,
    #[error("player {0} has not joined this session")]
    UnknownPlayer(usize),
    #[error("region {0} out of range (expected 0..{NUM_REGIONS})")]
    RegionOutOfRange(usize),
    #[error("tick {got} is earlier than session tick {current}")]
    TickRegression { current: u64, got: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Pairing,
    Active,
    Complete,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerState {
    pub player_id: usize,
    pub name: String,
    pub layer_id: LayerId,
    pub color_map: RegionColorMap,
    pub segment_map: RegionSegmentMap,
    pub matched: bool,
    pub presses_this_level: u32,
    pub total_presses: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinResult {
    pub player_id: usize,
    pub layer_id: LayerId,
}

/// Melody segments to loop after an unlock, or the full mix on completion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnlockCue {
    pub layers: Vec<LayerId>,
    pub segments: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PressOutcome {
    pub player_id: usize,
    pub region: usize,
    pub shown_color: Rgb,
    pub shown_color_index: u8,
    pub matched: bool,
    /// Whether this press is the one that matched the player.
    pub newly_matched: bool,
    pub audio_cue: Option<(LayerId, u8)>,
    pub level: usize,
    pub level_advanced: bool,
    pub game_complete: bool,
    pub unlock: Option<UnlockCue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlayerView {
    pub reference_color: Option<Rgb>,
    pub matched: bool,
    pub level: usize,
    pub unlocked: usize,
    pub muted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisplayView {
    pub phase: Phase,
    pub level: usize,
    pub reference_color: Option<Rgb>,
    pub matched: Vec<bool>,
    pub unlocked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionState {
    pub config: GameConfig,
    pub phase: Phase,
    /// 1–16 once active; 0 while pairing.
    pub level: usize,
    pub players: Vec<PlayerState>,
    pub reference: ReferenceSequence,
    pub unlocked: usize,
    pub muted: bool,
    pub tick: u64,
    #[serde(skip, default)]
    palette: ColorPalette,
}

impl SessionState {
    pub fn new(config: GameConfig) -> Result<Self, EngineError> {
        config.validate()?;
        Ok(Self {
            reference: derive_reference_sequence(config.seed),
            muted: config.muted,
            config,
            phase: Phase::Pairing,
            level: 0,
            players: Vec::with_capacity(NUM_PLAYERS),
            unlocked: 0,
            tick: 0,
            palette: ColorPalette::build(),
        })
    }

    pub fn palette(&self) -> &ColorPalette {
        &self.palette
    }

    pub fn player(&self, player_id: usize) -> Result<&PlayerState, EngineError> {
        self.players
            .iter()
            .find(|p| p.player_id == player_id)
            .ok_or(EngineError::UnknownPlayer(player_id))
    }

    pub fn player_by_name(&self, name: &str) -> Option<&PlayerState> {
        self.players.iter().find(|p| p.name == name)
    }

    /// Palette index every player must find at the current level.
    pub fn reference_index(&self) -> Option<u8> {
        match self.phase {
            Phase::Pairing => None,
            Phase::Active | Phase::Complete => Some(self.reference.for_level(self.level)),
        }
    }

    pub fn reference_color(&self) -> Option<Rgb> {
        self.reference_index()
            .map(|i| self.palette.color(i as usize))
    }

    pub fn join_player(&mut self, name: &str) -> Result<JoinResult, EngineError> {
        if self.phase != Phase::Pairing {
            return Err(EngineError::SessionFull);
        }
        let player_id = (0..NUM_PLAYERS)
            .find(|id| self.players.iter().all(|p| p.player_id != *id))
            .ok_or(EngineError::SessionFull)?;
        let layer_id = LayerId::for_player(player_id)?;
        let seed = self.config.seed;
        self.players.push(PlayerState {
            player_id,
            name: name.to_owned(),
            layer_id,
            color_map: derive_player_color_map(seed, player_id)?,
            segment_map: derive_segment_map(seed, player_id, layer_id)?,
            matched: false,
            presses_this_level: 0,
            total_presses: 0,
        });
        self.players.sort_by_key(|p| p.player_id);
        if self.players.len() == NUM_PLAYERS {
            self.phase = Phase::Active;
            self.level = 1;
        }
        Ok(JoinResult {
            player_id,
            layer_id,
        })
    }

    /// Frees a controller slot before the game starts. Players cannot leave a
    /// running game; their slot stays reserved for a reconnect.
    pub fn remove_player(&mut self, player_id: usize) -> Result<(), EngineError> {
        if self.phase != Phase::Pairing {
            return Err(EngineError::SessionFull);
        }
        let before = self.players.len();
        self.players.retain(|p| p.player_id != player_id);
        if self.players.len() == before {
            return Err(EngineError::UnknownPlayer(player_id));
        }
        Ok(())
    }

    pub fn handle_press(
        &mut self,
        player_id: usize,
        region: usize,
        tick: u64,
    ) -> Result<PressOutcome, EngineError> {
        match self.phase {
            Phase::Pairing => return Err(EngineError::NotStarted),
            Phase::Complete => return Err(EngineError::Finished),
            Phase::Active => {}
        }
        let idx = self
            .players
            .iter()
            .position(|p| p.player_id == player_id)
            .ok_or(EngineError::UnknownPlayer(player_id))?;
        if region >= NUM_REGIONS {
            return Err(EngineError::RegionOutOfRange(region));
        }
        if tick < self.tick {
            return Err(EngineError::TickRegression {
                current: self.tick,
                got: tick,
            });
        }
        self.tick = tick;

        let level = self.level;
        let reference = self.reference.for_level(level);
        let muted = self.muted;
        let player = &mut self.players[idx];
        let color_index = player.color_map.color_at(region);
        let audio_cue = (!muted).then(|| (player.layer_id, player.segment_map.segment_at(region)));

        let mut outcome = PressOutcome {
            player_id,
            region,
            shown_color: self.palette.color(color_index as usize),
            shown_color_index: color_index,
            matched: player.matched,
            newly_matched: false,
            audio_cue,
            level,
            level_advanced: false,
            game_complete: false,
            unlock: None,
        };
        if player.matched {
            return Ok(outcome);
        }

        player.presses_this_level += 1;
        player.total_presses += 1;
        if color_index == reference {
            player.matched = true;
            outcome.matched = true;
            outcome.newly_matched = true;
        }

        if self.players.iter().all(|p| p.matched) {
            self.unlocked += 1;
            outcome.level_advanced = true;
            if self.unlocked == NUM_LEVELS {
                self.phase = Phase::Complete;
                outcome.game_complete = true;
                outcome.unlock = Some(UnlockCue {
                    layers: LayerId::ALL.to_vec(),
                    segments: (1..=NUM_LEVELS as u8).collect(),
                });
            } else {
                outcome.unlock = Some(UnlockCue {
                    layers: vec![LayerId::Melody],
                    segments: (1..=level as u8).collect(),
                });
                self.level += 1;
                for p in &mut self.players {
                    p.matched = false;
                    p.presses_this_level = 0;
                }
            }
        }
        Ok(outcome)
    }

    pub fn set_muted(&mut self, muted: bool) {
        self.muted = muted;
    }

    pub fn player_view(&self, player_id: usize) -> Result<PlayerView, EngineError> {
        let player = self.player(player_id)?;
        Ok(PlayerView {
            reference_color: self.reference_color(),
            matched: player.matched,
            level: self.level,
            unlocked: self.unlocked,
            muted: self.muted,
        })
    }

    pub fn display_view(&self) -> DisplayView {
        DisplayView {
            phase: self.phase,
            level: self.level,
            reference_color: self.reference_color(),
            matched: self.players.iter().map(|p| p.matched).collect(),
            unlocked: self.unlocked,
        }
    }

    /// Melody segment looping during the current level.
    pub fn loop_segment(&self) -> Option<u8> {
        (self.phase == Phase::Active).then_some(self.level as u8)
    }
}

pub fn create_session(config: GameConfig) -> Result<SessionState, EngineError> {
    SessionState::new(config)
}
