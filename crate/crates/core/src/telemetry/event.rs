use serde::{Deserialize, Serialize};

use crate::engine::{JoinResult, PressOutcome, SessionState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Join,
    Press,
    Match,
    LevelAdvance,
    Complete,
    MuteChange,
}

/// One line of a session log.
///
/// `level` is the level the event belongs to: a press, its match and the
/// resulting `level_advance` all carry the level being solved. Joins carry 0
/// while pairing and 1 for the join that starts the game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRecord {
    pub ts_ms: u64,
    pub tick: u64,
    pub session_id: String,
    pub event: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub player_id: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color_hex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matched: Option<bool>,
    pub level: usize,
    pub muted: bool,
}

/// Turns engine transitions into event records for one session.
#[derive(Debug, Clone)]
pub struct EventRecorder {
    session_id: String,
}

impl EventRecorder {
    pub fn new(session_id: impl Into<String>) -> Self {
        Self {
            session_id: session_id.into(),
        }
    }

    pub fn session_id(&self) -> &str {
        &self.session_id
    }

    fn base(&self, ts_ms: u64, tick: u64, event: EventKind, level: usize, muted: bool) -> EventRecord {
        EventRecord {
            ts_ms,
            tick,
            session_id: self.session_id.clone(),
            event,
            player_id: None,
            region: None,
            color_hex: None,
            matched: None,
            level,
            muted,
        }
    }

    /// `state` is the session after the join was applied.
    pub fn join(&self, ts_ms: u64, state: &SessionState, joined: &JoinResult) -> EventRecord {
        EventRecord {
            player_id: Some(joined.player_id),
            ..self.base(ts_ms, state.tick, EventKind::Join, state.level, state.muted)
        }
    }

    /// Records for one press: the press itself, a match if this press matched
    /// the player, and the level completion it triggered if any.
    pub fn press(&self, ts_ms: u64, state: &SessionState, outcome: &PressOutcome) -> Vec<EventRecord> {
        let tick = state.tick;
        let muted = state.muted;
        let press = EventRecord {
            player_id: Some(outcome.player_id),
            region: Some(outcome.region),
            color_hex: Some(outcome.shown_color.hex()),
            matched: Some(outcome.matched),
            ..self.base(ts_ms, tick, EventKind::Press, outcome.level, muted)
        };
        let mut records = vec![press.clone()];
        if outcome.newly_matched {
            records.push(EventRecord {
                event: EventKind::Match,
                ..press
            });
        }
        if outcome.game_complete {
            records.push(self.base(ts_ms, tick, EventKind::Complete, outcome.level, muted));
        } else if outcome.level_advanced {
            records.push(self.base(ts_ms, tick, EventKind::LevelAdvance, outcome.level, muted));
        }
        records
    }

    pub fn mute_change(&self, ts_ms: u64, state: &SessionState) -> EventRecord {
        self.base(ts_ms, state.tick, EventKind::MuteChange, state.level, state.muted)
    }
}
