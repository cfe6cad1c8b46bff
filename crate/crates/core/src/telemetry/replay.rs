use thiserror::Error;

use super::event::{EventKind, EventRecord, EventRecorder};
use crate::engine::{EngineError, SessionState};
use crate::model::GameConfig;

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("event {index}: {reason}")]
    Malformed { index: usize, reason: &'static str },
    #[error("event {index}: log assigned player {logged}, replay assigned {replayed}")]
    JoinMismatch {
        index: usize,
        logged: usize,
        replayed: usize,
    },
}

#[derive(Debug)]
pub struct Replayed {
    pub state: SessionState,
    /// Events regenerated by the fresh engine, in the same shape as a live log.
    pub events: Vec<EventRecord>,
}

/// Feeds the joins, presses and mute changes of `events` into a fresh engine.
pub fn replay(config: GameConfig, events: &[EventRecord]) -> Result<Replayed, ReplayError> {
    let mut state = SessionState::new(config)?;
    let session_id = events.first().map(|e| e.session_id.as_str()).unwrap_or("");
    let recorder = EventRecorder::new(session_id);
    let mut out = Vec::with_capacity(events.len());

    for (index, event) in events.iter().enumerate() {
        match event.event {
            EventKind::Join => {
                let logged = event.player_id.ok_or(ReplayError::Malformed {
                    index,
                    reason: "join without player_id",
                })?;
                let joined = state.join_player(&format!("player{logged}"))?;
                if joined.player_id != logged {
                    return Err(ReplayError::JoinMismatch {
                        index,
                        logged,
                        replayed: joined.player_id,
                    });
                }
                out.push(recorder.join(event.ts_ms, &state, &joined));
            }
            EventKind::Press => {
                let (Some(player), Some(region)) = (event.player_id, event.region) else {
                    return Err(ReplayError::Malformed {
                        index,
                        reason: "press without player_id or region",
                    });
                };
                let outcome = state.handle_press(player, region, event.tick)?;
                out.extend(recorder.press(event.ts_ms, &state, &outcome));
            }
            EventKind::MuteChange => {
                state.set_muted(event.muted);
                out.push(recorder.mute_change(event.ts_ms, &state));
            }
            EventKind::Match | EventKind::LevelAdvance | EventKind::Complete => {}
        }
    }
    Ok(Replayed { state, events: out })
}

/// The match, level-advance and completion events of a log, in order.
pub fn progress_events(events: &[EventRecord]) -> Vec<&EventRecord> {
    events
        .iter()
        .filter(|e| {
            matches!(
                e.event,
                EventKind::Match | EventKind::LevelAdvance | EventKind::Complete
            )
        })
        .collect()
}
