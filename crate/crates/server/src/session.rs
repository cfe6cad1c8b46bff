//! One hosted game: the engine plus the connections attached to it.
//!
//! A `Session` is only ever mutated behind its own lock, so each game has a
//! single writer. Every handler takes one engine snapshot and pushes the
//! resulting frames to member outboxes before the lock is released, which
//! keeps every member's stream in application order.

use std::fs::File;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use puzzlegram_core::telemetry::{EventLog, EventRecord, EventRecorder};
use puzzlegram_core::{EngineError, GameConfig, Phase, PressOutcome, SessionState};
use tokio::sync::mpsc::UnboundedSender;

use crate::protocol::{
    encode_message, AudioCue, ErrorCode, GameSummary, PlayerStatus, PlayerSummary, Role,
    ServerMessage,
};

pub type ConnId = u64;
pub type Outbox = UnboundedSender<String>;

#[derive(Debug)]
struct Member {
    conn: ConnId,
    role: Role,
    player_id: Option<usize>,
    outbox: Outbox,
}

#[derive(Debug)]
pub struct Session {
    id: String,
    state: SessionState,
    members: Vec<Member>,
    recorder: EventRecorder,
    log: Option<EventLog<File>>,
    next_tick: u64,
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn engine_error(err: &EngineError) -> ServerMessage {
    let code = match err {
        EngineError::SessionFull => ErrorCode::SessionFull,
        EngineError::NotStarted => ErrorCode::NotStarted,
        EngineError::Finished => ErrorCode::GameOver,
        EngineError::UnknownPlayer(_) => ErrorCode::UnknownPlayer,
        _ => ErrorCode::BadMessage,
    };
    ServerMessage::error(code, err.to_string())
}

/// Keeps log file names inside the log directory.
fn log_file_stem(session_id: &str) -> String {
    session_id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

impl Session {
    pub fn new(id: &str, config: GameConfig, log_dir: Option<&Path>) -> Result<Self, EngineError> {
        let seed = config.seed;
        let state = SessionState::new(config)?;
        let log = log_dir.and_then(|dir| {
            let stem = log_file_stem(id);
            let opened = std::fs::create_dir_all(dir)
                .and_then(|_| {
                    std::fs::write(
                        dir.join(format!("{stem}.meta.json")),
                        format!("{{\"session_id\":{:?},\"seed\":{seed}}}\n", id),
                    )
                })
                .and_then(|_| EventLog::open(dir.join(format!("{stem}.jsonl"))));
            match opened {
                Ok(log) => Some(log),
                Err(err) => {
                    tracing::warn!(session = id, %err, "telemetry disabled for session");
                    None
                }
            }
        });
        tracing::info!(session = id, seed, "session created");
        Ok(Self {
            id: id.to_owned(),
            state,
            members: Vec::new(),
            recorder: EventRecorder::new(id),
            log,
            next_tick: 0,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn state(&self) -> &SessionState {
        &self.state
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    pub fn telemetry_enabled(&self) -> bool {
        self.log.is_some()
    }

    fn send(outbox: &Outbox, message: &ServerMessage) {
        // A closed outbox means the socket is going away; its disconnect will follow.
        let _ = outbox.send(encode_message(message));
    }

    fn send_to(&self, conn: ConnId, message: &ServerMessage) {
        if let Some(m) = self.members.iter().find(|m| m.conn == conn) {
            Self::send(&m.outbox, message);
        }
    }

    fn broadcast(&self, message: &ServerMessage) {
        let text = encode_message(message);
        for m in &self.members {
            let _ = m.outbox.send(text.clone());
        }
    }

    pub fn state_message(&self) -> ServerMessage {
        let s = &self.state;
        ServerMessage::State {
            phase: s.phase,
            level: s.level,
            reference_color_hex: s.reference_color().map(|c| c.hex()),
            players: s
                .players
                .iter()
                .map(|p| PlayerStatus {
                    player_id: p.player_id,
                    name: p.name.clone(),
                    matched: p.matched,
                    presses_this_level: p.presses_this_level,
                })
                .collect(),
            unlocked: s.unlocked,
            muted: s.muted,
        }
    }

    fn record(&mut self, events: &[EventRecord]) {
        let Some(log) = self.log.as_mut() else {
            return;
        };
        if let Err(err) = events.iter().try_for_each(|e| log.record(e)) {
            tracing::warn!(session = %self.id, %err, "telemetry write failed; continuing without logging");
            self.log = None;
            self.broadcast(&ServerMessage::error(
                ErrorCode::TelemetryDegraded,
                format!("event log unavailable: {err}"),
            ));
        }
    }

    fn tick(&mut self) -> u64 {
        let t = self.next_tick;
        self.next_tick += 1;
        t
    }

    /// Attaches `conn`. Controllers whose name is already seated resume that seat.
    pub fn join(&mut self, conn: ConnId, outbox: Outbox, name: &str, role: Role) -> Result<(), ServerMessage> {
        let player_id = match role {
            Role::Display => None,
            Role::Controller => {
                if let Some(seated) = self.state.player_by_name(name) {
                    let id = seated.player_id;
                    self.members.retain(|m| m.player_id != Some(id));
                    Some(id)
                } else {
                    let joined = self.state.join_player(name).map_err(|e| engine_error(&e))?;
                    let event = self.recorder.join(now_ms(), &self.state, &joined);
                    self.record(&[event]);
                    Some(joined.player_id)
                }
            }
        };
        self.members.push(Member {
            conn,
            role,
            player_id,
            outbox,
        });
        if let Some(player_id) = player_id {
            let layer_id = self.state.player(player_id).expect("seated").layer_id;
            self.send_to(conn, &ServerMessage::Joined { player_id, layer_id });
        }
        self.broadcast(&self.state_message());
        Ok(())
    }

    pub fn press(&mut self, conn: ConnId, region: usize) -> Result<(), ServerMessage> {
        let member = self
            .members
            .iter()
            .find(|m| m.conn == conn)
            .ok_or_else(|| ServerMessage::error(ErrorCode::NotJoined, "join a session first"))?;
        let player_id = match (member.role, member.player_id) {
            (Role::Controller, Some(id)) => id,
            _ => {
                return Err(ServerMessage::error(
                    ErrorCode::Forbidden,
                    "displays cannot press regions",
                ))
            }
        };
        let tick = self.tick();
        let outcome = self
            .state
            .handle_press(player_id, region, tick)
            .map_err(|e| engine_error(&e))?;
        let events = self.recorder.press(now_ms(), &self.state, &outcome);
        self.record(&events);
        self.publish(&outcome);
        Ok(())
    }

    fn publish(&self, outcome: &PressOutcome) {
        self.broadcast(&ServerMessage::PressResult {
            player_id: outcome.player_id,
            region: outcome.region,
            color_hex: outcome.shown_color.hex(),
            matched: outcome.matched,
            audio_cue: outcome.audio_cue.map(|(layer_id, segment_index)| AudioCue {
                layer_id,
                segment_index,
            }),
        });
        if outcome.game_complete {
            let players: Vec<PlayerSummary> = self
                .state
                .players
                .iter()
                .map(|p| PlayerSummary {
                    player_id: p.player_id,
                    name: p.name.clone(),
                    presses: p.total_presses,
                })
                .collect();
            self.broadcast(&ServerMessage::GameComplete {
                summary: GameSummary {
                    unlocked: self.state.unlocked,
                    total_presses: players.iter().map(|p| p.presses).sum(),
                    players,
                },
            });
        } else if outcome.level_advanced {
            self.broadcast(&ServerMessage::LevelAdvanced {
                new_level: self.state.level,
                loop_segment_indices: outcome
                    .unlock
                    .as_ref()
                    .map(|u| u.segments.clone())
                    .unwrap_or_default(),
            });
        }
        self.broadcast(&self.state_message());
    }

    pub fn set_muted(&mut self, conn: ConnId, muted: bool) -> Result<(), ServerMessage> {
        if !self.members.iter().any(|m| m.conn == conn) {
            return Err(ServerMessage::error(ErrorCode::NotJoined, "join a session first"));
        }
        self.state.set_muted(muted);
        let event = self.recorder.mute_change(now_ms(), &self.state);
        self.record(&[event]);
        self.broadcast(&self.state_message());
        Ok(())
    }

    /// Detaches `conn`. A controller leaving before the game starts frees its seat.
    pub fn leave(&mut self, conn: ConnId) {
        let Some(pos) = self.members.iter().position(|m| m.conn == conn) else {
            return;
        };
        let member = self.members.remove(pos);
        if let (Some(player_id), Phase::Pairing) = (member.player_id, self.state.phase) {
            let _ = self.state.remove_player(player_id);
        }
        self.broadcast(&self.state_message());
    }

    pub fn error_to(&self, outbox: &Outbox, message: &ServerMessage) {
        Self::send(outbox, message);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tokio::sync::mpsc::{unbounded_channel, UnboundedReceiver};

    fn drain(rx: &mut UnboundedReceiver<String>) -> Vec<ServerMessage> {
        let mut out = Vec::new();
        while let Ok(text) = rx.try_recv() {
            out.push(serde_json::from_str(&text).unwrap());
        }
        out
    }

    #[test]
    fn log_file_names_are_sanitized() {
        assert_eq!(log_file_stem("../etc/passwd"), "___etc_passwd");
        assert_eq!(log_file_stem("room-1_a"), "room-1_a");
    }

    #[test]
    fn leaving_during_pairing_frees_the_seat() {
        let mut s = Session::new("p", GameConfig::new(1), None).unwrap();
        let (tx, mut rx) = unbounded_channel();
        s.join(1, tx.clone(), "ada", Role::Controller).unwrap();
        s.join(2, tx.clone(), "bo", Role::Controller).unwrap();
        s.leave(1);
        assert_eq!(s.state().players.len(), 1);
        s.join(3, tx, "cy", Role::Controller).unwrap();
        let joined: Vec<_> = drain(&mut rx)
            .into_iter()
            .filter_map(|m| match m {
                ServerMessage::Joined { player_id, .. } => Some(player_id),
                _ => None,
            })
            .collect();
        assert_eq!(joined, vec![0, 1, 0]);
    }

    #[test]
    fn unwritable_log_degrades_gracefully() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("not-a-dir");
        std::fs::write(&blocker, "").unwrap();
        let s = Session::new("x", GameConfig::new(1), Some(&blocker)).unwrap();
        assert!(!s.telemetry_enabled());
    }
}
