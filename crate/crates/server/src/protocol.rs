//! Wire protocol: one UTF-8 JSON object per frame, discriminated by `"type"`.
//!
//! Encoding is canonical: `type` first, remaining keys in declaration order,
//! colors as uppercase `#RRGGBB`, no floating-point values.

use puzzlegram_core::model::NUM_REGIONS;
use puzzlegram_core::{LayerId, Phase};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Frames larger than this are rejected before parsing.
pub const MAX_FRAME_BYTES: usize = 16 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Controller,
    Display,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMessage {
    Join {
        session_id: String,
        name: String,
        role: Role,
    },
    Press {
        region: usize,
        client_ts_ms: u64,
    },
    SetMuted {
        muted: bool,
    },
    Leave {},
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerStatus {
    pub player_id: usize,
    pub name: String,
    pub matched: bool,
    pub presses_this_level: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AudioCue {
    pub layer_id: LayerId,
    pub segment_index: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerSummary {
    pub player_id: usize,
    pub name: String,
    pub presses: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSummary {
    pub unlocked: usize,
    pub total_presses: u32,
    pub players: Vec<PlayerSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    BadMessage,
    AlreadyJoined,
    NotJoined,
    Forbidden,
    SessionFull,
    NotStarted,
    GameOver,
    UnknownPlayer,
    TelemetryDegraded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Joined {
        player_id: usize,
        layer_id: LayerId,
    },
    State {
        phase: Phase,
        level: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reference_color_hex: Option<String>,
        players: Vec<PlayerStatus>,
        unlocked: usize,
        muted: bool,
    },
    PressResult {
        player_id: usize,
        region: usize,
        color_hex: String,
        matched: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        audio_cue: Option<AudioCue>,
    },
    LevelAdvanced {
        new_level: usize,
        loop_segment_indices: Vec<u8>,
    },
    GameComplete {
        summary: GameSummary,
    },
    Error {
        code: ErrorCode,
        message: String,
    },
}

impl ServerMessage {
    pub fn error(code: ErrorCode, message: impl Into<String>) -> Self {
        ServerMessage::Error {
            code,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("bad_message: {0}")]
pub struct ProtocolError(pub String);

impl ProtocolError {
    pub fn code(&self) -> ErrorCode {
        ErrorCode::BadMessage
    }

    pub fn to_message(&self) -> ServerMessage {
        ServerMessage::error(self.code(), self.0.clone())
    }
}

pub fn decode_message(bytes: &[u8]) -> Result<ClientMessage, ProtocolError> {
    if bytes.len() > MAX_FRAME_BYTES {
        return Err(ProtocolError(format!(
            "frame of {} bytes exceeds {MAX_FRAME_BYTES}",
            bytes.len()
        )));
    }
    let text = std::str::from_utf8(bytes).map_err(|e| ProtocolError(e.to_string()))?;
    let message: ClientMessage =
        serde_json::from_str(text).map_err(|e| ProtocolError(e.to_string()))?;
    if let ClientMessage::Press { region, .. } = message {
        if region >= NUM_REGIONS {
            return Err(ProtocolError(format!(
                "region {region} out of range 0..{NUM_REGIONS}"
            )));
        }
    }
    Ok(message)
}

pub fn encode_message(message: &ServerMessage) -> String {
    serde_json::to_string(message).expect("server messages always serialize")
}

/// Canonical form of a client message, as a client library should send it.
pub fn encode_client_message(message: &ClientMessage) -> String {
    serde_json::to_string(message).expect("client messages always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_a_press() {
        assert_eq!(
            decode_message(br#"{"type":"press","region":7,"client_ts_ms":1}"#).unwrap(),
            ClientMessage::Press {
                region: 7,
                client_ts_ms: 1
            }
        );
    }

    #[test]
    fn rejects_out_of_range_region() {
        let err = decode_message(br#"{"type":"press","region":16,"client_ts_ms":1}"#).unwrap_err();
        assert_eq!(err.code(), ErrorCode::BadMessage);
    }

    #[test]
    fn rejects_unknown_type_and_missing_fields() {
        for frame in [
            &br#"{"type":"shout","region":1}"#[..],
            br#"{"type":"join","name":"x","role":"controller"}"#,
            br#"{"type":"set_muted","muted":"yes"}"#,
            br#"{"region":1,"client_ts_ms":1}"#,
            br#"[1,2]"#,
            b"\xff\xfe",
        ] {
            assert!(decode_message(frame).is_err(), "{:?}", String::from_utf8_lossy(frame));
        }
    }

    #[test]
    fn ignores_unknown_fields() {
        assert_eq!(
            decode_message(br#"{"type":"leave","extra":{"a":1}}"#).unwrap(),
            ClientMessage::Leave {}
        );
    }

    #[test]
    fn error_frames_carry_code_and_text() {
        let text = encode_message(&ServerMessage::error(ErrorCode::SessionFull, "three players already"));
        assert_eq!(
            text,
            r#"{"type":"error","code":"session_full","message":"three players already"}"#
        );
    }

    #[test]
    fn oversized_frames_are_rejected() {
        let big = format!(r#"{{"type":"leave","pad":"{}"}}"#, "x".repeat(MAX_FRAME_BYTES));
        assert!(decode_message(big.as_bytes()).is_err());
    }
}
