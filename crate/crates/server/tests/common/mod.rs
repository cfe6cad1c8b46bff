//! Helpers shared by the server integration tests.
#![allow(dead_code)]

use puzzlegram_core::rng::SplitMix64;
use puzzlegram_server::{
    decode_message, encode_client_message, ClientMessage, Connection, Hub, HubConfig, Role,
    ServerMessage,
};
use tokio::sync::mpsc::{unbounded_channel, UnboundedReceiver};

pub struct Client {
    pub conn: Connection,
    rx: UnboundedReceiver<String>,
}

impl Client {
    pub fn connect(hub: &Hub) -> Self {
        let (tx, rx) = unbounded_channel();
        Self {
            conn: hub.connect(tx),
            rx,
        }
    }

    pub fn send(&mut self, hub: &Hub, message: ClientMessage) {
        let frame = encode_client_message(&message);
        hub.handle_frame(&mut self.conn, frame.as_bytes());
    }

    pub fn join(&mut self, hub: &Hub, session: &str, name: &str, role: Role) {
        self.send(
            hub,
            ClientMessage::Join {
                session_id: session.into(),
                name: name.into(),
                role,
            },
        );
    }

    pub fn press(&mut self, hub: &Hub, region: usize) {
        self.send(
            hub,
            ClientMessage::Press {
                region,
                client_ts_ms: 0,
            },
        );
    }

    /// Frames received so far, as sent.
    pub fn frames(&mut self) -> Vec<String> {
        let mut out = Vec::new();
        while let Ok(text) = self.rx.try_recv() {
            out.push(text);
        }
        out
    }

    pub fn messages(&mut self) -> Vec<ServerMessage> {
        self.frames()
            .iter()
            .map(|t| serde_json::from_str(t).unwrap())
            .collect()
    }
}

pub fn pinned_hub(seed: u64) -> Hub {
    Hub::new(HubConfig {
        seed: Some(seed),
        ..Default::default()
    })
}

/// `(player_id, region)` of every press_result in a frame stream.
pub fn press_order(frames: &[String]) -> Vec<(usize, usize)> {
    frames
        .iter()
        .filter_map(|t| match serde_json::from_str(t).unwrap() {
            ServerMessage::PressResult {
                player_id, region, ..
            } => Some((player_id, region)),
            _ => None,
        })
        .collect()
}

/// Display frames produced by applying `presses` one at a time to a fresh hub:
/// the display joins first, then `names` join as controllers in order.
pub fn sequential_display_stream(
    seed: u64,
    session: &str,
    names: &[&str],
    presses: &[(usize, usize)],
) -> Vec<String> {
    let hub = pinned_hub(seed);
    let mut display = Client::connect(&hub);
    display.join(&hub, session, "display", Role::Display);
    let mut players: Vec<Client> = names
        .iter()
        .map(|name| {
            let mut c = Client::connect(&hub);
            c.join(&hub, session, name, Role::Controller);
            c
        })
        .collect();
    for &(player, region) in presses {
        players[player].press(&hub, region);
    }
    display.frames()
}

const VALID_FRAMES: [&str; 5] = [
    r#"{"type":"join","session_id":"s","name":"n","role":"controller"}"#,
    r#"{"type":"press","region":3,"client_ts_ms":17}"#,
    r#"{"type":"set_muted","muted":true}"#,
    r#"{"type":"leave"}"#,
    r#"{"type":"press","region":15,"client_ts_ms":0}"#,
];

const HOSTILE_PIECES: [&str; 14] = [
    "\"region\":16",
    "\"region\":-1",
    "\"region\":1e3",
    "\"region\":\"3\"",
    "\"type\":\"PRESS\"",
    "\"type\":null",
    "\"role\":\"admin\"",
    "\"muted\":1",
    "}}}",
    "[",
    "\u{0}",
    "NaN",
    "\"client_ts_ms\":-5",
    "\"region\":18446744073709551617",
];

/// `count` seeded frames, each guaranteed to be rejected by the decoder.
pub fn malformed_frames(seed: u64, count: usize) -> Vec<Vec<u8>> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut frame = VALID_FRAMES[rng.below(VALID_FRAMES.len() as u64) as usize]
            .as_bytes()
            .to_vec();
        for _ in 0..=rng.below(3) {
            let len = frame.len() as u64;
            let at = rng.below(len) as usize;
            match rng.below(7) {
                0 => frame[at] ^= 1 << rng.below(8),
                1 => frame.truncate(at),
                2 => {
                    frame.remove(at);
                }
                3 => frame.insert(at, rng.below(256) as u8),
                4 => {
                    let piece = HOSTILE_PIECES[rng.below(HOSTILE_PIECES.len() as u64) as usize];
                    frame.splice(at..at, piece.bytes());
                }
                5 => {
                    // swap a valid body for a hostile field value
                    let piece = HOSTILE_PIECES[rng.below(HOSTILE_PIECES.len() as u64) as usize];
                    frame = format!(r#"{{"type":"press",{piece},"client_ts_ms":1}}"#).into_bytes();
                }
                _ => frame.extend(std::iter::repeat_n(b' ', 16 * 1024)),
            }
            if frame.is_empty() {
                break;
            }
        }
        if decode_message(&frame).is_err() {
            out.push(frame);
        }
    }
    out
}
