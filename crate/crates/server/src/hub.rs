//! Routes client frames to sessions.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use puzzlegram_core::GameConfig;

use crate::protocol::{decode_message, ClientMessage, ErrorCode, ServerMessage};
use crate::session::{ConnId, Outbox, Session};

#[derive(Debug, Clone, Default)]
pub struct HubConfig {
    /// Pins every new session's seed; otherwise each session draws one from entropy.
    pub seed: Option<u64>,
    pub log_dir: Option<PathBuf>,
    pub manifest_path: Option<PathBuf>,
}

pub type SessionHandle = Arc<Mutex<Session>>;

/// Server side of one client socket.
#[derive(Debug)]
pub struct Connection {
    id: ConnId,
    outbox: Outbox,
    attached: Option<SessionHandle>,
}

impl Connection {
    pub fn id(&self) -> ConnId {
        self.id
    }

    pub fn session(&self) -> Option<&SessionHandle> {
        self.attached.as_ref()
    }
}

#[derive(Debug, Default)]
pub struct Hub {
    config: HubConfig,
    sessions: Mutex<HashMap<String, SessionHandle>>,
    next_conn: AtomicU64,
}

fn lock(session: &SessionHandle) -> std::sync::MutexGuard<'_, Session> {
    session.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

impl Hub {
    pub fn new(config: HubConfig) -> Self {
        Self {
            config,
            ..Default::default()
        }
    }

    pub fn connect(&self, outbox: Outbox) -> Connection {
        Connection {
            id: self.next_conn.fetch_add(1, Ordering::Relaxed),
            outbox,
            attached: None,
        }
    }

    pub fn session(&self, id: &str) -> Option<SessionHandle> {
        self.sessions.lock().unwrap().get(id).cloned()
    }

    pub fn session_ids(&self) -> Vec<String> {
        let mut ids: Vec<_> = self.sessions.lock().unwrap().keys().cloned().collect();
        ids.sort();
        ids
    }

    fn session_or_create(&self, id: &str) -> Result<SessionHandle, ServerMessage> {
        let mut sessions = self.sessions.lock().unwrap();
        if let Some(existing) = sessions.get(id) {
            return Ok(existing.clone());
        }
        let seed = self.config.seed.unwrap_or_else(rand::random);
        let mut config = GameConfig::new(seed);
        config.manifest_path = self.config.manifest_path.clone();
        let session = Session::new(id, config, self.config.log_dir.as_deref())
            .map_err(|e| ServerMessage::error(ErrorCode::BadMessage, e.to_string()))?;
        let handle = Arc::new(Mutex::new(session));
        sessions.insert(id.to_owned(), handle.clone());
        Ok(handle)
    }

    fn reply(conn: &Connection, message: &ServerMessage) {
        let _ = conn
            .outbox
            .send(crate::protocol::encode_message(message));
    }

    /// Decodes one frame and routes it. Malformed frames get a `bad_message`
    /// error on this connection and touch no session.
    pub fn handle_frame(&self, conn: &mut Connection, frame: &[u8]) {
        match decode_message(frame) {
            Ok(message) => self.route(conn, message),
            Err(err) => Self::reply(conn, &err.to_message()),
        }
    }

    pub fn route(&self, conn: &mut Connection, message: ClientMessage) {
        let result = match message {
            ClientMessage::Join {
                session_id,
                name,
                role,
            } => {
                if conn.attached.is_some() {
                    Err(ServerMessage::error(
                        ErrorCode::AlreadyJoined,
                        "connection already joined a session",
                    ))
                } else {
                    self.session_or_create(&session_id).and_then(|handle| {
                        lock(&handle).join(conn.id, conn.outbox.clone(), &name, role)?;
                        conn.attached = Some(handle);
                        Ok(())
                    })
                }
            }
            ClientMessage::Press { region, .. } => match &conn.attached {
                Some(handle) => lock(handle).press(conn.id, region),
                None => Err(ServerMessage::error(ErrorCode::NotJoined, "join a session first")),
            },
            ClientMessage::SetMuted { muted } => match &conn.attached {
                Some(handle) => lock(handle).set_muted(conn.id, muted),
                None => Err(ServerMessage::error(ErrorCode::NotJoined, "join a session first")),
            },
            ClientMessage::Leave {} => {
                self.disconnect(conn);
                Ok(())
            }
        };
        if let Err(message) = result {
            Self::reply(conn, &message);
        }
    }

    pub fn disconnect(&self, conn: &mut Connection) {
        if let Some(handle) = conn.attached.take() {
            lock(&handle).leave(conn.id);
        }
    }
}
