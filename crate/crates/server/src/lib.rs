//! Networked front door for Puzzlegram.
//!
//! Controllers and displays connect over a WebSocket and exchange the JSON
//! messages in [`protocol`]. The [`hub::Hub`] routes each connection to a
//! [`session::Session`], which owns one engine and serializes every mutation.

pub mod hub;
pub mod protocol;
pub mod session;
pub mod transport;

pub use hub::{Connection, Hub, HubConfig};
pub use protocol::{
    decode_message, encode_client_message, encode_message, ClientMessage, ErrorCode,
    ProtocolError, Role, ServerMessage,
};
pub use session::Session;
