//! WebSocket transport and static asset serving.

use std::io;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::IntoResponse;
use axum::routing::get;
use axum::Router;
use futures_util::{SinkExt, StreamExt};
use tokio::net::TcpListener;
use tokio::sync::mpsc::unbounded_channel;
use tower_http::services::{ServeDir, ServeFile};

use crate::hub::Hub;

/// `/ws` for clients; `/manifest.json` and `/assets/*` expose the song segments
/// when a manifest is configured.
pub fn router(hub: Arc<Hub>, manifest: Option<PathBuf>) -> Router {
    let mut app = Router::new()
        .route("/ws", get(upgrade))
        .route("/healthz", get(|| async { "ok" }))
        .with_state(hub);
    if let Some(manifest) = manifest {
        let dir = manifest
            .parent()
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        app = app
            .route_service("/manifest.json", ServeFile::new(manifest))
            .nest_service("/assets", ServeDir::new(dir));
    }
    app
}

pub async fn serve(listener: TcpListener, app: Router) -> io::Result<()> {
    axum::serve(listener, app).await
}

async fn upgrade(ws: WebSocketUpgrade, State(hub): State<Arc<Hub>>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| client_loop(socket, hub))
}

async fn client_loop(socket: WebSocket, hub: Arc<Hub>) {
    let (mut sink, mut stream) = socket.split();
    let (tx, mut rx) = unbounded_channel::<String>();
    let mut conn = hub.connect(tx);
    tracing::debug!(conn = conn.id(), "client connected");

    let writer = tokio::spawn(async move {
        while let Some(text) = rx.recv().await {
            if sink.send(Message::Text(text.into())).await.is_err() {
                break;
            }
        }
    });

    while let Some(Ok(message)) = stream.next().await {
        match message {
            Message::Text(text) => hub.handle_frame(&mut conn, text.as_bytes()),
            Message::Binary(bytes) => hub.handle_frame(&mut conn, &bytes),
            Message::Close(_) => break,
            Message::Ping(_) | Message::Pong(_) => {}
        }
    }

    hub.disconnect(&mut conn);
    tracing::debug!(conn = conn.id(), "client disconnected");
    writer.abort();
}
