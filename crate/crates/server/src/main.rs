use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;
use puzzlegram_audio::validate_manifest_file;
use puzzlegram_server::transport::{router, serve};
use puzzlegram_server::{Hub, HubConfig};
use tokio::net::TcpListener;
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "puzzlegram-server", about = "Host Puzzlegram sessions")]
struct Args {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Song manifest whose segments are served to clients.
    #[arg(long)]
    manifest: PathBuf,
    /// Pin the seed of every session (reproducible demos and tests).
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for per-session JSONL event logs.
    #[arg(long, env = "PUZZLEGRAM_LOG_DIR")]
    log_dir: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .init();
    let args = Args::parse();

    let report = validate_manifest_file(&args.manifest)?;
    for violation in &report.violations {
        tracing::warn!(?violation, "manifest problem");
    }

    let hub = Arc::new(Hub::new(HubConfig {
        seed: args.seed,
        log_dir: args.log_dir,
        manifest_path: Some(args.manifest.clone()),
    }));
    let addr = SocketAddr::from(([0, 0, 0, 0], args.port));
    let listener = TcpListener::bind(addr).await?;
    tracing::info!(%addr, "listening");
    serve(listener, router(hub, Some(args.manifest))).await?;
    Ok(())
}
