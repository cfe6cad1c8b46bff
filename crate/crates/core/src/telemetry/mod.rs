//! Gameplay telemetry: an append-only JSONL event log, per-session metrics
//! derived from it, a cross-session exposure trend, and log replay.

mod event;
mod log;
mod metrics;
mod replay;
mod trend;

pub use self::event::{EventKind, EventRecord, EventRecorder};
pub use self::log::{read_log, read_log_file, EventLog, ParsedLog};
pub use self::metrics::{compute_session_metrics, LevelMetrics, PlayerEntropy, SessionMetrics};
pub use self::replay::{progress_events, replay, ReplayError, Replayed};
pub use self::trend::{
    exposure_trend, ols_slope, TrendError, TrendReport, BOOTSTRAP_RESAMPLES, DEFAULT_BOOTSTRAP_SEED,
    MIN_TREND_SESSIONS,
};
