//! Headless Monte Carlo driver: scripted bots play complete games against the
//! engine and the resulting telemetry is aggregated into reports.

use thiserror::Error;

pub mod bot;
pub mod harness;
pub mod report;

pub use bot::{bot_decide, Bot, BotKind, BotStrategy, Observation};
pub use harness::{play_game, run_simulation, run_trial, trial_seeds, write_logs, TrialLog};
pub use report::{report, SimReport, StrategySummary};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("unknown bot strategy `{0}` (expected random, memory, noisy or noisy:<p>)")]
    BadStrategy(String),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("bot has no untried region left for reference color {reference_color}")]
    NoCandidates { reference_color: u8 },
    #[error("player {player} tried every region on level {level} without a match")]
    Stuck { player: usize, level: usize },
    #[error(transparent)]
    Engine(#[from] puzzlegram_core::EngineError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
