use std::collections::BTreeMap;
use std::io::Write;

use puzzlegram_core::model::NUM_LEVELS;
use puzzlegram_core::telemetry::{
    compute_session_metrics, exposure_trend, EventKind, ParsedLog, SessionMetrics, TrendReport,
    DEFAULT_BOOTSTRAP_SEED, MIN_TREND_SESSIONS,
};
use serde::{Deserialize, Serialize};

use crate::harness::TrialLog;
use crate::SimError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub strategy: String,
    /// Player slots (summed over trials) that ran this strategy.
    pub player_games: usize,
    /// Mean presses-to-match per level, index 0 = level 1.
    pub mean_presses: Vec<f64>,
    pub stddev_presses: Vec<f64>,
    /// Present once there are enough trials for a bootstrap.
    pub trend: Option<TrendReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub trials: usize,
    pub strategies: Vec<StrategySummary>,
    pub mean_session_presses: f64,
    pub completion_rate: f64,
}

impl SimReport {
    pub fn strategy(&self, label: &str) -> Option<&StrategySummary> {
        self.strategies.iter().find(|s| s.strategy == label)
    }

    pub fn write_json(&self, out: impl Write) -> serde_json::Result<()> {
        serde_json::to_writer_pretty(out, self)
    }

    /// One row per strategy and level.
    pub fn write_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["strategy", "level", "mean_presses", "stddev_presses"])?;
        for s in &self.strategies {
            for level in 0..NUM_LEVELS {
                w.write_record([
                    s.strategy.clone(),
                    (level + 1).to_string(),
                    format!("{:.6}", s.mean_presses[level]),
                    format!("{:.6}", s.stddev_presses[level]),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn mean_and_stddev(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Metrics of one trial restricted to the given player slots.
fn restrict(metrics: &SessionMetrics, players: &[usize]) -> SessionMetrics {
    SessionMetrics {
        levels: metrics
            .levels
            .iter()
            .filter(|m| players.contains(&m.player_id))
            .cloned()
            .collect(),
        ..metrics.clone()
    }
}

pub fn report(logs: &[TrialLog]) -> Result<SimReport, SimError> {
    if logs.is_empty() {
        return Err(SimError::NoTrials);
    }

    // strategy label → per-trial metrics restricted to that strategy's players
    let mut by_strategy: BTreeMap<String, Vec<SessionMetrics>> = BTreeMap::new();
    let mut completed = 0usize;
    let mut total_presses = 0usize;
    for log in logs {
        let metrics = compute_session_metrics(&ParsedLog {
            events: log.events.clone(),
            parse_errors: 0,
        });
        if log.events.iter().any(|e| e.event == EventKind::Complete) {
            completed += 1;
        }
        total_presses += log
            .events
            .iter()
            .filter(|e| e.event == EventKind::Press)
            .count();

        let mut slots: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (player, s) in log.strategies.iter().enumerate() {
            slots.entry(s.kind.label()).or_default().push(player);
        }
        for (label, players) in slots {
            by_strategy
                .entry(label)
                .or_default()
                .push(restrict(&metrics, &players));
        }
    }

    let strategies = by_strategy
        .into_iter()
        .map(|(strategy, sessions)| {
            let mut per_level: Vec<Vec<f64>> = vec![Vec::new(); NUM_LEVELS];
            let mut player_games = 0;
            for s in &sessions {
                player_games += s
                    .levels
                    .iter()
                    .filter(|m| m.level == 1)
                    .count();
                for m in &s.levels {
                    if m.time_to_match_ms.is_some() && (1..=NUM_LEVELS).contains(&m.level) {
                        per_level[m.level - 1].push(m.presses as f64);
                    }
                }
            }
            let (mean_presses, stddev_presses) =
                per_level.iter().map(|v| mean_and_stddev(v)).unzip();
            let trend = (sessions.len() >= MIN_TREND_SESSIONS)
                .then(|| exposure_trend(&sessions, DEFAULT_BOOTSTRAP_SEED).ok())
                .flatten();
            StrategySummary {
                strategy,
                player_games,
                mean_presses,
                stddev_presses,
                trend,
            }
        })
        .collect();

    Ok(SimReport {
        trials: logs.len(),
        strategies,
        mean_session_presses: total_presses as f64 / logs.len() as f64,
        completion_rate: completed as f64 / logs.len() as f64,
    })
}
