use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::metrics::SessionMetrics;
use crate::model::NUM_LEVELS;
use crate::rng::SplitMix64;

pub const MIN_TREND_SESSIONS: usize = 30;
pub const BOOTSTRAP_RESAMPLES: usize = 1000;
pub const DEFAULT_BOOTSTRAP_SEED: u64 = 0xB007;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrendError {
    #[error("exposure trend needs at least {MIN_TREND_SESSIONS} sessions, got {0}")]
    InsufficientSessions(usize),
}

/// How search effort changes with level index across many sessions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub sessions: usize,
    /// Mean presses-to-match at levels 1..=16 (index 0 is level 1).
    pub mean_presses: Vec<f64>,
    /// Least-squares slope of mean presses against level index.
    pub slope: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub resamples: usize,
    pub bootstrap_seed: u64,
}

impl TrendReport {
    pub fn ci_contains_zero(&self) -> bool {
        self.ci_low <= 0.0 && 0.0 <= self.ci_high
    }
}

/// Per-session sums and counts of matched presses for each level.
struct LevelTotals {
    sums: [f64; NUM_LEVELS],
    counts: [f64; NUM_LEVELS],
}

impl LevelTotals {
    fn of(metrics: &SessionMetrics) -> Self {
        let mut totals = Self {
            sums: [0.0; NUM_LEVELS],
            counts: [0.0; NUM_LEVELS],
        };
        for m in &metrics.levels {
            if m.time_to_match_ms.is_some() && (1..=NUM_LEVELS).contains(&m.level) {
                totals.sums[m.level - 1] += m.presses as f64;
                totals.counts[m.level - 1] += 1.0;
            }
        }
        totals
    }
}

fn means<'a>(sample: impl Iterator<Item = &'a LevelTotals>) -> Vec<f64> {
    let mut sums = [0.0; NUM_LEVELS];
    let mut counts = [0.0; NUM_LEVELS];
    for t in sample {
        for k in 0..NUM_LEVELS {
            sums[k] += t.sums[k];
            counts[k] += t.counts[k];
        }
    }
    (0..NUM_LEVELS)
        .map(|k| if counts[k] > 0.0 { sums[k] / counts[k] } else { f64::NAN })
        .collect()
}

/// Least-squares slope of `ys[i]` against `i + 1`, skipping NaN entries.
pub fn ols_slope(ys: &[f64]) -> f64 {
    let points: Vec<(f64, f64)> = ys
        .iter()
        .enumerate()
        .filter(|(_, y)| y.is_finite())
        .map(|(i, &y)| ((i + 1) as f64, y))
        .collect();
    let n = points.len() as f64;
    if points.len() < 2 {
        return f64::NAN;
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    sxy / sxx
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let rank = q * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (rank - lo as f64)
}

/// Slope with a percentile bootstrap 95% CI, resampling whole sessions.
pub fn exposure_trend(sessions: &[SessionMetrics], seed: u64) -> Result<TrendReport, TrendError> {
    if sessions.len() < MIN_TREND_SESSIONS {
        return Err(TrendError::InsufficientSessions(sessions.len()));
    }
    let totals: Vec<LevelTotals> = sessions.iter().map(LevelTotals::of).collect();
    let mean_presses = means(totals.iter());
    let slope = ols_slope(&mean_presses);

    let mut rng = SplitMix64::new(seed);
    let n = totals.len() as u64;
    let mut slopes: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| {
            let resample = (0..n).map(|_| &totals[rng.below(n) as usize]);
            ols_slope(&means(resample))
        })
        .filter(|s| s.is_finite())
        .collect();
    slopes.sort_by(f64::total_cmp);
    let (ci_low, ci_high) = if slopes.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        (percentile(&slopes, 0.025), percentile(&slopes, 0.975))
    };

    Ok(TrendReport {
        sessions: sessions.len(),
        mean_presses,
        slope,
        ci_low,
        ci_high,
        resamples: BOOTSTRAP_RESAMPLES,
        bootstrap_seed: seed,
    })
}
