use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::event::EventKind;
use super::log::ParsedLog;
use crate::model::NUM_REGIONS;

/// Search effort of one player on one level.
///
/// Only presses up to and including the matching press count; presses made
/// while waiting for teammates are exploration of an already solved level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelMetrics {
    pub player_id: usize,
    pub level: usize,
    /// Milliseconds from the level's start to this player's match; absent if
    /// the log ends before the player matched.
    pub time_to_match_ms: Option<u64>,
    pub presses: u32,
    pub distinct_regions_touched: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerEntropy {
    pub player_id: usize,
    /// Shannon entropy in bits of the player's press distribution over regions.
    pub bits: f64,
    pub presses: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionMetrics {
    pub session_id: String,
    pub levels: Vec<LevelMetrics>,
    pub total_duration_ms: u64,
    pub levels_completed: usize,
    pub exploration_entropy: Vec<PlayerEntropy>,
    pub parse_errors: usize,
}

impl SessionMetrics {
    pub fn level(&self, player_id: usize, level: usize) -> Option<&LevelMetrics> {
        self.levels
            .iter()
            .find(|m| m.player_id == player_id && m.level == level)
    }
}

#[derive(Default)]
struct LevelAccumulator {
    presses: u32,
    regions: BTreeSet<usize>,
    matched_at: Option<u64>,
}

/// Level `k` starts at the event that revealed its reference color: the join
/// that activated the session for level 1, the `level_advance` of level `k-1`
/// otherwise.
pub fn compute_session_metrics(log: &ParsedLog) -> SessionMetrics {
    let events = &log.events;
    let mut level_start: BTreeMap<usize, u64> = BTreeMap::new();
    let mut per_level: BTreeMap<(usize, usize), LevelAccumulator> = BTreeMap::new();
    let mut region_counts: BTreeMap<usize, [u32; NUM_REGIONS]> = BTreeMap::new();
    let mut levels_completed = 0;

    for event in events {
        match event.event {
            EventKind::Join if event.level == 1 => {
                level_start.entry(1).or_insert(event.ts_ms);
            }
            EventKind::LevelAdvance => {
                levels_completed += 1;
                level_start.entry(event.level + 1).or_insert(event.ts_ms);
            }
            EventKind::Complete => levels_completed += 1,
            EventKind::Press => {
                let (Some(player), Some(region)) = (event.player_id, event.region) else {
                    continue;
                };
                if let Some(counts) = region_counts
                    .entry(player)
                    .or_insert([0; NUM_REGIONS])
                    .get_mut(region)
                {
                    *counts += 1;
                }
                let acc = per_level.entry((player, event.level)).or_default();
                if acc.matched_at.is_none() {
                    acc.presses += 1;
                    acc.regions.insert(region);
                }
            }
            EventKind::Match => {
                if let Some(player) = event.player_id {
                    let acc = per_level.entry((player, event.level)).or_default();
                    acc.matched_at.get_or_insert(event.ts_ms);
                }
            }
            EventKind::Join | EventKind::MuteChange => {}
        }
    }

    let levels = per_level
        .into_iter()
        .map(|((player_id, level), acc)| LevelMetrics {
            player_id,
            level,
            time_to_match_ms: acc.matched_at.map(|ts| {
                let start = level_start.get(&level).copied().unwrap_or(ts);
                ts.saturating_sub(start)
            }),
            presses: acc.presses,
            distinct_regions_touched: acc.regions.len() as u32,
        })
        .collect();

    let exploration_entropy = region_counts
        .into_iter()
        .map(|(player_id, counts)| PlayerEntropy {
            player_id,
            bits: shannon_entropy_bits(&counts),
            presses: counts.iter().sum(),
        })
        .collect();

    let total_duration_ms = match (events.first(), events.last()) {
        (Some(first), Some(last)) => last.ts_ms.saturating_sub(first.ts_ms),
        _ => 0,
    };

    SessionMetrics {
        session_id: events
            .first()
            .map(|e| e.session_id.clone())
            .unwrap_or_default(),
        levels,
        total_duration_ms,
        levels_completed,
        exploration_entropy,
        parse_errors: log.parse_errors,
    }
}

fn shannon_entropy_bits(counts: &[u32]) -> f64 {
    let total: u32 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0)
}
