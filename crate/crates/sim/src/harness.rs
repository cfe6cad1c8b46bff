use std::fs;
use std::path::Path;

use puzzlegram_core::model::NUM_REGIONS;
use puzzlegram_core::rng::{mix, SplitMix64};
use puzzlegram_core::telemetry::{EventLog, EventRecord, EventRecorder};
use puzzlegram_core::{GameConfig, Phase, SessionState};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bot::{Bot, BotKind, BotStrategy, Observation};
use crate::SimError;

/// One played game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialLog {
    pub trial: usize,
    pub game_seed: u64,
    pub strategies: [BotStrategy; 3],
    /// Telemetry with `ts_ms` equal to the logical tick.
    pub events: Vec<EventRecord>,
}

/// Game and bot seeds for a trial, independent of how trials are scheduled.
pub fn trial_seeds(master_seed: u64, trial: usize) -> (u64, [u64; 3]) {
    let mut rng = SplitMix64::new(mix(master_seed ^ mix(trial as u64 + 1)));
    let game = rng.next_u64();
    (game, [rng.next_u64(), rng.next_u64(), rng.next_u64()])
}

/// Plays one complete game with three bots polled round-robin, one press per
/// turn, skipping players who have already matched this level.
pub fn play_game(
    config: GameConfig,
    strategies: [BotStrategy; 3],
    session_id: &str,
) -> Result<Vec<EventRecord>, SimError> {
    let mut state = SessionState::new(config)?;
    let recorder = EventRecorder::new(session_id);
    let mut events = Vec::new();
    for player in 0..3 {
        let joined = state.join_player(&format!("bot{player}"))?;
        events.push(recorder.join(0, &state, &joined));
    }

    let mut bots = strategies.map(Bot::new);
    let reference = state.reference_index().expect("active after three joins");
    let mut observations: [Observation; 3] = std::array::from_fn(|_| Observation::new(reference));
    let mut tick = 0u64;
    let mut turn = 0usize;

    while state.phase == Phase::Active {
        let player = turn % 3;
        turn += 1;
        if state.player(player)?.matched {
            continue;
        }
        let obs = &mut observations[player];
        if obs.tried_this_level.iter().filter(|&&t| t).count() >= NUM_REGIONS {
            return Err(SimError::Stuck {
                player,
                level: state.level,
            });
        }
        let region = bots[player].decide(obs)?;
        tick += 1;
        let outcome = state.handle_press(player, region, tick)?;
        obs.revealed[region] = Some(outcome.shown_color_index);
        obs.tried_this_level[region] = true;
        events.extend(recorder.press(tick, &state, &outcome));

        if outcome.level_advanced && state.phase == Phase::Active {
            let next = state.reference_index().expect("active");
            for o in &mut observations {
                o.reference_color = next;
                o.tried_this_level = [false; NUM_REGIONS];
            }
        }
    }
    Ok(events)
}

pub fn run_trial(
    kinds: &[BotKind; 3],
    trial: usize,
    master_seed: u64,
) -> Result<TrialLog, SimError> {
    let (game_seed, bot_seeds) = trial_seeds(master_seed, trial);
    let strategies: [BotStrategy; 3] = std::array::from_fn(|i| BotStrategy {
        kind: kinds[i],
        rng_seed: bot_seeds[i],
    });
    let events = play_game(
        GameConfig::new(game_seed),
        strategies,
        &format!("sim-{master_seed}-{trial:05}"),
    )?;
    Ok(TrialLog {
        trial,
        game_seed,
        strategies,
        events,
    })
}

/// Plays `trials` independent games. Output depends only on the arguments.
pub fn run_simulation(
    kinds: &[BotKind; 3],
    trials: usize,
    master_seed: u64,
) -> Result<Vec<TrialLog>, SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    (0..trials)
        .into_par_iter()
        .map(|t| run_trial(kinds, t, master_seed))
        .collect()
}

/// Writes one `<session_id>.jsonl` file per trial into `dir`.
pub fn write_logs(logs: &[TrialLog], dir: &Path) -> Result<(), SimError> {
    fs::create_dir_all(dir)?;
    for log in logs {
        let Some(first) = log.events.first() else {
            continue;
        };
        let path = dir.join(format!("{}.jsonl", first.session_id));
        let _ = fs::remove_file(&path);
        let mut out = EventLog::open(&path)?;
        for event in &log.events {
            out.record(event)?;
        }
    }
    Ok(())
}
