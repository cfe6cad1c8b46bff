//! Scripted players.

use std::fmt;
use std::str::FromStr;

use puzzlegram_core::model::NUM_REGIONS;
use puzzlegram_core::rng::{mix, SplitMix64};
use serde::{Deserialize, Serialize};

use crate::SimError;

const COIN_DOMAIN: u64 = 0xC011_4EC4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BotKind {
    /// Uniform over regions not yet tried this level.
    Random,
    /// Recalls the region of the reference color if it was ever revealed,
    /// otherwise explores regions it has never seen.
    Memory,
    /// Memory with probability `recall_probability` per decision, else Random.
    NoisyMemory { recall_probability: f64 },
}

impl BotKind {
    pub fn label(&self) -> String {
        match self {
            BotKind::Random => "random".into(),
            BotKind::Memory => "memory".into(),
            BotKind::NoisyMemory { recall_probability } => format!("noisy:{recall_probability}"),
        }
    }
}

impl fmt::Display for BotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for BotKind {
    type Err = SimError;

    /// `random`, `memory`, `noisy` (recall 0.8) or `noisy:<p>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SimError::BadStrategy(s.to_owned());
        match s.trim().split_once(':') {
            None => match s.trim() {
                "random" => Ok(BotKind::Random),
                "memory" => Ok(BotKind::Memory),
                "noisy" => Ok(BotKind::NoisyMemory {
                    recall_probability: 0.8,
                }),
                _ => Err(bad()),
            },
            Some(("noisy", p)) => {
                let p: f64 = p.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(bad());
                }
                Ok(BotKind::NoisyMemory {
                    recall_probability: p,
                })
            }
            Some(_) => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BotStrategy {
    pub kind: BotKind,
    pub rng_seed: u64,
}

/// What a bot can see on its own controller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    /// Palette index the level asks for.
    pub reference_color: u8,
    /// Color revealed at each region so far this game, if any.
    pub revealed: [Option<u8>; NUM_REGIONS],
    pub tried_this_level: [bool; NUM_REGIONS],
}

impl Observation {
    pub fn new(reference_color: u8) -> Self {
        Self {
            reference_color,
            revealed: [None; NUM_REGIONS],
            tried_this_level: [false; NUM_REGIONS],
        }
    }
}

#[derive(Debug, Clone)]
pub struct Bot {
    kind: BotKind,
    rng: SplitMix64,
    coin: SplitMix64,
}

impl Bot {
    pub fn new(strategy: BotStrategy) -> Self {
        Self {
            kind: strategy.kind,
            rng: SplitMix64::new(strategy.rng_seed),
            coin: SplitMix64::new(mix(strategy.rng_seed ^ COIN_DOMAIN)),
        }
    }

    pub fn kind(&self) -> BotKind {
        self.kind
    }

    pub fn decide(&mut self, obs: &Observation) -> Result<usize, SimError> {
        let recall = match self.kind {
            BotKind::Random => false,
            BotKind::Memory => true,
            // Separate coin stream, so recall_probability = 1 replays Memory exactly.
            BotKind::NoisyMemory { recall_probability } => {
                self.coin.next_f64() < recall_probability
            }
        };
        if recall {
            self.decide_from_memory(obs)
        } else {
            self.pick(obs, |r| !obs.tried_this_level[r])
        }
    }

    fn decide_from_memory(&mut self, obs: &Observation) -> Result<usize, SimError> {
        if let Some(region) = obs
            .revealed
            .iter()
            .position(|&c| c == Some(obs.reference_color))
        {
            return Ok(region);
        }
        self.pick(obs, |r| obs.revealed[r].is_none() && !obs.tried_this_level[r])
    }

    fn pick(&mut self, obs: &Observation, allowed: impl Fn(usize) -> bool) -> Result<usize, SimError> {
        let candidates: Vec<usize> = (0..NUM_REGIONS).filter(|&r| allowed(r)).collect();
        if candidates.is_empty() {
            return Err(SimError::NoCandidates {
                reference_color: obs.reference_color,
            });
        }
        Ok(candidates[self.rng.below(candidates.len() as u64) as usize])
    }
}

/// Standalone form of [`Bot::decide`].
pub fn bot_decide(bot: &mut Bot, observation: &Observation) -> Result<usize, SimError> {
    bot.decide(observation)
}
