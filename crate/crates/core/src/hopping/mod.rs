//! Per-radar subband schedulers, updated once per episode.
//!
//! Three policies are available: uniform random hopping (baseline), the
//! model-free exponential-weights scheduler in [`noregret`], and the
//! explore-then-commit equilibrium scheduler in [`nash`]. [`HoppingAgent`]
//! wraps all three behind one interface for the simulator.

pub mod nash;
pub mod noregret;
mod schedule;
mod stats;

pub use nash::{nash_commit, nash_explore_update, NashHopperConfig, NashHopperState, NashPhase};
pub use noregret::{
    hard_threshold, noregret_update, LossEstimate, NoRegretConfig, NoRegretState,
};
pub use schedule::{schedule_params, EpisodeSchedule};
pub use stats::{EpisodeStats, SubbandEstimate};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::MixedStrategy;

/// Uniform distribution over `actions` subbands.
pub fn uniform_policy(actions: usize) -> Result<MixedStrategy> {
    if actions == 0 {
        return Err(Error::invalid("uniform policy needs at least one subband"));
    }
    Ok(MixedStrategy::uniform(actions))
}

/// Draws a subband index from `strategy` by inverse transform sampling.
pub fn sample_subband<R: Rng + ?Sized>(strategy: &MixedStrategy, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in strategy.probs().iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}

/// Scheduling policy and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Policy {
    Uniform,
    Noregret(NoRegretConfig),
    Nash(NashHopperConfig),
}

impl Policy {
    pub fn name(&self) -> &'static str {
        match self {
            Policy::Uniform => "uniform",
            Policy::Noregret(_) => "noregret",
            Policy::Nash(_) => "nash",
        }
    }
}

/// A radar's scheduler state.
#[derive(Debug, Clone, PartialEq)]
pub enum HoppingAgent {
    Uniform(MixedStrategy),
    NoRegret(NoRegretState),
    Nash {
        state: NashHopperState,
        chirps_elapsed: usize,
    },
}

impl HoppingAgent {
    /// `chirps_per_episode` converts the Nash exploration length from
    /// episodes to chirps.
    pub fn new(
        policy: &Policy,
        player: usize,
        players: usize,
        actions: usize,
        chirps_per_episode: usize,
    ) -> Result<Self> {
        Ok(match policy {
            Policy::Uniform => HoppingAgent::Uniform(uniform_policy(actions)?),
            Policy::Noregret(cfg) => HoppingAgent::NoRegret(NoRegretState::new(actions, cfg.clone())?),
            Policy::Nash(cfg) => HoppingAgent::Nash {
                state: NashHopperState::new(player, players, actions, cfg, chirps_per_episode)?,
                chirps_elapsed: 0,
            },
        })
    }

    /// Strategy to sample from during the coming episode.
    pub fn strategy(&self) -> &MixedStrategy {
        match self {
            HoppingAgent::Uniform(s) => s,
            HoppingAgent::NoRegret(state) => state.current(),
            HoppingAgent::Nash { state, .. } => state.strategy(),
        }
    }

    /// Whether the agent reads other radars' statistics.
    pub fn needs_exchange(&self) -> bool {
        matches!(self, HoppingAgent::Nash { state, .. } if state.phase() == NashPhase::Explore)
    }

    /// Episode-boundary update. `all` carries every radar's statistics for
    /// agents that exchange information; others only read `own`.
    pub fn end_episode(
        &mut self,
        chirps: usize,
        own: &EpisodeStats,
        all: &[Option<&EpisodeStats>],
    ) -> Result<()> {
        match self {
            HoppingAgent::Uniform(_) => {}
            HoppingAgent::NoRegret(state) => *state = noregret_update(state, own)?,
            HoppingAgent::Nash {
                state,
                chirps_elapsed,
            } => {
                if state.phase() == NashPhase::Explore {
                    *chirps_elapsed += chirps;
                    *state = nash_explore_update(state, all)?;
                    if *chirps_elapsed >= state.explore_chirps() {
                        *state = nash_commit(state, *chirps_elapsed)?;
                    }
                }
            }
        }
        Ok(())
    }
}
