use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Split of a radar's frame of `chirps` into `episodes` equal episodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpisodeSchedule {
    chirps: usize,
    episodes: usize,
}

impl EpisodeSchedule {
    pub fn new(chirps: usize, episodes: usize) -> Result<Self> {
        if chirps == 0 || episodes == 0 {
            return Err(Error::invalid("chirps and episodes must be positive"));
        }
        if !chirps.is_multiple_of(episodes) {
            return Err(Error::invalid(format!(
                "{chirps} chirps per frame is not divisible by {episodes} episodes"
            )));
        }
        Ok(Self { chirps, episodes })
    }

    pub fn chirps(&self) -> usize {
        self.chirps
    }

    pub fn episodes(&self) -> usize {
        self.episodes
    }

    pub fn chirps_per_episode(&self) -> usize {
        self.chirps / self.episodes
    }

    /// Last chirp (one-based) of episode `tau` (one-based): `tau·K/𝒯`.
    pub fn boundary(&self, tau: usize) -> usize {
        tau * self.chirps_per_episode()
    }

    /// Zero-based chirp range of episode `tau` (one-based).
    pub fn episode_range(&self, tau: usize) -> std::ops::Range<usize> {
        self.boundary(tau - 1)..self.boundary(tau)
    }
}

/// Learning rate and exploration weight for episode `tau`:
/// `η = c_η·√(ln A/(τA))`, `γ = min(1, c_γ·√(ln A/(τA)))`.
pub fn schedule_params(tau: usize, actions: usize, c_eta: f64, c_gamma: f64) -> Result<(f64, f64)> {
    if tau == 0 || actions < 2 || !(c_eta > 0.0) || !(c_gamma > 0.0) {
        return Err(Error::invalid(format!(
            "schedule needs τ ≥ 1, A ≥ 2 and positive scales (τ={tau}, A={actions}, c_η={c_eta}, c_γ={c_gamma})"
        )));
    }
    let base = ((actions as f64).ln() / (tau as f64 * actions as f64)).sqrt();
    Ok((c_eta * base, (c_gamma * base).min(1.0)))
}
