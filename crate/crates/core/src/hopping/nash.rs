//! Explore-then-commit hopping toward a welfare-maximizing Nash equilibrium.
//!
//! During exploration every radar shares its episode statistics. Each agent
//! keeps an estimated utility table for all radars, rewrites the cells the
//! latest statistics cover, and resamples from the welfare-maximizing
//! equilibrium of that table. After `k_e` chirps the agent freezes its
//! slice of that equilibrium.

use serde::{Deserialize, Serialize};

use super::EpisodeStats;
use crate::error::{Error, Result};
use crate::game::{solve_nash_welfare_max, MixedStrategy, NashSearch, StrategyProfile, UtilityTable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NashHopperConfig {
    /// Exploration length in episodes.
    pub explore_episodes: usize,
    /// Initial value (dB) of every estimated cell.
    pub pessimistic_floor_db: f64,
    /// Restrict the equilibrium search to pure profiles.
    pub pure_only: bool,
}

impl Default for NashHopperConfig {
    fn default() -> Self {
        Self {
            explore_episodes: 10,
            pessimistic_floor_db: -10.0,
            pure_only: false,
        }
    }
}

impl NashHopperConfig {
    pub fn validate(&self) -> Vec<String> {
        let mut errors = Vec::new();
        if self.explore_episodes == 0 {
            errors.push("explore_episodes must be at least 1".to_string());
        }
        if !self.pessimistic_floor_db.is_finite() {
            errors.push("pessimistic_floor_db must be finite".to_string());
        }
        errors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NashPhase {
    Explore,
    Commit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashHopperState {
    player: usize,
    phase: NashPhase,
    explore_chirps: usize,
    search: NashSearch,
    estimated: UtilityTable,
    exploratory: StrategyProfile,
    committed: Option<MixedStrategy>,
}

impl NashHopperState {
    pub fn new(
        player: usize,
        players: usize,
        actions: usize,
        config: &NashHopperConfig,
        chirps_per_episode: usize,
    ) -> Result<Self> {
        let errors = config.validate();
        if !errors.is_empty() {
            return Err(Error::Validation(errors));
        }
        if player >= players {
            return Err(Error::invalid(format!("player {player} of {players}")));
        }
        let search = if config.pure_only {
            NashSearch::PureOnly
        } else {
            NashSearch::default_for(players)
        };
        Ok(Self {
            player,
            phase: NashPhase::Explore,
            explore_chirps: config.explore_episodes * chirps_per_episode,
            search,
            estimated: UtilityTable::constant(players, actions, config.pessimistic_floor_db)?,
            exploratory: StrategyProfile::new(vec![MixedStrategy::uniform(actions); players])?,
            committed: None,
        })
    }

    pub fn phase(&self) -> NashPhase {
        self.phase
    }

    /// Exploration length `k_e` in chirps.
    pub fn explore_chirps(&self) -> usize {
        self.explore_chirps
    }

    pub fn estimated_table(&self) -> &UtilityTable {
        &self.estimated
    }

    pub fn exploratory_profile(&self) -> &StrategyProfile {
        &self.exploratory
    }

    pub fn committed(&self) -> Option<&MixedStrategy> {
        self.committed.as_ref()
    }

    /// Strategy this radar samples from right now.
    pub fn strategy(&self) -> &MixedStrategy {
        self.committed
            .as_ref()
            .unwrap_or_else(|| self.exploratory.strategy(self.player))
    }
}

/// Writes the latest statistics of all radars into the estimated table and
/// recomputes the exploratory profile.
pub fn nash_explore_update(
    state: &NashHopperState,
    all_stats: &[Option<&EpisodeStats>],
) -> Result<NashHopperState> {
    if state.phase != NashPhase::Explore {
        return Err(Error::Sequencing("exploration update after commit".into()));
    }
    let players = state.estimated.players();
    let actions = state.estimated.actions();
    if all_stats.len() != players {
        return Err(Error::Communication(format!(
            "expected statistics from {players} radars, received {}",
            all_stats.len()
        )));
    }
    if let Some(missing) = all_stats.iter().position(Option::is_none) {
        return Err(Error::Communication(format!("no statistics from radar {missing}")));
    }
    let mut table = state.estimated.clone();
    let space = table.space();
    for (player, stats) in all_stats.iter().map(|s| s.expect("checked above")).enumerate() {
        if stats.actions() != actions {
            return Err(Error::invalid(format!(
                "radar {player} reports {} subbands, expected {actions}",
                stats.actions()
            )));
        }
        for index in 0..space.size() {
            let own = space.action_of(index, player);
            let collides = (0..players).any(|q| q != player && space.action_of(index, q) == own);
            let estimate = if collides {
                stats.sinr_db(own)
            } else {
                stats.snr_db(own)
            };
            if let Some(db) = estimate {
                table.set_index(player, index, db);
            }
        }
    }
    let exploratory = solve_nash_welfare_max(&table, state.search)?;
    Ok(NashHopperState {
        estimated: table,
        exploratory,
        ..state.clone()
    })
}

/// Freezes this radar's slice of the welfare-maximizing equilibrium of the
/// estimated table. `k` must equal the exploration length.
pub fn nash_commit(state: &NashHopperState, k: usize) -> Result<NashHopperState> {
    if state.phase != NashPhase::Explore {
        return Err(Error::Sequencing("already committed".into()));
    }
    if k != state.explore_chirps {
        return Err(Error::Sequencing(format!(
            "commit requested at chirp {k}, exploration ends at chirp {}",
            state.explore_chirps
        )));
    }
    let profile = solve_nash_welfare_max(&state.estimated, state.search)?;
    Ok(NashHopperState {
        phase: NashPhase::Commit,
        committed: Some(profile.strategy(state.player).clone()),
        ..state.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopping::SubbandEstimate;

    fn collided(actions: usize, f: usize, sinr: f64, snr: Option<f64>) -> EpisodeStats {
        let mut subbands = vec![SubbandEstimate::default(); actions];
        subbands[f] = SubbandEstimate {
            count: 4,
            clean_count: usize::from(snr.is_some()),
            sinr_db: Some(sinr),
            snr_db: snr,
        };
        EpisodeStats::new(subbands)
    }

    #[test]
    fn collision_cell_takes_measured_sinr() {
        let state = NashHopperState::new(0, 2, 2, &NashHopperConfig::default(), 1).unwrap();
        let s0 = collided(2, 0, 3.0, None);
        let s1 = collided(2, 0, 5.0, None);
        let next = nash_explore_update(&state, &[Some(&s0), Some(&s1)]).unwrap();
        assert_eq!(next.estimated_table().get(0, &[0, 0]), 3.0);
        assert_eq!(next.estimated_table().get(1, &[0, 0]), 5.0);
        // Never observed without interference: stays at the floor.
        assert_eq!(next.estimated_table().get(0, &[0, 1]), -10.0);
        assert_eq!(next.estimated_table().get(0, &[1, 0]), -10.0);
    }

    #[test]
    fn clean_observations_fill_non_colliding_cells() {
        let state = NashHopperState::new(1, 2, 6, &NashHopperConfig::default(), 1).unwrap();
        let all: Vec<(usize, usize, f64)> = (0..6).map(|f| (f, 10, 20.0)).collect();
        let stats = EpisodeStats::from_clean(6, &all);
        let next = nash_explore_update(&state, &[Some(&stats), Some(&stats)]).unwrap();
        let table = next.estimated_table();
        for p in 0..2 {
            for a in 0..6 {
                for b in 0..6 {
                    if a != b {
                        assert_eq!(table.get(p, &[a, b]), 20.0);
                    }
                }
            }
        }
    }

    #[test]
    fn recomputed_profile_is_distinct_pure_pair() {
        let state = NashHopperState::new(0, 2, 6, &NashHopperConfig::default(), 1).unwrap();
        let stats: Vec<EpisodeStats> = (0..2)
            .map(|r| {
                let subbands = (0..6)
                    .map(|f| SubbandEstimate {
                        count: 20,
                        clean_count: 15,
                        sinr_db: Some(12.0 + f as f64 * 0.1 + r as f64),
                        snr_db: Some(20.0 - f as f64 * 0.3 + r as f64 * 0.2 * f as f64),
                    })
                    .collect();
                EpisodeStats::new(subbands)
            })
            .collect();
        let next = nash_explore_update(&state, &[Some(&stats[0]), Some(&stats[1])]).unwrap();
        let pure = next.exploratory_profile().as_pure().expect("pure equilibrium");
        assert_ne!(pure[0], pure[1]);
    }

    #[test]
    fn missing_stats_is_communication_error() {
        let state = NashHopperState::new(0, 2, 3, &NashHopperConfig::default(), 1).unwrap();
        let s = EpisodeStats::empty(3);
        assert!(matches!(
            nash_explore_update(&state, &[Some(&s), None]),
            Err(Error::Communication(_))
        ));
        assert!(matches!(
            nash_explore_update(&state, &[Some(&s)]),
            Err(Error::Communication(_))
        ));
    }

    #[test]
    fn commit_sequencing() {
        let cfg = NashHopperConfig {
            explore_episodes: 2,
            ..NashHopperConfig::default()
        };
        let state = NashHopperState::new(0, 1, 4, &cfg, 8).unwrap();
        assert_eq!(state.explore_chirps(), 16);
        assert!(matches!(nash_commit(&state, 8), Err(Error::Sequencing(_))));
        let stats = EpisodeStats::from_clean(4, &[(0, 2, 11.0), (1, 2, 14.0), (2, 2, 9.0), (3, 2, 13.0)]);
        let explored = nash_explore_update(&state, &[Some(&stats)]).unwrap();
        let committed = nash_commit(&explored, 16).unwrap();
        assert_eq!(committed.phase(), NashPhase::Commit);
        assert_eq!(committed.strategy().as_pure(), Some(1));
        assert!(matches!(nash_commit(&committed, 16), Err(Error::Sequencing(_))));
    }

    #[test]
    fn symmetric_ties_commit_to_first_pair() {
        let subbands = (0..6)
            .map(|_| SubbandEstimate {
                count: 10,
                clean_count: 5,
                sinr_db: Some(0.0),
                snr_db: Some(20.0),
            })
            .collect();
        let stats = EpisodeStats::new(subbands);
        let mut picks = Vec::new();
        for player in 0..2 {
            let state = NashHopperState::new(player, 2, 6, &NashHopperConfig::default(), 1).unwrap();
            let explored = nash_explore_update(&state, &[Some(&stats), Some(&stats)]).unwrap();
            let committed = nash_commit(&explored, explored.explore_chirps()).unwrap();
            picks.push(committed.strategy().as_pure().unwrap());
        }
        assert_eq!(picks, vec![0, 1]);
    }
}
