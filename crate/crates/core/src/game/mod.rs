//! Finite anti-coordination game over subbands.
//!
//! Players are radars, actions are subband indices (zero-based here; the
//! CSV outputs use one-based subband numbers). A joint action assigns one
//! subband to every player and is flattened into a mixed-radix index with
//! player 0 as the most significant digit.
//!
//! The module covers expected utilities of product strategies, Nash
//! equilibrium checks and computation, coarse correlated equilibrium gaps,
//! and external regret of realized hopping histories.

mod equilibrium;
mod regret;

pub use equilibrium::{
    enumerate_pure_nash, is_nash, nash_candidates, solve_nash_welfare_max, NashCandidate,
    NashSearch,
};
pub use regret::{cce_deviation_gap, empirical_joint, external_regret, RegretLedger};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest joint action space the dense tables accept.
pub const MAX_JOINT_ACTIONS: usize = 10_000_000;

/// Absolute tolerance for probability vectors summing to one.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// Default tolerance (dB) for equilibrium checks.
pub const DEFAULT_EQ_TOL_DB: f64 = 1e-6;

/// One subband per player.
pub type JointAction = Vec<usize>;

/// Probability vector over the subbands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MixedStrategy {
    probs: Vec<f64>,
}

impl MixedStrategy {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("mixed strategy over an empty action set"));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0 || **p > 1.0 + SIMPLEX_TOL)
        {
            return Err(Error::invalid(format!(
                "probability {p} at subband index {i} outside [0, 1]"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::invalid(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Self { probs })
    }

    /// Builds a strategy from non-negative weights by normalizing them.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) || weights.iter().any(|w| *w < 0.0) {
            return Err(Error::invalid(format!(
                "cannot normalize weights {weights:?}"
            )));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(actions: usize) -> Self {
        assert!(actions > 0, "uniform strategy needs at least one action");
        Self {
            probs: vec![1.0 / actions as f64; actions],
        }
    }

    pub fn pure(actions: usize, action: usize) -> Self {
        assert!(action < actions, "action {action} out of range {actions}");
        let mut probs = vec![0.0; actions];
        probs[action] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, action: usize) -> f64 {
        self.probs[action]
    }

    pub fn actions(&self) -> usize {
        self.probs.len()
    }

    /// Indices with strictly positive probability.
    pub fn support(&self) -> Vec<usize> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// The action played with certainty, if any.
    pub fn as_pure(&self) -> Option<usize> {
        let support = self.support();
        match support.as_slice() {
            [a] if (self.probs[*a] - 1.0).abs() <= SIMPLEX_TOL => Some(*a),
            _ => None,
        }
    }
}

impl TryFrom<Vec<f64>> for MixedStrategy {
    type Error = Error;
    fn try_from(value: Vec<f64>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<MixedStrategy> for Vec<f64> {
    fn from(value: MixedStrategy) -> Self {
        value.probs
    }
}

/// One mixed strategy per player, all over the same action set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    strategies: Vec<MixedStrategy>,
}

impl StrategyProfile {
    pub fn new(strategies: Vec<MixedStrategy>) -> Result<Self> {
        let Some(first) = strategies.first() else {
            return Err(Error::invalid("strategy profile without players"));
        };
        let actions = first.actions();
        if strategies.iter().any(|s| s.actions() != actions) {
            return Err(Error::invalid(
                "all players must share the same action set",
            ));
        }
        Ok(Self { strategies })
    }

    pub fn pure(joint: &[usize], actions: usize) -> Self {
        Self {
            strategies: joint
                .iter()
                .map(|&a| MixedStrategy::pure(actions, a))
                .collect(),
        }
    }

    pub fn players(&self) -> usize {
        self.strategies.len()
    }

    pub fn actions(&self) -> usize {
        self.strategies[0].actions()
    }

    pub fn strategy(&self, player: usize) -> &MixedStrategy {
        &self.strategies[player]
    }

    pub fn strategies(&self) -> &[MixedStrategy] {
        &self.strategies
    }

    /// The joint action when every strategy is pure.
    pub fn as_pure(&self) -> Option<JointAction> {
        self.strategies.iter().map(MixedStrategy::as_pure).collect()
    }

    /// Replaces one player's strategy.
    pub fn with_strategy(&self, player: usize, strategy: MixedStrategy) -> Self {
        let mut strategies = self.strategies.clone();
        strategies[player] = strategy;
        Self { strategies }
    }

    /// Probability of a joint action under the product distribution.
    pub fn joint_probability(&self, joint: &[usize]) -> f64 {
        joint
            .iter()
            .zip(&self.strategies)
            .map(|(&a, s)| s.prob(a))
            .product()
    }
}

/// Mixed-radix codec for joint actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointSpace {
    pub players: usize,
    pub actions: usize,
}

impl JointSpace {
    pub fn new(players: usize, actions: usize) -> Result<Self> {
        if players == 0 || actions == 0 {
            return Err(Error::invalid(format!(
                "joint space needs players ≥ 1 and actions ≥ 1 (got {players}, {actions})"
            )));
        }
        let needed = (actions as u128).checked_pow(players as u32).unwrap_or(u128::MAX);
        if needed > MAX_JOINT_ACTIONS as u128 {
            return Err(Error::Capacity {
                what: "joint action space",
                needed,
                limit: MAX_JOINT_ACTIONS as u128,
            });
        }
        Ok(Self { players, actions })
    }

    pub fn size(&self) -> usize {
        self.actions.pow(self.players as u32)
    }

    pub fn encode(&self, joint: &[usize]) -> usize {
        debug_assert_eq!(joint.len(), self.players);
        joint.iter().fold(0, |acc, &a| acc * self.actions + a)
    }

    pub fn decode(&self, mut index: usize) -> JointAction {
        let mut joint = vec![0; self.players];
        for slot in joint.iter_mut().rev() {
            *slot = index % self.actions;
            index /= self.actions;
        }
        joint
    }

    /// Index of the joint action with one player's action replaced.
    pub fn replace(&self, index: usize, player: usize, action: usize) -> usize {
        let stride = self.actions.pow((self.players - 1 - player) as u32);
        let current = (index / stride) % self.actions;
        index - current * stride + action * stride
    }

    pub fn action_of(&self, index: usize, player: usize) -> usize {
        let stride = self.actions.pow((self.players - 1 - player) as u32);
        (index / stride) % self.actions
    }

    fn check(&self, joint: &[usize]) -> Result<()> {
        if joint.len() != self.players || joint.iter().any(|&a| a >= self.actions) {
            return Err(Error::invalid(format!(
                "joint action {joint:?} outside {}^{} space",
                self.actions, self.players
            )));
        }
        Ok(())
    }
}

/// Per-player utilities (dB) over every joint action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityTable {
    space: JointSpace,
    /// `values[player * size + joint_index]`
    values: Vec<f64>,
}

impl UtilityTable {
    /// Table filled with a constant.
    pub fn constant(players: usize, actions: usize, value: f64) -> Result<Self> {
        let space = JointSpace::new(players, actions)?;
        if !value.is_finite() {
            return Err(Error::invalid("utility must be finite"));
        }
        Ok(Self {
            space,
            values: vec![value; players * space.size()],
        })
    }

    pub fn from_fn(
        players: usize,
        actions: usize,
        mut utility: impl FnMut(usize, &[usize]) -> f64,
    ) -> Result<Self> {
        let space = JointSpace::new(players, actions)?;
        let size = space.size();
        let mut values = Vec::with_capacity(players * size);
        for player in 0..players {
            for index in 0..size {
                let joint = space.decode(index);
                let u = utility(player, &joint);
                if !u.is_finite() {
                    return Err(Error::invalid(format!(
                        "non-finite utility {u} for player {player} at {joint:?}"
                    )));
                }
                values.push(u);
            }
        }
        Ok(Self { space, values })
    }

    /// Two-player table from row-player and column-player payoff matrices,
    /// both indexed `[player-0 action][player-1 action]`.
    pub fn bimatrix(row: &[Vec<f64>], col: &[Vec<f64>]) -> Result<Self> {
        let actions = row.len();
        let square = |m: &[Vec<f64>]| m.len() == actions && m.iter().all(|r| r.len() == actions);
        if !square(row) || !square(col) {
            return Err(Error::invalid("bimatrix payoffs must be A×A"));
        }
        Self::from_fn(2, actions, |p, j| if p == 0 { row[j[0]][j[1]] } else { col[j[0]][j[1]] })
    }

    pub fn space(&self) -> JointSpace {
        self.space
    }

    pub fn players(&self) -> usize {
        self.space.players
    }

    pub fn actions(&self) -> usize {
        self.space.actions
    }

    pub fn get(&self, player: usize, joint: &[usize]) -> f64 {
        self.values[player * self.space.size() + self.space.encode(joint)]
    }

    #[inline]
    pub fn get_index(&self, player: usize, index: usize) -> f64 {
        self.values[player * self.space.size() + index]
    }

    pub fn set(&mut self, player: usize, joint: &[usize], value: f64) -> Result<()> {
        self.space.check(joint)?;
        if player >= self.players() || !value.is_finite() {
            return Err(Error::invalid(format!(
                "cannot set utility {value} for player {player}"
            )));
        }
        let size = self.space.size();
        self.values[player * size + self.space.encode(joint)] = value;
        Ok(())
    }

    pub(crate) fn set_index(&mut self, player: usize, index: usize, value: f64) {
        let size = self.space.size();
        self.values[player * size + index] = value;
    }

    /// Adds `offset` to every entry of one player.
    pub fn shifted(&self, player: usize, offset: f64) -> Self {
        let mut out = self.clone();
        let size = self.space.size();
        for v in &mut out.values[player * size..(player + 1) * size] {
            *v += offset;
        }
        out
    }

    fn check_profile(&self, profile: &StrategyProfile) -> Result<()> {
        if profile.players() != self.players() || profile.actions() != self.actions() {
            return Err(Error::invalid(format!(
                "profile is {}×{} but table is {}×{}",
                profile.players(),
                profile.actions(),
                self.players(),
                self.actions()
            )));
        }
        Ok(())
    }
}

/// Probability mass over joint actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    space: JointSpace,
    mass: Vec<f64>,
}

impl JointDistribution {
    pub fn new(players: usize, actions: usize, mass: Vec<f64>) -> Result<Self> {
        let space = JointSpace::new(players, actions)?;
        if mass.len() != space.size() {
            return Err(Error::invalid(format!(
                "joint distribution has {} entries, expected {}",
                mass.len(),
                space.size()
            )));
        }
        if mass.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::invalid("joint masses must be non-negative"));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::invalid(format!("joint masses sum to {total}")));
        }
        Ok(Self { space, mass })
    }

    pub fn point_mass(players: usize, actions: usize, joint: &[usize]) -> Result<Self> {
        let space = JointSpace::new(players, actions)?;
        space.check(joint)?;
        let mut mass = vec![0.0; space.size()];
        mass[space.encode(joint)] = 1.0;
        Ok(Self { space, mass })
    }

    pub fn space(&self) -> JointSpace {
        self.space
    }

    pub fn mass(&self, joint: &[usize]) -> f64 {
        self.mass[self.space.encode(joint)]
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    /// Non-zero entries as (joint action, mass), in index order.
    pub fn support(&self) -> Vec<(JointAction, f64)> {
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > 0.0)
            .map(|(i, m)| (self.space.decode(i), *m))
            .collect()
    }
}

/// Expected utility of `player` under the product distribution of `profile`.
pub fn expected_utility(
    table: &UtilityTable,
    profile: &StrategyProfile,
    player: usize,
) -> Result<f64> {
    table.check_profile(profile)?;
    if player >= table.players() {
        return Err(Error::invalid(format!("player {player} out of range")));
    }
    Ok(expected_utility_unchecked(table, profile, player))
}

pub(crate) fn expected_utility_unchecked(
    table: &UtilityTable,
    profile: &StrategyProfile,
    player: usize,
) -> f64 {
    let space = table.space();
    let mut total = 0.0;
    for index in 0..space.size() {
        let mut weight = 1.0;
        let mut rest = index;
        for p in (0..space.players).rev() {
            weight *= profile.strategy(p).prob(rest % space.actions);
            rest /= space.actions;
            if weight == 0.0 {
                break;
            }
        }
        if weight != 0.0 {
            total += weight * table.get_index(player, index);
        }
    }
    total
}
