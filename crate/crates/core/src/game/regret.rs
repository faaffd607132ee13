use serde::{Deserialize, Serialize};

use super::{JointAction, JointDistribution, JointSpace, UtilityTable};
use crate::error::{Error, Result};

/// Realized play of one player over a history of chirps.
///
/// `joints[k]` is the full joint action at chirp `k` (own action included)
/// and `realized[k]` the utility the player obtained there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretLedger {
    pub player: usize,
    pub joints: Vec<JointAction>,
    pub realized: Vec<f64>,
}

impl RegretLedger {
    pub fn new(player: usize) -> Self {
        Self {
            player,
            joints: Vec::new(),
            realized: Vec::new(),
        }
    }

    /// Records a chirp whose realized utility is read from `table`.
    pub fn record_from_table(&mut self, table: &UtilityTable, joint: JointAction) {
        self.realized.push(table.get(self.player, &joint));
        self.joints.push(joint);
    }

    pub fn len(&self) -> usize {
        self.joints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.joints.is_empty()
    }
}

/// Largest gain (dB) `player` could obtain by committing to a fixed subband
/// before the joint action is drawn from `joint`. Non-positive for every
/// player iff `joint` is a coarse correlated equilibrium.
pub fn cce_deviation_gap(joint: &JointDistribution, table: &UtilityTable, player: usize) -> Result<f64> {
    let space = table.space();
    if joint.space() != space {
        return Err(Error::invalid(format!(
            "joint distribution over {:?} does not match table over {:?}",
            joint.space(),
            space
        )));
    }
    if player >= space.players {
        return Err(Error::invalid(format!("player {player} out of range")));
    }
    let mut on_path = 0.0;
    let mut deviation = vec![0.0; space.actions];
    for (index, &mass) in joint.masses().iter().enumerate() {
        if mass == 0.0 {
            continue;
        }
        on_path += mass * table.get_index(player, index);
        for (action, total) in deviation.iter_mut().enumerate() {
            *total += mass * table.get_index(player, space.replace(index, player, action));
        }
    }
    Ok(deviation
        .into_iter()
        .map(|d| d - on_path)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// External regret (dB·chirps): the best fixed subband in hindsight against
/// the recorded opponent actions, minus the realized total.
pub fn external_regret(ledger: &RegretLedger, table: &UtilityTable) -> Result<f64> {
    let space = table.space();
    if ledger.joints.len() != ledger.realized.len() {
        return Err(Error::invalid(format!(
            "ledger has {} joint actions but {} realized utilities",
            ledger.joints.len(),
            ledger.realized.len()
        )));
    }
    if ledger.player >= space.players {
        return Err(Error::invalid(format!("player {} out of range", ledger.player)));
    }
    let mut fixed = vec![0.0; space.actions];
    for joint in &ledger.joints {
        space.check(joint)?;
        let index = space.encode(joint);
        for (action, total) in fixed.iter_mut().enumerate() {
            *total += table.get_index(ledger.player, space.replace(index, ledger.player, action));
        }
    }
    let realized: f64 = ledger.realized.iter().sum();
    Ok(fixed
        .into_iter()
        .map(|f| f - realized)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Empirical distribution of joint actions over `histories[player][k]`.
pub fn empirical_joint(histories: &[Vec<usize>], actions: usize) -> Result<JointDistribution> {
    let Some(first) = histories.first() else {
        return Err(Error::invalid("no histories"));
    };
    let chirps = first.len();
    if chirps == 0 {
        return Err(Error::invalid("histories must contain at least one chirp"));
    }
    if histories.iter().any(|h| h.len() != chirps) {
        return Err(Error::invalid("ragged histories: all players need the same chirp count"));
    }
    let space = JointSpace::new(histories.len(), actions)?;
    let mut counts = vec![0u64; space.size()];
    for k in 0..chirps {
        let mut index = 0;
        for history in histories {
            let a = history[k];
            if a >= actions {
                return Err(Error::invalid(format!("action {a} out of range at chirp {k}")));
            }
            index = index * actions + a;
        }
        counts[index] += 1;
    }
    let mass = counts
        .into_iter()
        .map(|c| c as f64 / chirps as f64)
        .collect();
    JointDistribution::new(histories.len(), actions, mass)
}
