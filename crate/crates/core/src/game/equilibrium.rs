use std::cmp::Ordering;

use super::{
    expected_utility_unchecked, JointAction, MixedStrategy, StrategyProfile, UtilityTable,
    MAX_JOINT_ACTIONS,
};
use crate::error::{Error, Result};

/// Which equilibria `solve_nash_welfare_max` searches over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NashSearch {
    /// Pure equilibria only; any number of players.
    PureOnly,
    /// Pure and mixed equilibria via support enumeration; two players only.
    SupportEnumeration,
}

impl NashSearch {
    pub fn default_for(players: usize) -> Self {
        if players == 2 {
            NashSearch::SupportEnumeration
        } else {
            NashSearch::PureOnly
        }
    }
}

/// An equilibrium found by the solver together with its social welfare.
#[derive(Debug, Clone, PartialEq)]
pub struct NashCandidate {
    pub profile: StrategyProfile,
    pub supports: Vec<Vec<usize>>,
    pub welfare: f64,
}

/// True iff no player gains more than `tol` by a unilateral pure deviation.
pub fn is_nash(profile: &StrategyProfile, table: &UtilityTable, tol: f64) -> Result<bool> {
    table.check_profile(profile)?;
    if !(tol >= 0.0) {
        return Err(Error::invalid(format!("tolerance {tol} must be ≥ 0")));
    }
    for player in 0..table.players() {
        let current = expected_utility_unchecked(table, profile, player);
        for action in 0..table.actions() {
            let deviation = profile.with_strategy(player, MixedStrategy::pure(table.actions(), action));
            if expected_utility_unchecked(table, &deviation, player) > current + tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All joint actions where no player has a strictly improving pure deviation.
pub fn enumerate_pure_nash(table: &UtilityTable) -> Result<Vec<JointAction>> {
    let space = table.space();
    let size = space.size();
    if size > MAX_JOINT_ACTIONS {
        return Err(Error::Capacity {
            what: "pure equilibrium enumeration",
            needed: size as u128,
            limit: MAX_JOINT_ACTIONS as u128,
        });
    }
    let mut out = Vec::new();
    'joint: for index in 0..size {
        for player in 0..space.players {
            let current = table.get_index(player, index);
            for action in 0..space.actions {
                if table.get_index(player, space.replace(index, player, action)) > current {
                    continue 'joint;
                }
            }
        }
        out.push(space.decode(index));
    }
    Ok(out)
}

/// Every equilibrium the chosen search finds, in no particular order.
pub fn nash_candidates(table: &UtilityTable, search: NashSearch) -> Result<Vec<NashCandidate>> {
    match search {
        NashSearch::PureOnly => {
            let actions = table.actions();
            Ok(enumerate_pure_nash(table)?
                .into_iter()
                .map(|joint| {
                    let welfare = (0..table.players()).map(|p| table.get(p, &joint)).sum();
                    NashCandidate {
                        profile: StrategyProfile::pure(&joint, actions),
                        supports: joint.iter().map(|&a| vec![a]).collect(),
                        welfare,
                    }
                })
                .collect())
        }
        NashSearch::SupportEnumeration => {
            if table.players() != 2 {
                return Err(Error::invalid(format!(
                    "support enumeration needs exactly two players, table has {}",
                    table.players()
                )));
            }
            Ok(support_enumeration(table))
        }
    }
}

/// The equilibrium with the largest sum of expected utilities. Welfare ties
/// (within 1e-9) go to the lexicographically smallest support index sets.
pub fn solve_nash_welfare_max(table: &UtilityTable, search: NashSearch) -> Result<StrategyProfile> {
    let candidates = nash_candidates(table, search)?;
    select_welfare_max(candidates)
        .map(|c| c.profile)
        .ok_or_else(|| {
            Error::SolverIncomplete(format!(
                "no Nash equilibrium found with {search:?} on a {}-player, {}-action table",
                table.players(),
                table.actions()
            ))
        })
}

fn select_welfare_max(candidates: Vec<NashCandidate>) -> Option<NashCandidate> {
    let best = candidates
        .iter()
        .map(|c| c.welfare)
        .fold(f64::NEG_INFINITY, f64::max);
    let slack = 1e-9 * best.abs().max(1.0);
    candidates
        .into_iter()
        .filter(|c| c.welfare >= best - slack)
        .min_by(|a, b| lexicographic(&a.supports, &b.supports))
}

fn lexicographic(a: &[Vec<usize>], b: &[Vec<usize>]) -> Ordering {
    a.iter().cmp(b.iter())
}

fn support_enumeration(table: &UtilityTable) -> Vec<NashCandidate> {
    let n = table.actions();
    let row: Vec<Vec<f64>> = (0..n)
        .map(|r| (0..n).map(|c| table.get(0, &[r, c])).collect())
        .collect();
    let col: Vec<Vec<f64>> = (0..n)
        .map(|r| (0..n).map(|c| table.get(1, &[r, c])).collect())
        .collect();
    let scale = row
        .iter()
        .chain(&col)
        .flatten()
        .fold(1.0_f64, |m, v| m.max(v.abs()));
    let tol = 1e-9 * scale;

    let mut found: Vec<NashCandidate> = Vec::new();
    for size in 1..=n {
        let subsets = combinations(n, size);
        for s in &subsets {
            for t in &subsets {
                // Column mix over t making every row in s indifferent.
                let Some((q, u)) = indifferent_mix(n, t, s, |r, c| row[r][c]) else {
                    continue;
                };
                let Some((p, v)) = indifferent_mix(n, s, t, |c, r| col[r][c]) else {
                    continue;
                };
                let row_ok = (0..n).all(|r| dot(&q, |c| row[r][c]) <= u + tol);
                let col_ok = (0..n).all(|c| dot(&p, |r| col[r][c]) <= v + tol);
                if !(row_ok && col_ok) {
                    continue;
                }
                let (Ok(ps), Ok(qs)) = (MixedStrategy::new(p), MixedStrategy::new(q)) else {
                    continue;
                };
                let profile = StrategyProfile::new(vec![ps, qs]).expect("same action count");
                let supports = vec![
                    profile.strategy(0).support(),
                    profile.strategy(1).support(),
                ];
                if found.iter().any(|c| same_profile(&c.profile, &profile)) {
                    continue;
                }
                let welfare = expected_utility_unchecked(table, &profile, 0)
                    + expected_utility_unchecked(table, &profile, 1);
                found.push(NashCandidate {
                    profile,
                    supports,
                    welfare,
                });
            }
        }
    }
    found
}

fn same_profile(a: &StrategyProfile, b: &StrategyProfile) -> bool {
    a.strategies()
        .iter()
        .zip(b.strategies())
        .all(|(x, y)| x.probs().iter().zip(y.probs()).all(|(p, q)| (p - q).abs() < 1e-9))
}

fn dot(mix: &[f64], payoff: impl Fn(usize) -> f64) -> f64 {
    mix.iter()
        .enumerate()
        .filter(|(_, w)| **w != 0.0)
        .map(|(i, w)| w * payoff(i))
        .sum()
}

/// Solves for a distribution over `mixed` (full-length vector, zero outside)
/// such that `payoff(responder, mixed_action)` has the same expectation for
/// every responder in `responders`. Returns the mix and the common value.
fn indifferent_mix(
    n: usize,
    mixed: &[usize],
    responders: &[usize],
    payoff: impl Fn(usize, usize) -> f64,
) -> Option<(Vec<f64>, f64)> {
    let k = mixed.len();
    debug_assert_eq!(k, responders.len());
    // Unknowns: weights on `mixed`, then the value.
    let dim = k + 1;
    let mut a = vec![vec![0.0; dim + 1]; dim];
    for (eq, &r) in responders.iter().enumerate() {
        for (j, &c) in mixed.iter().enumerate() {
            a[eq][j] = payoff(r, c);
        }
        a[eq][k] = -1.0;
    }
    for j in 0..k {
        a[k][j] = 1.0;
    }
    a[k][dim] = 1.0;
    let x = gauss_solve(a)?;
    let mut mix = vec![0.0; n];
    for (j, &c) in mixed.iter().enumerate() {
        let w = x[j];
        if w < -1e-12 {
            return None;
        }
        mix[c] = w.max(0.0);
    }
    let total: f64 = mix.iter().sum();
    if total <= 0.0 {
        return None;
    }
    mix.iter_mut().for_each(|w| *w /= total);
    Some((mix, x[k]))
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn gauss_solve(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r[..n].iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
