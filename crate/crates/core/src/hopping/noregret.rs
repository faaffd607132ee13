//! Exponential-weights hopping with importance-weighted loss estimates.
//!
//! At every episode boundary the cumulative loss of each played subband
//! drops by its measured utility (dB) divided by the probability that it
//! was observed during the episode. The next strategy is the softmax of the
//! negated losses mixed with a uniform exploration term, with entries at or
//! below a small threshold removed.

use serde::{Deserialize, Serialize};

use super::{schedule_params, EpisodeStats};
use crate::error::{Error, Result};
use crate::game::MixedStrategy;

/// How a subband's episode utility becomes a loss increment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossEstimate {
    /// `u(f)/p(f)` for every played subband, once per episode.
    EpisodeMean,
    /// `(n_f/n)·u(f)/p(f)`: the per-chirp importance-weighted estimator
    /// averaged over the episode's `n` chirps, `n_f` of which used `f`.
    ChirpAverage,
    /// `u(f)/q(f)` for every played subband, where `q(f) = 1 − (1 − p(f))^n`
    /// is the probability that `f` is played at least once in `n` chirps.
    /// Equals `EpisodeMean` for single-chirp episodes.
    Observed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoRegretConfig {
    pub c_eta: f64,
    pub c_gamma: f64,
    /// Hard threshold κ; entries `≤ κ` are zeroed.
    pub kappa: f64,
    /// Bounds on a single loss increment after importance weighting.
    pub loss_clip: [f64; 2],
    pub estimator: LossEstimate,
}

impl Default for NoRegretConfig {
    fn default() -> Self {
        Self {
            c_eta: 1.0,
            c_gamma: 1.0,
            kappa: 0.04,
            loss_clip: [-60.0, 60.0],
            estimator: LossEstimate::Observed,
        }
    }
}

impl NoRegretConfig {
    pub fn validate(&self, actions: usize) -> Vec<String> {
        let mut errors = Vec::new();
        if !(self.c_eta > 0.0) {
            errors.push(format!("c_eta must be positive (got {})", self.c_eta));
        }
        if !(self.c_gamma > 0.0) {
            errors.push(format!("c_gamma must be positive (got {})", self.c_gamma));
        }
        if !(self.kappa >= 0.0 && self.kappa < 1.0 / actions as f64) {
            errors.push(format!(
                "kappa must lie in [0, 1/A) = [0, {:.4}) (got {})",
                1.0 / actions as f64,
                self.kappa
            ));
        }
        if !(self.loss_clip[0] < self.loss_clip[1]) {
            errors.push(format!("loss_clip {:?} is empty", self.loss_clip));
        }
        errors
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoRegretState {
    loss: Vec<f64>,
    /// One-based index of the episode currently being played.
    tau: usize,
    current: MixedStrategy,
    config: NoRegretConfig,
}

impl NoRegretState {
    pub fn new(actions: usize, config: NoRegretConfig) -> Result<Self> {
        if actions < 2 {
            return Err(Error::invalid("no-regret hopping needs at least two subbands"));
        }
        let errors = config.validate(actions);
        if !errors.is_empty() {
            return Err(Error::Validation(errors));
        }
        Ok(Self {
            loss: vec![0.0; actions],
            tau: 1,
            current: MixedStrategy::uniform(actions),
            config,
        })
    }

    /// State with an explicit loss vector and strategy, for inspection and tests.
    pub fn with_parts(loss: Vec<f64>, tau: usize, current: MixedStrategy, config: NoRegretConfig) -> Result<Self> {
        if loss.len() != current.actions() || loss.iter().any(|l| !l.is_finite()) || tau == 0 {
            return Err(Error::invalid("inconsistent no-regret state"));
        }
        Ok(Self {
            loss,
            tau,
            current,
            config,
        })
    }

    pub fn loss(&self) -> &[f64] {
        &self.loss
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn current(&self) -> &MixedStrategy {
        &self.current
    }

    pub fn config(&self) -> &NoRegretConfig {
        &self.config
    }
}

/// One episode-boundary update.
pub fn noregret_update(state: &NoRegretState, stats: &EpisodeStats) -> Result<NoRegretState> {
    let actions = state.loss.len();
    if stats.actions() != actions {
        return Err(Error::invalid(format!(
            "episode stats cover {} subbands, state has {actions}",
            stats.actions()
        )));
    }
    let cfg = &state.config;
    let total = stats.total_count();
    let mut loss = state.loss.clone();
    for (f, l) in loss.iter_mut().enumerate() {
        let est = stats.subband(f);
        if est.count == 0 {
            continue;
        }
        let p = state.current.prob(f);
        if p <= 0.0 {
            return Err(Error::Consistency(format!(
                "subband {f} played {} times with probability 0",
                est.count
            )));
        }
        let utility = est
            .sinr_db
            .ok_or_else(|| Error::Consistency(format!("subband {f} played but has no SINR estimate")))?;
        let weight = match cfg.estimator {
            LossEstimate::EpisodeMean => 1.0,
            LossEstimate::ChirpAverage => est.count as f64 / total as f64,
            LossEstimate::Observed => p / -(total as f64 * (-p).ln_1p()).exp_m1(),
        };
        let increment = (-weight * utility / p).clamp(cfg.loss_clip[0], cfg.loss_clip[1]);
        *l += increment;
    }

    let (eta, gamma) = schedule_params(state.tau, actions, cfg.c_eta, cfg.c_gamma)?;
    let mixed = exploration_mix(&softmax_neg(&loss, eta), gamma);
    let current = hard_threshold(&MixedStrategy::new(mixed)?, cfg.kappa)?;
    Ok(NoRegretState {
        loss,
        tau: state.tau + 1,
        current,
        config: cfg.clone(),
    })
}

/// `exp(−η·L_f) / Σ exp(−η·L_f')`, stabilized by subtracting the maximum exponent.
fn softmax_neg(loss: &[f64], eta: f64) -> Vec<f64> {
    let max = loss
        .iter()
        .map(|l| -eta * l)
        .fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = loss.iter().map(|l| (-eta * l - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

fn exploration_mix(p: &[f64], gamma: f64) -> Vec<f64> {
    let uniform = 1.0 / p.len() as f64;
    p.iter().map(|x| (1.0 - gamma) * x + gamma * uniform).collect()
}

/// Zeroes entries `≤ kappa` and renormalizes the rest.
pub fn hard_threshold(p: &MixedStrategy, kappa: f64) -> Result<MixedStrategy> {
    if !(kappa >= 0.0) {
        return Err(Error::invalid(format!("threshold {kappa} must be ≥ 0")));
    }
    let kept: Vec<f64> = p
        .probs()
        .iter()
        .map(|&x| if x <= kappa { 0.0 } else { x })
        .collect();
    if kept.iter().all(|&x| x == 0.0) {
        return Err(Error::invalid(format!(
            "threshold {kappa} removes every subband of {:?}",
            p.probs()
        )));
    }
    MixedStrategy::from_weights(&kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(kappa: f64) -> NoRegretConfig {
        NoRegretConfig {
            kappa,
            ..NoRegretConfig::default()
        }
    }

    #[test]
    fn no_plays_keeps_uniform() {
        let state = NoRegretState::new(6, cfg(0.0)).unwrap();
        let next = noregret_update(&state, &EpisodeStats::empty(6)).unwrap();
        assert!(next.current().probs().iter().all(|p| (p - 1.0 / 6.0).abs() < 1e-15));
        assert_eq!(next.tau(), 2);
    }

    #[test]
    fn single_played_arm_hand_evaluation() {
        // p = (0.5, 0.5), only f_1 played at 20 dB → L = (−40, 0).
        // η = 0.1, γ = 0 → p ∝ (e^4, 1).
        for estimator in [LossEstimate::EpisodeMean, LossEstimate::ChirpAverage] {
            let config = NoRegretConfig {
                kappa: 0.0,
                loss_clip: [-100.0, 100.0],
                estimator,
                ..NoRegretConfig::default()
            };
            let state = NoRegretState::new(2, config).unwrap();
            let stats = EpisodeStats::from_clean(2, &[(0, 10, 20.0)]);
            // choose τ so that η = c_η·√(ln2/(2τ)) = 0.1 → c_η = 0.1/√(ln2/2)
            let scale = 0.1 / (2f64.ln() / 2.0).sqrt();
            let state = NoRegretState::with_parts(
                state.loss().to_vec(),
                1,
                state.current().clone(),
                NoRegretConfig { c_eta: scale, c_gamma: 1e-300, ..state.config().clone() },
            )
            .unwrap();
            let next = noregret_update(&state, &stats).unwrap();
            assert_eq!(next.loss(), &[-40.0, 0.0]);
            let e4 = 4f64.exp();
            let expected = [e4 / (e4 + 1.0), 1.0 / (e4 + 1.0)];
            for (got, want) in next.current().probs().iter().zip(expected) {
                assert!((got - want).abs() < 1e-12, "{got} vs {want}");
            }
            assert!((next.current().prob(0) - 0.982).abs() < 1e-3);
        }
    }

    #[test]
    fn observed_estimator_weights() {
        let config = NoRegretConfig {
            kappa: 0.0,
            loss_clip: [-100.0, 100.0],
            ..NoRegretConfig::default()
        };
        let state = NoRegretState::new(2, config).unwrap();
        // One chirp per episode: observation probability equals p.
        let next = noregret_update(&state, &EpisodeStats::from_clean(2, &[(0, 1, 20.0)])).unwrap();
        assert!((next.loss()[0] + 40.0).abs() < 1e-12);
        // Ten chirps: q = 1 − 0.5^10.
        let next = noregret_update(&state, &EpisodeStats::from_clean(2, &[(0, 6, 20.0), (1, 4, 10.0)])).unwrap();
        let q = 1.0 - 0.5f64.powi(10);
        assert!((next.loss()[0] + 20.0 / q).abs() < 1e-12);
        assert!((next.loss()[1] + 10.0 / q).abs() < 1e-12);
    }

    #[test]
    fn full_exploration_is_uniform() {
        let config = NoRegretConfig {
            c_gamma: 1e9,
            kappa: 0.0,
            ..NoRegretConfig::default()
        };
        let state = NoRegretState::with_parts(
            vec![-500.0, 3.0, 40.0],
            1,
            MixedStrategy::uniform(3),
            config,
        )
        .unwrap();
        let next = noregret_update(&state, &EpisodeStats::from_clean(3, &[(0, 5, 30.0)])).unwrap();
        assert!(next.current().probs().iter().all(|p| (p - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn played_arm_with_zero_probability_is_inconsistent() {
        let state = NoRegretState::with_parts(
            vec![0.0; 3],
            1,
            MixedStrategy::new(vec![0.5, 0.5, 0.0]).unwrap(),
            cfg(0.04),
        )
        .unwrap();
        let stats = EpisodeStats::from_clean(3, &[(2, 4, 10.0)]);
        assert!(matches!(noregret_update(&state, &stats), Err(Error::Consistency(_))));
    }

    #[test]
    fn increments_are_clipped() {
        let config = NoRegretConfig {
            estimator: LossEstimate::EpisodeMean,
            ..cfg(0.0)
        };
        let state = NoRegretState::new(4, config).unwrap();
        let next = noregret_update(&state, &EpisodeStats::from_clean(4, &[(1, 1, 40.0), (2, 1, -40.0)])).unwrap();
        assert_eq!(next.loss(), &[0.0, -60.0, 60.0, 0.0]);
    }

    #[test]
    fn threshold_examples() {
        let p = MixedStrategy::new(vec![0.5, 0.46, 0.04]).unwrap();
        let t = hard_threshold(&p, 0.04).unwrap();
        assert!((t.prob(0) - 0.5 / 0.96).abs() < 1e-15);
        assert!((t.prob(1) - 0.46 / 0.96).abs() < 1e-15);
        assert_eq!(t.prob(2), 0.0);
        assert!((t.prob(0) - 0.5208).abs() < 1e-4);

        let q = MixedStrategy::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(hard_threshold(&q, 0.0).unwrap(), q);

        let pure = MixedStrategy::pure(6, 4);
        assert_eq!(hard_threshold(&pure, 0.1).unwrap(), pure);

        assert!(hard_threshold(&MixedStrategy::uniform(4), 0.3).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(NoRegretConfig::default().validate(6).is_empty());
        let bad = NoRegretConfig {
            c_eta: 0.0,
            kappa: 0.5,
            ..NoRegretConfig::default()
        };
        assert_eq!(bad.validate(6).len(), 2);
    }
}
