use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::collision::collision_table;
use super::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::game::{
    cce_deviation_gap, empirical_joint, external_regret, JointDistribution, MixedStrategy, RegretLedger,
    UtilityTable,
};
use crate::hopping::{sample_subband, EpisodeStats, HoppingAgent};
use crate::signal::{
    compose_received, db_to_linear, dechirped_echo, dechirped_interference, detect_interference,
    fine_range_doppler, linear_to_db, range_fft, range_profile_at_velocity, ChirpFrame, ChirpParams,
    Detection, FineRangeProfile, RangeDopplerSurface, Target,
};

/// Everything recorded by [`run_scenario`]. Episode-indexed series have one
/// entry per episode, each holding one value per radar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub policies: Vec<String>,
    /// Strategy each radar sampled from during the episode.
    pub strategies: Vec<Vec<MixedStrategy>>,
    /// Strategies after the last update.
    pub final_strategies: Vec<MixedStrategy>,
    /// Fraction of the radar's chirps flagged as interfered.
    pub interference_rate: Vec<Vec<f64>>,
    pub mean_sinr_db: Vec<Vec<f64>>,
    /// External regret (dB·slots) on the genie table up to the episode end.
    pub cumulative_regret: Vec<Vec<f64>>,
    /// Slots of the shared clock per episode.
    pub slots_per_episode: usize,
    pub external_regret: Vec<f64>,
    /// Empirical distribution of slot joint actions over the whole run.
    pub joint: JointDistribution,
    pub cce_gap: Vec<f64>,
    /// Subband of every chirp, per radar.
    pub chirp_actions: Vec<Vec<usize>>,
    /// Subband each radar occupies at the start of every slot.
    pub slot_actions: Vec<Vec<usize>>,
    pub episode_stats: Vec<Vec<EpisodeStats>>,
    /// Fine range profile of the last frame for the first radar of each policy.
    pub profiles: BTreeMap<String, FineRangeProfile>,
}

impl RunMetrics {
    pub fn episodes(&self) -> usize {
        self.strategies.len()
    }

    /// Interference rate over all radars and the last `n` episodes.
    pub fn tail_interference_rate(&self, n: usize) -> f64 {
        let start = self.interference_rate.len().saturating_sub(n);
        let tail = &self.interference_rate[start..];
        let values: Vec<f64> = tail.iter().flatten().copied().collect();
        values.iter().sum::<f64>() / values.len().max(1) as f64
    }

    /// Average regret per slot of `radar` after `episodes` episodes.
    pub fn average_regret(&self, radar: usize, episodes: usize) -> f64 {
        self.cumulative_regret[episodes - 1][radar] / (episodes * self.slots_per_episode) as f64
    }
}

/// Utility (dB) of each radar for every joint subband choice: the summed
/// target SNR over unit noise plus the INR of every linked radar sharing
/// the subband.
pub fn genie_utility_table(config: &ScenarioConfig) -> Result<UtilityTable> {
    config.check()?;
    let players = config.players();
    let snr: Vec<f64> = (0..players)
        .map(|i| config.targets_of(i).iter().map(|t| db_to_linear(t.snr_db)).sum())
        .collect();
    UtilityTable::from_fn(players, config.actions(), |i, joint| {
        let interference: f64 = config
            .links
            .iter()
            .filter(|l| l.victim == i && joint[l.source] == joint[i])
            .map(|l| db_to_linear(l.inr_db))
            .sum();
        linear_to_db(snr[i] / (interference + 1.0))
    })
}

/// Per-radar random streams: one for subband draws, one for the channel.
struct Streams {
    hops: ChaCha8Rng,
    channel: ChaCha8Rng,
}

impl Streams {
    fn new(seed: u64, radar: usize) -> Self {
        let stream = |n: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(n);
            rng
        };
        Self {
            hops: stream(2 * radar as u64),
            channel: stream(2 * radar as u64 + 1),
        }
    }
}

/// Running best-fixed-action and realized totals of one player.
#[derive(Clone)]
struct RegretTally {
    fixed: Vec<f64>,
    realized: f64,
}

impl RegretTally {
    fn regret(&self) -> f64 {
        self.fixed.iter().fold(f64::NEG_INFINITY, |m, f| m.max(*f)) - self.realized
    }
}

/// Runs the scenario frame by frame. Deterministic in `config.run.seed`.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunMetrics> {
    config.check()?;
    let params = config.params();
    let players = config.players();
    let actions = config.actions();
    let run = &config.run;
    let per_frame = run.episodes_per_frame;
    let episodes = config.episodes();
    let cpe: Vec<usize> = params.iter().map(|p| p.chirps / per_frame).collect();
    let table = genie_utility_table(config)?;
    let targets: Vec<Vec<Target>> = (0..players).map(|i| config.targets_of(i)).collect();
    let amplitude = run.noise_power.sqrt();

    let clock = (0..players)
        .min_by(|&a, &b| params[a].t_pri.total_cmp(&params[b].t_pri))
        .unwrap_or(0);
    let slots = cpe[clock];

    let mut agents = params
        .iter()
        .zip(&config.radars)
        .enumerate()
        .map(|(i, (_, r))| HoppingAgent::new(&r.policy, i, players, actions, cpe[i]))
        .collect::<Result<Vec<_>>>()?;
    let mut streams: Vec<Streams> = (0..players).map(|i| Streams::new(run.seed, i)).collect();

    let profile_radars = profile_radars(config, &targets);
    let mut last_frame: Vec<Vec<Vec<Complex64>>> = vec![Vec::new(); players];

    let mut strategies = Vec::with_capacity(episodes);
    let mut interference_rate = Vec::with_capacity(episodes);
    let mut mean_sinr_db = Vec::with_capacity(episodes);
    let mut cumulative_regret = Vec::with_capacity(episodes);
    let mut episode_stats = Vec::with_capacity(episodes);
    let mut chirp_actions: Vec<Vec<usize>> = vec![Vec::new(); players];
    let mut slot_actions: Vec<Vec<usize>> = vec![Vec::new(); players];
    let mut ledgers: Vec<RegretLedger> = (0..players).map(RegretLedger::new).collect();
    let mut tallies = vec![
        RegretTally {
            fixed: vec![0.0; actions],
            realized: 0.0,
        };
        players
    ];
    let mut target_phases: Vec<Vec<f64>> = vec![Vec::new(); players];

    for episode in 0..episodes {
        let frame = episode / per_frame;
        let local = episode % per_frame;
        if local == 0 {
            for i in 0..players {
                target_phases[i] = targets[i]
                    .iter()
                    .map(|t| t.phase.unwrap_or_else(|| TAU * streams[i].channel.random::<f64>()))
                    .collect();
            }
        }
        let record_frame = frame + 1 == run.frames;

        let played: Vec<MixedStrategy> = agents.iter().map(|a| a.strategy().clone()).collect();
        let hops: Vec<Vec<usize>> = (0..players)
            .map(|i| {
                (0..cpe[i])
                    .map(|_| sample_subband(&played[i], &mut streams[i].hops))
                    .collect()
            })
            .collect();
        let collisions = collision_table(&params, &hops);

        let mut rates = Vec::with_capacity(players);
        let mut sinrs = Vec::with_capacity(players);
        let mut stats = Vec::with_capacity(players);
        for i in 0..players {
            let p = &params[i];
            let n_s = p.samples_per_chirp();
            let mut measurements = Vec::with_capacity(cpe[i]);
            let mut flagged = 0usize;
            for (c, &band) in hops[i].iter().enumerate() {
                let k = local * cpe[i] + c;
                let rng = &mut streams[i].channel;
                let echoes = targets[i]
                    .iter()
                    .zip(&target_phases[i])
                    .map(|(t, &phase)| {
                        dechirped_echo(p, t, k, p.hop_offset(band), phase)
                            .map(|e| e.into_iter().map(|x| x * amplitude).collect::<Vec<_>>())
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut interference = vec![Complex64::new(0.0, 0.0); n_s];
                for hit in &collisions[i][c] {
                    for link in config.links.iter().filter(|l| l.victim == i && l.source == hit.source) {
                        let phase = TAU * rng.random::<f64>();
                        let part =
                            dechirped_interference(p, &params[hit.source], link.inr_db, hit.offset, true, phase);
                        for (acc, x) in interference.iter_mut().zip(part) {
                            *acc += x * amplitude;
                        }
                    }
                }
                let received =
                    compose_received(n_s, &echoes, std::slice::from_ref(&interference), run.noise_power, rng)?;
                let detection = if run.genie {
                    Detection::genie(&received, &interference, run.noise_power)?
                } else {
                    detect_interference(&received, run.noise_power, run.detection_factor)?
                };
                flagged += usize::from(detection.flag);
                measurements.push(detection.measurement(band, run.noise_power));
                if record_frame && profile_radars.contains(&i) {
                    last_frame[i].push(received);
                }
            }
            rates.push(flagged as f64 / cpe[i] as f64);
            let linear: Vec<f64> = measurements.iter().map(|m| m.sinr).collect();
            sinrs.push(run.averaging.mean_db(&linear).unwrap_or(f64::NEG_INFINITY));
            stats.push(crate::signal::estimate_episode_sinr(&measurements, actions, run.averaging)?);
        }

        let step = params[clock].t_pri;
        for s in 0..slots {
            let t = s as f64 * step;
            let joint: Vec<usize> = (0..players)
                .map(|j| hops[j][((t / params[j].t_pri + 1e-9).floor() as usize).min(cpe[j] - 1)])
                .collect();
            let space = table.space();
            let index = space.encode(&joint);
            for (i, tally) in tallies.iter_mut().enumerate() {
                tally.realized += table.get_index(i, index);
                for (a, f) in tally.fixed.iter_mut().enumerate() {
                    *f += table.get_index(i, space.replace(index, i, a));
                }
                slot_actions[i].push(joint[i]);
                ledgers[i].record_from_table(&table, joint.clone());
            }
        }
        cumulative_regret.push(tallies.iter().map(RegretTally::regret).collect());

        let all: Vec<Option<&EpisodeStats>> = stats.iter().map(Some).collect();
        for (i, agent) in agents.iter_mut().enumerate() {
            agent.end_episode(cpe[i], &stats[i], &all)?;
        }

        for (history, h) in chirp_actions.iter_mut().zip(&hops) {
            history.extend_from_slice(h);
        }
        strategies.push(played);
        interference_rate.push(rates);
        mean_sinr_db.push(sinrs);
        episode_stats.push(stats);
    }

    let joint = empirical_joint(&slot_actions, actions)?;
    let external = ledgers
        .iter()
        .map(|l| external_regret(l, &table))
        .collect::<Result<Vec<_>>>()?;
    let cce_gap = (0..players)
        .map(|i| cce_deviation_gap(&joint, &table, i))
        .collect::<Result<Vec<_>>>()?;

    let mut profiles = BTreeMap::new();
    for &i in &profile_radars {
        let frame_hops: Vec<f64> = chirp_actions[i][chirp_actions[i].len() - params[i].chirps..]
            .iter()
            .map(|&b| params[i].hop_offset(b))
            .collect();
        let frame = ChirpFrame::new(
            params[i].samples_per_chirp(),
            std::mem::take(&mut last_frame[i]),
            frame_hops,
        )?;
        let profile = fine_profile(config, &params[i], &frame, targets[i][0].velocity)?;
        profiles.insert(config.radars[i].policy.name().to_string(), profile);
    }

    Ok(RunMetrics {
        policies: config.radars.iter().map(|r| r.policy.name().to_string()).collect(),
        strategies,
        final_strategies: agents.iter().map(|a| a.strategy().clone()).collect(),
        interference_rate,
        mean_sinr_db,
        cumulative_regret,
        slots_per_episode: slots,
        external_regret: external,
        joint,
        cce_gap,
        chirp_actions,
        slot_actions,
        episode_stats,
        profiles,
    })
}

/// First radar with at least one target for each distinct policy.
fn profile_radars(config: &ScenarioConfig, targets: &[Vec<Target>]) -> Vec<usize> {
    if !config.run.profile.enabled {
        return Vec::new();
    }
    let mut seen = Vec::new();
    let mut radars = Vec::new();
    for (i, r) in config.radars.iter().enumerate() {
        let name = r.policy.name();
        if !targets[i].is_empty() && !seen.contains(&name) {
            seen.push(name);
            radars.push(i);
        }
    }
    radars
}

/// Fine range profile over `[0, max_range)` at a single velocity.
pub(crate) fn fine_profile(
    config: &ScenarioConfig,
    params: &ChirpParams,
    frame: &ChirpFrame,
    velocity: f64,
) -> Result<FineRangeProfile> {
    let profile = &config.run.profile;
    let map = range_fft(frame, profile.window)?;
    let width = params.coarse_bin_width();
    let bins = ((profile.max_range / width).ceil() as usize).min(map.bins());
    if bins == 0 {
        return Err(Error::invalid("profile range covers no coarse bin"));
    }
    let offsets = RangeDopplerSurface::fine_offsets(params, profile.fine_per_bin);
    let surfaces = (0..bins)
        .map(|b| fine_range_doppler(&map, frame.hops(), b, &[velocity], &offsets, params))
        .collect::<Result<Vec<_>>>()?;
    range_profile_at_velocity(&surfaces, velocity)
}
