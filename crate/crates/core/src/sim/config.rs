use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopping::{NashHopperConfig, NoRegretConfig, Policy};
use crate::signal::{Averaging, ChirpParams, InterferenceLink, Target, Window, DEFAULT_DETECTION_FACTOR, SPEED_OF_LIGHT};

/// Chirp geometry and scheduling policy of one radar (SI units).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadarConfig {
    pub f_c: f64,
    pub b_a: f64,
    pub subbands: usize,
    pub t_pri: f64,
    /// Active time; `0.8·t_pri` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_a: Option<f64>,
    #[serde(default = "default_sample_rate")]
    pub f_s: f64,
    pub chirps: usize,
    #[serde(default = "default_policy")]
    pub policy: Policy,
}

fn default_sample_rate() -> f64 {
    20e6
}

fn default_policy() -> Policy {
    Policy::Uniform
}

impl RadarConfig {
    pub fn active_time(&self) -> f64 {
        self.t_a.unwrap_or(0.8 * self.t_pri)
    }

    pub fn params(&self) -> ChirpParams {
        ChirpParams {
            f_c: self.f_c,
            b_a: self.b_a,
            subbands: self.subbands,
            t_pri: self.t_pri,
            t_a: self.active_time(),
            f_s: self.f_s,
            chirps: self.chirps,
        }
    }
}

/// A target in the field of view of radar `radar`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetConfig {
    pub radar: usize,
    pub range: f64,
    pub velocity: f64,
    pub snr_db: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
}

impl TargetConfig {
    pub fn target(&self) -> Target {
        Target {
            range: self.range,
            velocity: self.velocity,
            snr_db: self.snr_db,
            phase: self.phase,
        }
    }
}

/// Fine range profile computed on the last frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileConfig {
    pub enabled: bool,
    /// Fine grid points per coarse range bin.
    pub fine_per_bin: usize,
    /// Profiles cover `[0, max_range)` metres.
    pub max_range: f64,
    pub window: Window,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            fine_per_bin: 96,
            max_range: 64.0,
            window: Window::Hann,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub frames: usize,
    /// Episodes per frame `𝒯`; every radar's chirp count must be divisible by it.
    pub episodes_per_frame: usize,
    pub seed: u64,
    /// Replace the threshold detector with ground-truth collision flags.
    pub genie: bool,
    pub noise_power: f64,
    pub detection_factor: f64,
    /// How per-chirp SINRs are averaged into episode estimates.
    pub averaging: Averaging,
    pub profile: ProfileConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            frames: 50,
            episodes_per_frame: 1,
            seed: 0,
            genie: true,
            noise_power: 1.0,
            detection_factor: DEFAULT_DETECTION_FACTOR,
            averaging: Averaging::Decibel,
            profile: ProfileConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub radars: Vec<RadarConfig>,
    #[serde(default)]
    pub targets: Vec<TargetConfig>,
    #[serde(default)]
    pub links: Vec<InterferenceLink>,
    #[serde(default)]
    pub run: RunConfig,
}

impl ScenarioConfig {
    /// Two radars sharing six 150 MHz subbands above 77 GHz, with PRIs of
    /// 20 and 40 µs (512 and 256 chirps per frame), one target at 20 m
    /// closing at 15 m/s seen by both at 20 dB SNR, and 30 dB mutual INR.
    pub fn two_radar(policy: Policy) -> Self {
        let radar = |t_pri: f64, chirps: usize| RadarConfig {
            f_c: 77e9,
            b_a: 150e6,
            subbands: 6,
            t_pri,
            t_a: None,
            f_s: 20e6,
            chirps,
            policy: policy.clone(),
        };
        let target = |radar: usize| TargetConfig {
            radar,
            range: 20.0,
            velocity: -15.0,
            snr_db: 20.0,
            phase: None,
        };
        let link = |source: usize, victim: usize| InterferenceLink {
            source,
            victim,
            inr_db: 30.0,
        };
        Self {
            radars: vec![radar(20e-6, 512), radar(40e-6, 256)],
            targets: vec![target(0), target(1)],
            links: vec![link(1, 0), link(0, 1)],
            run: RunConfig::default(),
        }
    }

    pub fn with_policies(mut self, policies: &[Policy]) -> Self {
        for (radar, policy) in self.radars.iter_mut().zip(policies) {
            radar.policy = policy.clone();
        }
        self
    }

    pub fn players(&self) -> usize {
        self.radars.len()
    }

    pub fn actions(&self) -> usize {
        self.radars.first().map_or(0, |r| r.subbands)
    }

    pub fn episodes(&self) -> usize {
        self.run.frames * self.run.episodes_per_frame
    }

    pub fn params(&self) -> Vec<ChirpParams> {
        self.radars.iter().map(RadarConfig::params).collect()
    }

    pub fn targets_of(&self, radar: usize) -> Vec<Target> {
        self.targets
            .iter()
            .filter(|t| t.radar == radar)
            .map(TargetConfig::target)
            .collect()
    }

    /// Every violated invariant, each naming the offending field.
    pub fn validate(&self) -> Vec<String> {
        let mut errors = Vec::new();
        if self.radars.is_empty() {
            errors.push("radars: at least one radar is required".to_string());
        }
        let first = self.radars.first();
        for (i, radar) in self.radars.iter().enumerate() {
            let params = radar.params();
            errors.extend(params.validate().into_iter().map(|e| format!("radars[{i}]: {e}")));
            if let Some(first) = first {
                if radar.f_c != first.f_c || radar.b_a != first.b_a || radar.subbands != first.subbands {
                    errors.push(format!(
                        "radars[{i}]: f_c, b_a and subbands must match radars[0] (shared action set)"
                    ));
                }
                let (t0, ti) = (first.t_pri * first.chirps as f64, radar.t_pri * radar.chirps as f64);
                if (t0 - ti).abs() > 1e-9 * t0.abs() {
                    errors.push(format!(
                        "radars[{i}]: frame duration {ti:e} s differs from radars[0] ({t0:e} s)"
                    ));
                }
            }
            if self.run.episodes_per_frame > 0 && radar.chirps % self.run.episodes_per_frame != 0 {
                errors.push(format!(
                    "radars[{i}].chirps: {} is not divisible by run.episodes_per_frame = {}",
                    radar.chirps, self.run.episodes_per_frame
                ));
            }
            match &radar.policy {
                Policy::Uniform => {}
                Policy::Noregret(cfg) => errors.extend(validate_noregret(cfg, radar.subbands, i)),
                Policy::Nash(cfg) => errors.extend(validate_nash(cfg, i)),
            }
        }
        for (j, t) in self.targets.iter().enumerate() {
            let Some(radar) = self.radars.get(t.radar) else {
                errors.push(format!("targets[{j}].radar: no radar {}", t.radar));
                continue;
            };
            let target = t.target();
            let target_errors = target.validate();
            if !target_errors.is_empty() {
                errors.extend(target_errors.into_iter().map(|e| format!("targets[{j}]: {e}")));
                continue;
            }
            let params = radar.params();
            let last = (params.chirps.max(1) - 1) as f64;
            let ranges = [target.range, target.range + last * target.velocity * params.t_pri];
            let max_range = params.f_s * SPEED_OF_LIGHT / (2.0 * params.alpha());
            if ranges.iter().any(|r| !(*r > 0.0 && *r < max_range)) {
                errors.push(format!(
                    "targets[{j}]: range leaves (0, {max_range:.1}) m within the frame (beat frequency above f_s)"
                ));
            }
        }
        for (j, link) in self.links.iter().enumerate() {
            let n = self.radars.len();
            if link.source >= n || link.victim >= n {
                errors.push(format!("links[{j}]: radar index out of range"));
            } else if link.source == link.victim {
                errors.push(format!("links[{j}]: source and victim must differ"));
            }
            if !link.inr_db.is_finite() {
                errors.push(format!("links[{j}].inr_db must be finite"));
            }
        }
        let run = &self.run;
        if run.frames == 0 {
            errors.push("run.frames must be at least 1".into());
        }
        if run.episodes_per_frame == 0 {
            errors.push("run.episodes_per_frame must be at least 1".into());
        }
        if !(run.noise_power > 0.0 && run.noise_power.is_finite()) {
            errors.push(format!("run.noise_power must be positive (got {})", run.noise_power));
        }
        if !(run.detection_factor > 1.0) {
            errors.push(format!("run.detection_factor must exceed 1 (got {})", run.detection_factor));
        }
        if run.profile.enabled {
            if run.profile.fine_per_bin == 0 {
                errors.push("run.profile.fine_per_bin must be at least 1".into());
            }
            if !(run.profile.max_range > 0.0) {
                errors.push("run.profile.max_range must be positive".into());
            }
        }
        errors
    }

    pub fn check(&self) -> Result<()> {
        let errors = self.validate();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errors))
        }
    }
}

fn validate_noregret(cfg: &NoRegretConfig, subbands: usize, i: usize) -> Vec<String> {
    let mut errors: Vec<String> = cfg
        .validate(subbands)
        .into_iter()
        .map(|e| format!("radars[{i}].policy: {e}"))
        .collect();
    if subbands < 2 {
        errors.push(format!("radars[{i}].policy: noregret needs at least two subbands"));
    }
    errors
}

fn validate_nash(cfg: &NashHopperConfig, i: usize) -> Vec<String> {
    cfg.validate()
        .into_iter()
        .map(|e| format!("radars[{i}].policy: {e}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_radar_is_valid() {
        let cfg = ScenarioConfig::two_radar(Policy::Uniform);
        assert!(cfg.validate().is_empty(), "{:?}", cfg.validate());
        let params = cfg.params();
        assert_eq!(params[0].samples_per_chirp(), 320);
        assert_eq!(params[1].samples_per_chirp(), 640);
        assert!((params[1].t_a - 32e-6).abs() < 1e-18);
    }

    #[test]
    fn empty_radars_named() {
        let cfg = ScenarioConfig {
            radars: vec![],
            targets: vec![],
            links: vec![],
            run: RunConfig::default(),
        };
        let errors = cfg.validate();
        assert!(errors.iter().any(|e| e.starts_with("radars")), "{errors:?}");
    }

    #[test]
    fn divisibility_rule() {
        let mut cfg = ScenarioConfig::two_radar(Policy::Uniform);
        cfg.radars.truncate(1);
        cfg.targets.truncate(1);
        cfg.links.clear();
        cfg.radars[0].chirps = 500;
        cfg.run.episodes_per_frame = 50;
        assert!(cfg.validate().is_empty(), "{:?}", cfg.validate());
        cfg.run.episodes_per_frame = 60;
        assert_eq!(cfg.validate().len(), 1);
    }

    #[test]
    fn all_failures_reported() {
        let mut cfg = ScenarioConfig::two_radar(Policy::Uniform);
        cfg.radars[1].b_a = 100e6;
        cfg.radars[1].chirps = 255;
        cfg.targets[0].range = 1000.0;
        cfg.links[0].source = 0;
        cfg.run.noise_power = 0.0;
        let errors = cfg.validate();
        // shared action set, frame duration, bad target, self link, noise
        assert_eq!(errors.len(), 5, "{errors:?}");
    }
}
