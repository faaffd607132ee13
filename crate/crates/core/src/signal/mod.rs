//! FMCW baseband model: chirp geometry, echo and interference synthesis,
//! interference detection, per-episode SINR estimation and range/Doppler
//! processing with nonuniform subband hopping.
//!
//! Powers are expressed relative to the receiver noise power, so a target
//! with `snr_db = 20` has a dechirped echo of power `100·noise_power`.

mod detect;
mod dump;
mod processing;
mod synthesis;

pub use detect::{
    detect_interference, estimate_episode_sinr, Averaging, ChirpMeasurement, Detection, DEFAULT_DETECTION_FACTOR,
};
pub use dump::{read_frame, read_hops, write_frame, write_hops, FRAME_MAGIC, FRAME_VERSION};
pub use processing::{
    coarse_peak, estimate_target, fine_range_doppler, range_fft, range_profile_at_velocity, FineRangeProfile,
    RangeDopplerSurface, RangeMap, TargetEstimate, Window,
};
pub use synthesis::{
    compose_received, dechirped_echo, dechirped_interference, synthesize_frame, tx_chirp_phase, ChirpFrame,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light (m/s).
pub const SPEED_OF_LIGHT: f64 = 3e8;

/// Linear floor applied before converting a power ratio to dB (−60 dB).
pub const RATIO_FLOOR: f64 = 1e-6;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `10·log10(ratio)`, with the ratio floored at [`RATIO_FLOOR`].
pub fn linear_to_db(ratio: f64) -> f64 {
    10.0 * ratio.max(RATIO_FLOOR).log10()
}

/// Chirp geometry of one radar. All quantities in SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChirpParams {
    /// Start frequency of the lowest subband (Hz).
    pub f_c: f64,
    /// Bandwidth swept by one chirp (Hz).
    pub b_a: f64,
    /// Number of subbands `A`.
    pub subbands: usize,
    /// Pulse repetition interval (s).
    pub t_pri: f64,
    /// Active sweep time (s).
    pub t_a: f64,
    /// ADC sample rate (Hz).
    pub f_s: f64,
    /// Chirps per frame `K`.
    pub chirps: usize,
}

impl ChirpParams {
    pub fn new(f_c: f64, b_a: f64, subbands: usize, t_pri: f64, t_a: f64, f_s: f64, chirps: usize) -> Result<Self> {
        let params = Self {
            f_c,
            b_a,
            subbands,
            t_pri,
            t_a,
            f_s,
            chirps,
        };
        let errors = params.validate();
        if errors.is_empty() {
            Ok(params)
        } else {
            Err(Error::Validation(errors))
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errors = Vec::new();
        let positive = [
            ("f_c", self.f_c),
            ("b_a", self.b_a),
            ("t_pri", self.t_pri),
            ("t_a", self.t_a),
            ("f_s", self.f_s),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                errors.push(format!("{name} must be positive and finite (got {value})"));
            }
        }
        if self.subbands == 0 {
            errors.push("subbands must be at least 1".into());
        }
        if self.chirps == 0 {
            errors.push("chirps must be at least 1".into());
        }
        if self.t_a >= self.t_pri {
            errors.push(format!(
                "active time {} s must be shorter than the PRI {} s",
                self.t_a, self.t_pri
            ));
        }
        if errors.is_empty() && self.samples_per_chirp() < 2 {
            errors.push(format!(
                "f_s·T_a = {} gives fewer than 2 samples per chirp",
                self.f_s * self.t_a
            ));
        }
        errors
    }

    /// Chirp slope `α = B_a/T_a` (Hz/s).
    pub fn alpha(&self) -> f64 {
        self.b_a / self.t_a
    }

    /// `N_s = ⌊f_s·T_a⌋`.
    pub fn samples_per_chirp(&self) -> usize {
        // Guard against 319.99999… from binary rounding of f_s·T_a.
        (self.f_s * self.t_a + 1e-9).floor() as usize
    }

    /// Total hopping bandwidth `B = A·B_a`.
    pub fn total_bandwidth(&self) -> f64 {
        self.subbands as f64 * self.b_a
    }

    /// Frame duration `K·T_pri`.
    pub fn frame_duration(&self) -> f64 {
        self.chirps as f64 * self.t_pri
    }

    /// Coarse range bin width `c/(2B_a)`.
    pub fn coarse_bin_width(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.b_a)
    }

    /// Fine range bin width `c/(2B)`.
    pub fn fine_bin_width(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.total_bandwidth())
    }

    /// Frequency offset `Δb` of subband `a` (zero-based) from `f_c`.
    pub fn hop_offset(&self, subband: usize) -> f64 {
        subband as f64 * self.b_a
    }

    /// Beat frequency `2rα/c` of a target at range `r`.
    pub fn beat_frequency(&self, range: f64) -> f64 {
        2.0 * range * self.alpha() / SPEED_OF_LIGHT
    }

    /// Doppler shift in cycles per chirp, `−2·ṙ·T_pri·f_c/c`.
    pub fn doppler_cycles(&self, velocity: f64) -> f64 {
        -2.0 * velocity * self.t_pri * self.f_c / SPEED_OF_LIGHT
    }

    /// Largest unambiguous |velocity|, where the Doppler reaches half a cycle per chirp.
    pub fn max_velocity(&self) -> f64 {
        SPEED_OF_LIGHT / (4.0 * self.t_pri * self.f_c)
    }

    /// Splits a range into its coarse bin index and the offset `ε₀` from the bin center.
    pub fn coarse_fine(&self, range: f64) -> (usize, f64) {
        let width = self.coarse_bin_width();
        let bin = (range / width).round().max(0.0);
        (bin as usize, range - bin * width)
    }
}

/// A point target seen by one radar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Target {
    /// Initial range (m).
    pub range: f64,
    /// Radial velocity (m/s), negative when approaching.
    pub velocity: f64,
    /// Per-chirp post-dechirp SNR (dB).
    pub snr_db: f64,
    /// Fixed complex phase (rad). Drawn at random per frame when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
}

impl Target {
    pub fn new(range: f64, velocity: f64, snr_db: f64) -> Self {
        Self {
            range,
            velocity,
            snr_db,
            phase: None,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = Some(phase);
        self
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errors = Vec::new();
        if !(self.range > 0.0 && self.range.is_finite()) {
            errors.push(format!("target range must be positive (got {})", self.range));
        }
        if !self.velocity.is_finite() {
            errors.push("target velocity must be finite".into());
        }
        if !self.snr_db.is_finite() {
            errors.push("target snr_db must be finite".into());
        }
        errors
    }
}

/// Direct-path interference from `source` into `victim`, active whenever
/// their chirps overlap in time and subband.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferenceLink {
    pub source: usize,
    pub victim: usize,
    /// Interference-to-noise ratio at the victim during a full overlap (dB).
    pub inr_db: f64,
}

/// `signal/(interference + noise)`.
pub fn theoretical_sinr(signal_power: f64, interference_power: f64, noise_power: f64) -> Result<f64> {
    if !(noise_power > 0.0) {
        return Err(Error::invalid(format!("noise power must be positive (got {noise_power})")));
    }
    if !(signal_power >= 0.0) || !(interference_power >= 0.0) {
        return Err(Error::invalid("signal and interference powers must be non-negative"));
    }
    Ok(signal_power / (interference_power + noise_power))
}


#[cfg(test)]
mod tests {
    use super::testutil::radar;
    use super::*;

    #[test]
    fn derived_geometry() {
        let r1 = radar(20.0, 512);
        let r2 = radar(40.0, 256);
        assert_eq!(r1.samples_per_chirp(), 320);
        assert_eq!(r2.samples_per_chirp(), 640);
        assert!((r1.alpha() - 9.375e12).abs() < 1.0);
        assert!((r1.coarse_bin_width() - 1.0).abs() < 1e-12);
        assert!((r1.fine_bin_width() - 1.0 / 6.0).abs() < 1e-12);
        assert!((r1.frame_duration() - r2.frame_duration()).abs() < 1e-15);
        assert!((r1.beat_frequency(20.0) - 1.25e6).abs() < 1e-6);
        assert!((r1.doppler_cycles(-15.0) - 0.154).abs() < 1e-9);
    }

    #[test]
    fn coarse_fine_split() {
        let r1 = radar(20.0, 8);
        assert_eq!(r1.coarse_fine(20.0), (20, 0.0));
        let (bin, eps) = r1.coarse_fine(20.3);
        assert_eq!(bin, 20);
        assert!((eps - 0.3).abs() < 1e-12);
        let (bin, eps) = r1.coarse_fine(20.7);
        assert_eq!(bin, 21);
        assert!((eps + 0.3).abs() < 1e-12);
    }

    #[test]
    fn invalid_params_collect_all_errors() {
        let err = ChirpParams::new(77e9, -1.0, 0, 20e-6, 30e-6, 20e6, 0).unwrap_err();
        match err {
            Error::Validation(list) => assert_eq!(list.len(), 4, "{list:?}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sinr_formula() {
        assert_eq!(theoretical_sinr(100.0, 0.0, 1.0).unwrap(), 100.0);
        assert_eq!(theoretical_sinr(100.0, 90.0, 10.0).unwrap(), 1.0);
        assert!(theoretical_sinr(100.0, 10.0, 1.0).unwrap() > theoretical_sinr(100.0, 20.0, 1.0).unwrap());
        assert!(theoretical_sinr(1.0, 0.0, 0.0).is_err());
        assert!((linear_to_db(100.0 / 1001.0) + 10.0).abs() < 0.01);
        assert_eq!(linear_to_db(0.0), -60.0);
    }
}
