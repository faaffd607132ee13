use std::cell::RefCell;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::linear_to_db;
use crate::error::{Error, Result};
use crate::hopping::{EpisodeStats, SubbandEstimate};

/// Default threshold factor on residual power relative to the noise (≈12 dB).
pub const DEFAULT_DETECTION_FACTOR: f64 = 16.0;

/// Fraction of flagged samples above which a chirp counts as interfered.
const FLAG_FRACTION: f64 = 0.01;

/// Below this fraction of unflagged samples the echo amplitude is fitted on
/// the whole chirp instead.
const MIN_RETAINED_FRACTION: f64 = 0.1;

/// Result of splitting one received chirp into clean and interference parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub flag: bool,
    pub clean: Vec<Complex64>,
    pub interference: Vec<Complex64>,
    /// Estimated echo power.
    pub signal_power: f64,
    /// Estimated interference power averaged over the chirp.
    pub interference_power: f64,
}

/// Frequency (rad/sample) and complex amplitude of the dominant tone.
#[derive(Debug, Clone, Copy)]
struct Tone {
    omega: f64,
    amplitude: Complex64,
}

impl Tone {
    fn waveform(&self, len: usize) -> Vec<Complex64> {
        let step = Complex64::from_polar(1.0, self.omega);
        let mut cur = self.amplitude;
        (0..len)
            .map(|_| {
                let x = cur;
                cur *= step;
                x
            })
            .collect()
    }
}

fn correlate(samples: &[Complex64], omega: f64, keep: impl Fn(usize) -> bool) -> (Complex64, usize) {
    let step = Complex64::from_polar(1.0, -omega);
    let mut rot = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut used = 0;
    for (n, x) in samples.iter().enumerate() {
        if keep(n) {
            acc += x * rot;
            used += 1;
        }
        rot *= step;
    }
    (acc, used)
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Brackets the peak to 0.618^14 of two bins, below 0.002 bins.
const GOLDEN_ITERATIONS: usize = 14;

/// Fits the strongest sinusoid: FFT peak, then golden-section refinement
/// of the periodogram within one bin on either side.
fn fit_tone(samples: &[Complex64]) -> Tone {
    let n = samples.len();
    let mut spectrum = samples.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n)).process(&mut spectrum);
    let peak = spectrum
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let bin = TAU / n as f64;
    let power = |omega: f64| correlate(samples, omega, |_| true).0.norm_sqr();
    let (mut lo, mut hi) = ((peak as f64 - 1.0) * bin, (peak as f64 + 1.0) * bin);
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - golden * (hi - lo);
    let mut b = lo + golden * (hi - lo);
    let (mut pa, mut pb) = (power(a), power(b));
    for _ in 0..GOLDEN_ITERATIONS {
        if pa > pb {
            hi = b;
            b = a;
            pb = pa;
            a = hi - golden * (hi - lo);
            pa = power(a);
        } else {
            lo = a;
            a = b;
            pa = pb;
            b = lo + golden * (hi - lo);
            pb = power(b);
        }
    }
    let omega = 0.5 * (lo + hi);
    let (acc, used) = correlate(samples, omega, |_| true);
    Tone {
        omega,
        amplitude: acc / used as f64,
    }
}

/// Echo power from a tone refit on the unmasked samples, debiased for noise.
fn echo_power(samples: &[Complex64], tone: Tone, mask: &[bool], noise_power: f64) -> (Tone, f64) {
    let retained = mask.iter().filter(|m| !**m).count();
    let (tone, used) = if retained == samples.len() || (retained as f64) < MIN_RETAINED_FRACTION * samples.len() as f64 {
        (tone, samples.len())
    } else {
        let (acc, used) = correlate(samples, tone.omega, |n| !mask[n]);
        let refit = Tone {
            omega: tone.omega,
            amplitude: acc / used as f64,
        };
        (refit, used)
    };
    let power = (tone.amplitude.norm_sqr() - noise_power / used as f64).max(0.0);
    (tone, power)
}

/// Threshold detector: removes the dominant echo tone and flags samples
/// whose residual power exceeds `factor·noise_power`.
///
/// The chirp is declared interfered when more than 1% of its samples are
/// flagged. `clean` has the flagged samples zeroed and `interference`
/// holds them.
pub fn detect_interference(samples: &[Complex64], noise_power: f64, factor: f64) -> Result<Detection> {
    if !(factor > 1.0) {
        return Err(Error::invalid(format!("detection factor must exceed 1 (got {factor})")));
    }
    if !(noise_power > 0.0) {
        return Err(Error::invalid(format!("noise power must be positive (got {noise_power})")));
    }
    if samples.is_empty() {
        return Err(Error::invalid("cannot run detection on an empty chirp"));
    }
    let tone = fit_tone(samples);
    let threshold = factor * noise_power;
    let mask: Vec<bool> = samples
        .iter()
        .zip(tone.waveform(samples.len()))
        .map(|(x, s)| (x - s).norm_sqr() > threshold)
        .collect();
    let flagged = mask.iter().filter(|m| **m).count();
    let flag = flagged as f64 > FLAG_FRACTION * samples.len() as f64;

    let (tone, signal_power) = echo_power(samples, tone, &mask, noise_power);
    let excess: f64 = samples
        .iter()
        .zip(tone.waveform(samples.len()))
        .zip(&mask)
        .filter(|(_, m)| **m)
        .map(|((x, s), _)| (x - s).norm_sqr())
        .sum::<f64>()
        - flagged as f64 * noise_power;
    let interference_power = excess.max(0.0) / samples.len() as f64;

    let zero = Complex64::new(0.0, 0.0);
    let clean = samples
        .iter()
        .zip(&mask)
        .map(|(x, m)| if *m { zero } else { *x })
        .collect();
    let interference = samples
        .iter()
        .zip(&mask)
        .map(|(x, m)| if *m { *x } else { zero })
        .collect();
    Ok(Detection {
        flag,
        clean,
        interference,
        signal_power,
        interference_power,
    })
}

impl Detection {
    /// Ground-truth split: `interference` is the synthesized interference
    /// and the flag is set iff any of it is nonzero.
    pub fn genie(samples: &[Complex64], interference: &[Complex64], noise_power: f64) -> Result<Self> {
        if samples.len() != interference.len() || samples.is_empty() {
            return Err(Error::invalid("genie detection needs equal, non-empty sample vectors"));
        }
        let clean: Vec<Complex64> = samples.iter().zip(interference).map(|(x, i)| x - i).collect();
        let flag = interference.iter().any(|i| i.norm_sqr() > 0.0);
        let tone = fit_tone(&clean);
        let (_, signal_power) = echo_power(&clean, tone, &vec![false; clean.len()], noise_power);
        let interference_power =
            interference.iter().map(|i| i.norm_sqr()).sum::<f64>() / interference.len() as f64;
        Ok(Self {
            flag,
            clean,
            interference: interference.to_vec(),
            signal_power,
            interference_power,
        })
    }

    /// Per-chirp SINR and, when interference-free, SNR.
    pub fn measurement(&self, subband: usize, noise_power: f64) -> ChirpMeasurement {
        ChirpMeasurement {
            subband,
            interfered: self.flag,
            sinr: self.signal_power / (self.interference_power + noise_power),
            snr: (!self.flag).then(|| self.signal_power / noise_power),
        }
    }
}

/// Linear SINR/SNR measured on one chirp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpMeasurement {
    pub subband: usize,
    pub interfered: bool,
    pub sinr: f64,
    pub snr: Option<f64>,
}

/// How per-chirp ratios are averaged within an episode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    /// Mean of linear ratios, then dB.
    #[default]
    Linear,
    /// Mean of per-chirp dB values.
    Decibel,
}

impl Averaging {
    /// Average of linear ratios in dB, `None` when empty.
    pub fn mean_db(self, values: &[f64]) -> Option<f64> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        Some(match self {
            Averaging::Linear => linear_to_db(values.iter().sum::<f64>() / n),
            Averaging::Decibel => values.iter().map(|v| linear_to_db(*v)).sum::<f64>() / n,
        })
    }
}

/// Windowed per-subband SINR and SNR estimates for one episode.
pub fn estimate_episode_sinr(
    measurements: &[ChirpMeasurement],
    subbands: usize,
    averaging: Averaging,
) -> Result<EpisodeStats> {
    if measurements.is_empty() {
        return Err(Error::invalid("an episode needs at least one chirp"));
    }
    let mut sinr = vec![Vec::new(); subbands];
    let mut snr = vec![Vec::new(); subbands];
    for m in measurements {
        if m.subband >= subbands {
            return Err(Error::invalid(format!(
                "subband {} out of range for {subbands} subbands",
                m.subband
            )));
        }
        sinr[m.subband].push(m.sinr);
        if let Some(s) = m.snr {
            snr[m.subband].push(s);
        }
    }
    let estimates = sinr
        .iter()
        .zip(&snr)
        .map(|(all, clean)| SubbandEstimate {
            count: all.len(),
            clean_count: clean.len(),
            sinr_db: averaging.mean_db(all),
            snr_db: averaging.mean_db(clean),
        })
        .collect();
    Ok(EpisodeStats::new(estimates))
}

#[cfg(test)]
mod tests {
    use super::super::testutil::radar;
    use super::super::{compose_received, dechirped_echo, dechirped_interference, Target};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(subband: usize, sinr: f64, snr: Option<f64>) -> ChirpMeasurement {
        ChirpMeasurement {
            subband,
            interfered: snr.is_none(),
            sinr,
            snr,
        }
    }

    #[test]
    fn noise_only_rarely_flags() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let flags = (0..1000)
            .filter(|_| {
                let y = compose_received(320, &[], &[], 1.0, &mut rng).unwrap();
                detect_interference(&y, 1.0, 16.0).unwrap().flag
            })
            .count();
        assert!(flags <= 10, "{flags} false alarms");
    }

    #[test]
    fn strong_interference_detected() {
        let victim = radar(20.0, 4);
        let source = radar(40.0, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let target = Target::new(20.0, -15.0, 20.0);
        let hits = (0..200)
            .filter(|i| {
                let echo = dechirped_echo(&victim, &target, 0, 0.0, rng.random::<f64>() * TAU).unwrap();
                let offset = if i % 2 == 0 { 0.0 } else { -20e-6 };
                let inter = dechirped_interference(&victim, &source, 30.0, offset, true, rng.random::<f64>() * TAU);
                let y = compose_received(320, &[echo], &[inter], 1.0, &mut rng).unwrap();
                detect_interference(&y, 1.0, 16.0).unwrap().flag
            })
            .count();
        assert!(hits >= 198, "{hits}/200");
    }

    #[test]
    fn clean_echo_power_estimate() {
        let victim = radar(20.0, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let echo = dechirped_echo(&victim, &Target::new(23.37, 4.0, 20.0), 0, 0.0, 0.5).unwrap();
        let y = compose_received(320, &[echo], &[], 1.0, &mut rng).unwrap();
        let d = detect_interference(&y, 1.0, 16.0).unwrap();
        assert!(!d.flag);
        assert!((linear_to_db(d.signal_power) - 20.0).abs() < 0.3, "{}", d.signal_power);
        assert_eq!(d.interference_power, 0.0);
        assert_eq!(d.clean, y);
    }

    #[test]
    fn split_is_complementary() {
        let victim = radar(20.0, 4);
        let source = radar(40.0, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let echo = dechirped_echo(&victim, &Target::new(20.0, 0.0, 20.0), 0, 0.0, 0.0).unwrap();
        let inter = dechirped_interference(&victim, &source, 30.0, -20e-6, true, 0.0);
        let y = compose_received(320, &[echo], &[inter], 1.0, &mut rng).unwrap();
        let d = detect_interference(&y, 1.0, 16.0).unwrap();
        assert!(d.flag);
        for ((x, c), i) in y.iter().zip(&d.clean).zip(&d.interference) {
            assert_eq!(c + i, *x);
        }
        let theory = 100.0 / (0.75 * 1000.0 + 1.0);
        let sinr = d.measurement(0, 1.0).sinr;
        assert!((linear_to_db(sinr) - linear_to_db(theory)).abs() < 1.0);
    }

    #[test]
    fn genie_flag_matches_truth() {
        let victim = radar(20.0, 4);
        let source = radar(40.0, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for collide in [false, true] {
            let echo = dechirped_echo(&victim, &Target::new(20.0, 0.0, 20.0), 0, 0.0, 0.0).unwrap();
            let inter = dechirped_interference(&victim, &source, 30.0, 0.0, collide, 0.0);
            let y = compose_received(320, &[echo], std::slice::from_ref(&inter), 1.0, &mut rng).unwrap();
            let d = Detection::genie(&y, &inter, 1.0).unwrap();
            assert_eq!(d.flag, collide);
            let expected = if collide { 1000.0 } else { 0.0 };
            assert!((d.interference_power - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn invalid_detection_inputs() {
        let y = vec![Complex64::new(0.0, 0.0); 8];
        assert!(detect_interference(&y, 1.0, 1.0).is_err());
        assert!(detect_interference(&y, 0.0, 16.0).is_err());
        assert!(detect_interference(&[], 1.0, 16.0).is_err());
    }

    #[test]
    fn single_clean_chirp() {
        let stats = estimate_episode_sinr(&[m(2, 100.0, Some(100.0))], 4, Averaging::Linear).unwrap();
        assert!((stats.snr_db(2).unwrap() - 20.0).abs() < 1e-12);
        assert!((stats.sinr_db(2).unwrap() - 20.0).abs() < 1e-12);
        assert_eq!(stats.count(2), 1);
    }

    #[test]
    fn linear_mean_of_two_chirps() {
        let stats = estimate_episode_sinr(&[m(0, 10.0, None), m(0, 20.0, None)], 2, Averaging::Linear).unwrap();
        assert!((stats.sinr_db(0).unwrap() - 10.0 * 15f64.log10()).abs() < 1e-12);
        assert_eq!(stats.snr_db(0), None);
        assert_eq!(stats.clean_count(0), 0);
        let db = estimate_episode_sinr(&[m(0, 10.0, None), m(0, 100.0, None)], 2, Averaging::Decibel).unwrap();
        assert!((db.sinr_db(0).unwrap() - 15.0).abs() < 1e-12);
    }

    #[test]
    fn unplayed_subband_has_no_estimate() {
        let stats = estimate_episode_sinr(&[m(0, 10.0, Some(10.0))], 3, Averaging::Linear).unwrap();
        assert_eq!(stats.sinr_db(1), None);
        assert_eq!(stats.snr_db(2), None);
        assert_eq!(stats.count(1), 0);
    }

    #[test]
    fn estimator_rejects_bad_input() {
        assert!(estimate_episode_sinr(&[], 3, Averaging::Linear).is_err());
        assert!(estimate_episode_sinr(&[m(3, 1.0, None)], 3, Averaging::Linear).is_err());
    }
}
