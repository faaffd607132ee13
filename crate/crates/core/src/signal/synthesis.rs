use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{db_to_linear, ChirpParams, Target, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Instantaneous phase `2π(f_k·t + α·t²/2)` of the transmitted chirp.
pub fn tx_chirp_phase(params: &ChirpParams, f_k: f64, t: f64) -> Result<f64> {
    if !(0.0..params.t_a).contains(&t) {
        return Err(Error::invalid(format!("t = {t} s outside [0, {})", params.t_a)));
    }
    Ok(TAU * (f_k * t + 0.5 * params.alpha() * t * t))
}

/// Dechirped echo of `target` in chirp `k` (zero-based) transmitted at
/// offset `db_k` above `f_c`, with unit noise power as the amplitude reference.
///
/// `phase` is the target's complex phase for this frame.
pub fn dechirped_echo(
    params: &ChirpParams,
    target: &Target,
    k: usize,
    db_k: f64,
    phase: f64,
) -> Result<Vec<Complex64>> {
    let travelled = target.range + k as f64 * target.velocity * params.t_pri;
    let delay = 2.0 * travelled / SPEED_OF_LIGHT;
    if !(delay > 0.0 && delay < params.t_a) {
        return Err(Error::invalid(format!(
            "round-trip delay {delay:e} s at chirp {k} is outside (0, T_a = {:e} s)",
            params.t_a
        )));
    }
    let amplitude = db_to_linear(target.snr_db).sqrt();
    let f_r = params.beat_frequency(target.range);
    let f_d = params.doppler_cycles(target.velocity);
    let (bin, eps) = params.coarse_fine(target.range);
    let coarse = bin as f64 * params.coarse_bin_width();
    let hop = 2.0 * (coarse + eps + k as f64 * target.velocity * params.t_pri) / SPEED_OF_LIGHT * db_k;
    let slow = phase + TAU * (f_d * k as f64 - hop);
    let step = Complex64::from_polar(1.0, -TAU * f_r / params.f_s);
    let mut cur = Complex64::from_polar(amplitude, slow);
    Ok((0..params.samples_per_chirp())
        .map(|_| {
            let x = cur;
            cur *= step;
            x
        })
        .collect())
}

/// Dechirped interference from a `source` chirp that started `offset`
/// seconds after the victim's chirp (negative when it started earlier).
///
/// Samples where both chirps are active carry a residual chirp of slope
/// `α_victim − α_source` and power `10^(inr_db/10)` relative to unit noise;
/// all other samples are zero. Returns zeros when `collide` is false.
pub fn dechirped_interference(
    victim: &ChirpParams,
    source: &ChirpParams,
    inr_db: f64,
    offset: f64,
    collide: bool,
    phase: f64,
) -> Vec<Complex64> {
    let n_s = victim.samples_per_chirp();
    let mut out = vec![Complex64::new(0.0, 0.0); n_s];
    if !collide {
        return out;
    }
    let amplitude = db_to_linear(inr_db).sqrt();
    let slope = victim.alpha() - source.alpha();
    let a_src = source.alpha();
    for (n, x) in out.iter_mut().enumerate() {
        let t = n as f64 / victim.f_s;
        let local = t - offset;
        if (0.0..source.t_a).contains(&local) {
            let theta = phase + std::f64::consts::PI * slope * t * t + TAU * a_src * offset * t;
            *x = Complex64::from_polar(amplitude, theta);
        }
    }
    out
}

/// Sum of all components plus circular complex Gaussian noise of power `noise_power`.
pub fn compose_received<R: Rng + ?Sized>(
    n_s: usize,
    echoes: &[Vec<Complex64>],
    interference: &[Vec<Complex64>],
    noise_power: f64,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    if let Some(bad) = echoes.iter().chain(interference).find(|v| v.len() != n_s) {
        return Err(Error::invalid(format!(
            "component of length {} does not match {n_s} samples",
            bad.len()
        )));
    }
    if !(noise_power >= 0.0) {
        return Err(Error::invalid(format!("noise power {noise_power} is negative")));
    }
    let sigma = (noise_power / 2.0).sqrt();
    let mut out = vec![Complex64::new(0.0, 0.0); n_s];
    for component in echoes.iter().chain(interference) {
        for (o, c) in out.iter_mut().zip(component) {
            *o += c;
        }
    }
    if noise_power > 0.0 {
        for o in out.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *o += Complex64::new(sigma * re, sigma * im);
        }
    }
    Ok(out)
}

/// Interference-free frame: every target's echo in each chirp, hopped by
/// `hops[k]`, plus noise of power `noise_power`. Targets without a fixed
/// phase draw one uniformly from `rng` for the whole frame.
pub fn synthesize_frame<R: Rng + ?Sized>(
    params: &ChirpParams,
    targets: &[Target],
    hops: &[f64],
    noise_power: f64,
    rng: &mut R,
) -> Result<ChirpFrame> {
    let phases: Vec<f64> = targets
        .iter()
        .map(|t| t.phase.unwrap_or_else(|| TAU * rng.random::<f64>()))
        .collect();
    let scale = noise_power.max(0.0).sqrt();
    let n_s = params.samples_per_chirp();
    let chirps = hops
        .iter()
        .enumerate()
        .map(|(k, &db)| {
            let echoes = targets
                .iter()
                .zip(&phases)
                .map(|(t, &phase)| {
                    dechirped_echo(params, t, k, db, phase).map(|e| e.into_iter().map(|x| x * scale).collect())
                })
                .collect::<Result<Vec<Vec<Complex64>>>>()?;
            compose_received(n_s, &echoes, &[], noise_power, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    ChirpFrame::new(n_s, chirps, hops.to_vec())
}

/// Fast-time × slow-time samples of one frame plus the hop offsets `Δb_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChirpFrame {
    samples_per_chirp: usize,
    chirps: Vec<Vec<Complex64>>,
    hops: Vec<f64>,
}

impl ChirpFrame {
    pub fn new(samples_per_chirp: usize, chirps: Vec<Vec<Complex64>>, hops: Vec<f64>) -> Result<Self> {
        if chirps.len() != hops.len() {
            return Err(Error::invalid(format!(
                "{} chirps but {} hop offsets",
                chirps.len(),
                hops.len()
            )));
        }
        if chirps.iter().any(|c| c.len() != samples_per_chirp) {
            return Err(Error::invalid(format!(
                "every chirp must hold {samples_per_chirp} samples"
            )));
        }
        Ok(Self {
            samples_per_chirp,
            chirps,
            hops,
        })
    }

    pub fn samples_per_chirp(&self) -> usize {
        self.samples_per_chirp
    }

    pub fn chirp_count(&self) -> usize {
        self.chirps.len()
    }

    pub fn chirp(&self, k: usize) -> &[Complex64] {
        &self.chirps[k]
    }

    pub fn chirps(&self) -> &[Vec<Complex64>] {
        &self.chirps
    }

    pub fn hops(&self) -> &[f64] {
        &self.hops
    }

    /// Sample `n` of chirp `k`.
    pub fn sample(&self, n: usize, k: usize) -> Complex64 {
        self.chirps[k][n]
    }
}
