use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{ChirpFrame, ChirpParams, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Fast-time taper applied before the range FFT.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

impl Window {
    fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; n],
            Window::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * (TAU * i as f64 / n as f64).cos())
                .collect(),
        }
    }
}

/// Range spectra of every chirp in a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeMap {
    bins: usize,
    chirps: Vec<Vec<Complex64>>,
}

impl RangeMap {
    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn chirp_count(&self) -> usize {
        self.chirps.len()
    }

    pub fn value(&self, bin: usize, k: usize) -> Complex64 {
        self.chirps[k][bin]
    }

    pub fn spectrum(&self, k: usize) -> &[Complex64] {
        &self.chirps[k]
    }

    /// Slow-time sequence of one range bin.
    pub fn slow_time(&self, bin: usize) -> Vec<Complex64> {
        self.chirps.iter().map(|c| c[bin]).collect()
    }
}

/// Unitary fast-time DFT of every chirp.
///
/// The kernel has a positive exponent so that a dechirped echo
/// `exp(−j2π·f_r·t)` peaks at bin `f_r·N_s/f_s`, i.e. bin index equals
/// range in units of `c/(2B_a)`.
pub fn range_fft(frame: &ChirpFrame, window: Window) -> Result<RangeMap> {
    let n = frame.samples_per_chirp();
    if n < 2 {
        return Err(Error::invalid("range FFT needs at least two samples per chirp"));
    }
    let fft = FftPlanner::new().plan_fft_inverse(n);
    let taper = window.coefficients(n);
    let scale = 1.0 / (n as f64).sqrt();
    let chirps = frame
        .chirps()
        .iter()
        .map(|chirp| {
            let mut buf: Vec<Complex64> = chirp.iter().zip(&taper).map(|(x, w)| x * (w * scale)).collect();
            fft.process(&mut buf);
            buf
        })
        .collect();
    Ok(RangeMap { bins: n, chirps })
}

/// Matched-filter output over a (velocity, fine offset) grid for one coarse bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeDopplerSurface {
    pub coarse_bin: usize,
    /// Range of the coarse bin center (m).
    pub bin_center: f64,
    pub velocities: Vec<f64>,
    pub offsets: Vec<f64>,
    /// `10·log10(|corr|²/K)`, velocity-major.
    pub power_db: Vec<f64>,
}

impl RangeDopplerSurface {
    pub fn get(&self, v_index: usize, eps_index: usize) -> f64 {
        self.power_db[v_index * self.offsets.len() + eps_index]
    }

    /// Grid indices of the maximum.
    pub fn argmax(&self) -> (usize, usize) {
        let best = self
            .power_db
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        (best / self.offsets.len(), best % self.offsets.len())
    }

    /// `K` velocities spanning the unambiguous interval `[−v_max, v_max)`.
    pub fn default_velocities(params: &ChirpParams) -> Vec<f64> {
        let v_max = params.max_velocity();
        let k = params.chirps;
        (0..k).map(|i| -v_max + 2.0 * v_max * i as f64 / k as f64).collect()
    }

    /// `per_bin` offsets at the centers of equal cells covering
    /// `[−c/(4B_a), c/(4B_a)]`.
    pub fn fine_offsets(params: &ChirpParams, per_bin: usize) -> Vec<f64> {
        let w = params.coarse_bin_width();
        (0..per_bin)
            .map(|j| -0.5 * w + (j as f64 + 0.5) * w / per_bin as f64)
            .collect()
    }

    /// Default fine grid density `2B/B_a` per coarse bin.
    pub fn default_offsets(params: &ChirpParams) -> Vec<f64> {
        Self::fine_offsets(params, 2 * params.subbands)
    }
}

/// Joint velocity and fine-range matched filter over the slow-time sequence
/// of `coarse_bin`, compensating the hop-dependent phase of each chirp.
pub fn fine_range_doppler(
    map: &RangeMap,
    hops: &[f64],
    coarse_bin: usize,
    velocities: &[f64],
    offsets: &[f64],
    params: &ChirpParams,
) -> Result<RangeDopplerSurface> {
    if coarse_bin >= map.bins() {
        return Err(Error::invalid(format!(
            "coarse bin {coarse_bin} outside {} range bins",
            map.bins()
        )));
    }
    if hops.len() != map.chirp_count() {
        return Err(Error::invalid(format!(
            "{} hop offsets for {} chirps",
            hops.len(),
            map.chirp_count()
        )));
    }
    if velocities.is_empty() || offsets.is_empty() {
        return Err(Error::invalid("velocity and offset grids must be non-empty"));
    }
    let half = 0.5 * params.coarse_bin_width() * (1.0 + 1e-12);
    if let Some(bad) = offsets.iter().find(|e| e.abs() > half) {
        return Err(Error::invalid(format!(
            "fine offset {bad} m outside ±{} m",
            0.5 * params.coarse_bin_width()
        )));
    }

    // ε enters only through exp(j4π·ε·Δb/c), so group chirps by hop value.
    let mut groups: HashMap<u64, usize> = HashMap::new();
    let mut distinct: Vec<f64> = Vec::new();
    let group_of: Vec<usize> = hops
        .iter()
        .map(|h| {
            *groups.entry(h.to_bits()).or_insert_with(|| {
                distinct.push(*h);
                distinct.len() - 1
            })
        })
        .collect();

    let slow = map.slow_time(coarse_bin);
    let center = coarse_bin as f64 * params.coarse_bin_width();
    let k_count = slow.len() as f64;
    let steering: Vec<Vec<Complex64>> = offsets
        .iter()
        .map(|eps| {
            distinct
                .iter()
                .map(|db| Complex64::from_polar(1.0, TAU * 2.0 * eps * db / SPEED_OF_LIGHT))
                .collect()
        })
        .collect();

    let mut power_db = Vec::with_capacity(velocities.len() * offsets.len());
    let mut partial = vec![Complex64::new(0.0, 0.0); distinct.len()];
    for &v in velocities {
        let f_d = params.doppler_cycles(v);
        partial.iter_mut().for_each(|p| *p = Complex64::new(0.0, 0.0));
        for (k, x) in slow.iter().enumerate() {
            let kf = k as f64;
            let db = hops[k];
            let theta = TAU * (-f_d * kf + 2.0 * (center + kf * v * params.t_pri) * db / SPEED_OF_LIGHT);
            partial[group_of[k]] += x * Complex64::from_polar(1.0, theta);
        }
        for row in &steering {
            let corr: Complex64 = row.iter().zip(&partial).map(|(s, p)| s * p).sum();
            power_db.push(10.0 * (corr.norm_sqr() / k_count).max(1e-30).log10());
        }
    }
    Ok(RangeDopplerSurface {
        coarse_bin,
        bin_center: center,
        velocities: velocities.to_vec(),
        offsets: offsets.to_vec(),
        power_db,
    })
}

/// Magnitude versus range at a fixed velocity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FineRangeProfile {
    pub velocity: f64,
    pub ranges: Vec<f64>,
    pub magnitude_db: Vec<f64>,
}

impl FineRangeProfile {
    /// Index, range and level of the global maximum.
    pub fn peak(&self) -> (usize, f64, f64) {
        let i = self
            .magnitude_db
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        (i, self.ranges[i], self.magnitude_db[i])
    }

    /// Width of the main lobe at `drop_db` below the peak, with linear
    /// interpolation of both crossings. `None` if the profile never drops
    /// that far on one side.
    pub fn mainlobe_width(&self, drop_db: f64) -> Option<f64> {
        let (i, _, top) = self.peak();
        let level = top - drop_db;
        let crossing = |a: usize, b: usize| {
            let (ya, yb) = (self.magnitude_db[a], self.magnitude_db[b]);
            let t = (ya - level) / (ya - yb);
            self.ranges[a] + t * (self.ranges[b] - self.ranges[a])
        };
        let left = (1..=i).rev().find(|&j| self.magnitude_db[j - 1] < level).map(|j| crossing(j, j - 1))?;
        let right = (i..self.ranges.len() - 1)
            .find(|&j| self.magnitude_db[j + 1] < level)
            .map(|j| crossing(j, j + 1))?;
        Some(right - left)
    }

    /// Median level over ranges farther than `exclusion` from the peak.
    pub fn off_peak_median_db(&self, exclusion: f64) -> Option<f64> {
        let (_, center, _) = self.peak();
        let mut rest: Vec<f64> = self
            .ranges
            .iter()
            .zip(&self.magnitude_db)
            .filter(|(r, _)| (*r - center).abs() > exclusion)
            .map(|(_, m)| *m)
            .collect();
        if rest.is_empty() {
            return None;
        }
        rest.sort_by(f64::total_cmp);
        let mid = rest.len() / 2;
        Some(if rest.len().is_multiple_of(2) {
            0.5 * (rest[mid - 1] + rest[mid])
        } else {
            rest[mid]
        })
    }

    /// Local maxima strictly above both neighbors and above `floor_db`.
    pub fn local_maxima(&self, floor_db: f64) -> Vec<usize> {
        let m = &self.magnitude_db;
        (1..m.len().saturating_sub(1))
            .filter(|&i| m[i] > m[i - 1] && m[i] > m[i + 1] && m[i] > floor_db)
            .collect()
    }
}

/// Stitches per-bin surfaces into a range profile at velocity `v`.
pub fn range_profile_at_velocity(surfaces: &[RangeDopplerSurface], v: f64) -> Result<FineRangeProfile> {
    if surfaces.is_empty() {
        return Err(Error::invalid("no surfaces to stitch"));
    }
    let mut ordered: Vec<&RangeDopplerSurface> = surfaces.iter().collect();
    ordered.sort_by_key(|s| s.coarse_bin);
    let mut ranges = Vec::new();
    let mut magnitude_db = Vec::new();
    for s in ordered {
        let tol = 1e-9 * v.abs().max(1.0);
        let vi = s
            .velocities
            .iter()
            .position(|g| (g - v).abs() <= tol)
            .ok_or_else(|| Error::invalid(format!("velocity {v} m/s is not on the grid of bin {}", s.coarse_bin)))?;
        for (j, eps) in s.offsets.iter().enumerate() {
            ranges.push(s.bin_center + eps);
            magnitude_db.push(s.get(vi, j));
        }
    }
    Ok(FineRangeProfile {
        velocity: v,
        ranges,
        magnitude_db,
    })
}

/// Coarse bin with the largest power summed over all chirps.
pub fn coarse_peak(map: &RangeMap) -> usize {
    (0..map.bins())
        .map(|b| (b, map.chirps.iter().map(|c| c[b].norm_sqr()).sum::<f64>()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map_or(0, |(b, _)| b)
}

/// Location of the strongest target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetEstimate {
    pub coarse_bin: usize,
    /// Center of the coarse bin (m).
    pub coarse_range: f64,
    /// Coarse range plus the fine offset (m).
    pub range: f64,
    pub velocity: f64,
    pub power_db: f64,
}

/// Coarse peak from [`coarse_peak`], then the (velocity, offset) maximum of
/// [`fine_range_doppler`] over that bin and its two neighbors.
pub fn estimate_target(
    map: &RangeMap,
    hops: &[f64],
    velocities: &[f64],
    offsets: &[f64],
    params: &ChirpParams,
) -> Result<TargetEstimate> {
    let coarse = coarse_peak(map);
    let lo = coarse.saturating_sub(1);
    let hi = (coarse + 1).min(map.bins() - 1);
    let mut best: Option<TargetEstimate> = None;
    for bin in lo..=hi {
        let surface = fine_range_doppler(map, hops, bin, velocities, offsets, params)?;
        let (vi, ei) = surface.argmax();
        let power_db = surface.get(vi, ei);
        if best.is_none_or(|b| power_db > b.power_db) {
            best = Some(TargetEstimate {
                coarse_bin: coarse,
                coarse_range: coarse as f64 * params.coarse_bin_width(),
                range: surface.bin_center + surface.offsets[ei],
                velocity: surface.velocities[vi],
                power_db,
            });
        }
    }
    best.ok_or_else(|| Error::invalid("empty range map"))
}

#[cfg(test)]
mod tests {
    use super::super::testutil::radar;
    use super::super::{compose_received, dechirped_echo, Target};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn frame_for(
        params: &ChirpParams,
        targets: &[Target],
        hops: &[f64],
        noise: f64,
        rng: &mut ChaCha8Rng,
    ) -> ChirpFrame {
        let chirps = hops
            .iter()
            .enumerate()
            .map(|(k, db)| {
                let echoes: Vec<_> = targets
                    .iter()
                    .map(|t| dechirped_echo(params, t, k, *db, t.phase.unwrap_or(0.0)).unwrap())
                    .collect();
                compose_received(params.samples_per_chirp(), &echoes, &[], noise, rng).unwrap()
            })
            .collect();
        ChirpFrame::new(params.samples_per_chirp(), chirps, hops.to_vec()).unwrap()
    }

    fn random_hops(params: &ChirpParams, bands: &[usize], rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..params.chirps)
            .map(|_| params.hop_offset(bands[rng.random_range(0..bands.len())]))
            .collect()
    }

    fn profile(params: &ChirpParams, frame: &ChirpFrame, v: f64, per_bin: usize, bins: std::ops::Range<usize>) -> FineRangeProfile {
        let map = range_fft(frame, Window::Hann).unwrap();
        let offsets = RangeDopplerSurface::fine_offsets(params, per_bin);
        let surfaces: Vec<_> = bins
            .map(|b| fine_range_doppler(&map, frame.hops(), b, &[v], &offsets, params).unwrap())
            .collect();
        range_profile_at_velocity(&surfaces, v).unwrap()
    }

    #[test]
    fn tone_peaks_at_expected_bin() {
        let p = radar(20.0, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for range in [20.0, 7.0, 33.0] {
            let frame = frame_for(&p, &[Target::new(range, 0.0, 10.0)], &[0.0; 4], 0.0, &mut rng);
            let map = range_fft(&frame, Window::Rectangular).unwrap();
            let peak = (0..map.bins())
                .max_by(|a, b| map.value(*a, 0).norm().total_cmp(&map.value(*b, 0).norm()))
                .unwrap();
            let f_r = p.beat_frequency(range);
            assert_eq!(peak, (f_r * 320.0 / 20e6).round() as usize);
            assert_eq!(peak, range as usize);
        }
    }

    #[test]
    fn zero_input_zero_output() {
        let frame = ChirpFrame::new(8, vec![vec![Complex64::new(0.0, 0.0); 8]; 3], vec![0.0; 3]).unwrap();
        let map = range_fft(&frame, Window::Hann).unwrap();
        assert!((0..3).all(|k| map.spectrum(k).iter().all(|x| x.norm() == 0.0)));
    }

    #[test]
    fn parseval_without_taper() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let chirps: Vec<Vec<Complex64>> = (0..5)
            .map(|_| compose_received(320, &[], &[], 3.0, &mut rng).unwrap())
            .collect();
        let frame = ChirpFrame::new(320, chirps, vec![0.0; 5]).unwrap();
        let map = range_fft(&frame, Window::Rectangular).unwrap();
        let before: f64 = frame.chirps().iter().flatten().map(|x| x.norm_sqr()).sum();
        let after: f64 = (0..5).flat_map(|k| map.spectrum(k).to_vec()).map(|x| x.norm_sqr()).sum();
        assert!(((after - before) / before).abs() < 1e-9);
    }

    #[test]
    fn estimate_target_full_hopping() {
        let p = radar(20.0, 128);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let target = Target::new(13.37, 8.0, 20.0);
        let hops = random_hops(&p, &[0, 1, 2, 3, 4, 5], &mut rng);
        let frame = super::super::synthesize_frame(&p, &[target], &hops, 1.0, &mut rng).unwrap();
        let map = range_fft(&frame, Window::Hann).unwrap();
        let est = estimate_target(
            &map,
            frame.hops(),
            &RangeDopplerSurface::default_velocities(&p),
            &RangeDopplerSurface::default_offsets(&p),
            &p,
        )
        .unwrap();
        assert_eq!(est.coarse_bin, 13);
        assert!((est.range - 13.37).abs() < p.fine_bin_width(), "{est:?}");
        assert!((est.velocity - 8.0).abs() < 2.0 * p.max_velocity() / 128.0, "{est:?}");
    }

    #[test]
    fn no_hopping_surface_is_flat_in_offset() {
        let p = radar(20.0, 64);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let frame = frame_for(&p, &[Target::new(20.0, -15.0, 20.0)], &vec![0.0; 64], 1.0, &mut rng);
        let map = range_fft(&frame, Window::Rectangular).unwrap();
        let velocities = RangeDopplerSurface::default_velocities(&p);
        let offsets = RangeDopplerSurface::default_offsets(&p);
        let s = fine_range_doppler(&map, frame.hops(), 20, &velocities, &offsets, &p).unwrap();
        for vi in 0..velocities.len() {
            let row: Vec<f64> = (0..offsets.len()).map(|j| s.get(vi, j)).collect();
            assert!(row.iter().all(|x| (x - row[0]).abs() < 1e-9));
        }
        // Plain Doppler DFT: the peak sits at the bin nearest f_d = 0.154 cycles/chirp.
        let (vi, _) = s.argmax();
        let cycles = p.doppler_cycles(velocities[vi]);
        assert!((cycles - 0.154).abs() <= 0.5 / 64.0 + 1e-12, "{cycles}");
    }

    #[test]
    fn single_subband_gives_flat_offset_response() {
        let p = radar(20.0, 64);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let hops = vec![p.hop_offset(4); 64];
        let frame = frame_for(&p, &[Target::new(20.0, -15.0, 20.0)], &hops, 1.0, &mut rng);
        let prof = profile(&p, &frame, -15.0, 12, 20..21);
        let spread = prof.magnitude_db.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - prof.magnitude_db.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1e-9, "{spread}");
    }

    #[test]
    fn full_hopping_localizes_target() {
        let p = radar(20.0, 512);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let hits = (0..20)
            .filter(|_| {
                let eps = rng.random_range(-0.45..0.45);
                let tgt = Target::new(20.0 + eps, -15.0, 20.0).with_phase(rng.random::<f64>() * TAU);
                let hops = random_hops(&p, &[0, 1, 2, 3, 4, 5], &mut rng);
                let frame = frame_for(&p, &[tgt], &hops, 1.0, &mut rng);
                let map = range_fft(&frame, Window::Rectangular).unwrap();
                let offsets = RangeDopplerSurface::fine_offsets(&p, 120);
                let s = fine_range_doppler(&map, &hops, 20, &[-15.5, -15.0, -14.5], &offsets, &p).unwrap();
                let (vi, ei) = s.argmax();
                vi == 1 && (offsets[ei] - eps).abs() <= p.fine_bin_width() / 2.0
            })
            .count();
        assert_eq!(hits, 20);
    }

    #[test]
    fn out_of_bounds_grids_rejected() {
        let p = radar(20.0, 4);
        let frame = ChirpFrame::new(320, vec![vec![Complex64::new(0.0, 0.0); 320]; 4], vec![0.0; 4]).unwrap();
        let map = range_fft(&frame, Window::Rectangular).unwrap();
        assert!(fine_range_doppler(&map, frame.hops(), 20, &[0.0], &[0.6], &p).is_err());
        assert!(fine_range_doppler(&map, frame.hops(), 400, &[0.0], &[0.0], &p).is_err());
        assert!(fine_range_doppler(&map, &[0.0; 3], 20, &[0.0], &[0.0], &p).is_err());
        let s = fine_range_doppler(&map, frame.hops(), 20, &[0.0], &[0.5, -0.5], &p).unwrap();
        assert!(range_profile_at_velocity(&[s], 1.0).is_err());
    }

    #[test]
    fn profile_peak_at_ground_truth() {
        let p = radar(20.0, 512);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let hops = random_hops(&p, &[0, 1, 2, 3, 4, 5], &mut rng);
        let frame = frame_for(&p, &[Target::new(20.0, -15.0, 20.0).with_phase(1.0)], &hops, 1.0, &mut rng);
        let prof = profile(&p, &frame, -15.0, 24, 0..64);
        let (_, r, _) = prof.peak();
        assert!((r - 20.0).abs() <= p.fine_bin_width(), "{r}");
    }

    #[test]
    fn noise_only_profile_near_floor() {
        let p = radar(20.0, 128);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let trials = 100;
        let mut mean: Vec<f64> = Vec::new();
        for _ in 0..trials {
            let hops = random_hops(&p, &[0, 1, 2, 3, 4, 5], &mut rng);
            let frame = frame_for(&p, &[], &hops, 1.0, &mut rng);
            let prof = profile(&p, &frame, -15.0, 12, 0..48);
            if mean.is_empty() {
                mean = vec![0.0; prof.magnitude_db.len()];
            }
            for (m, db) in mean.iter_mut().zip(&prof.magnitude_db) {
                *m += 10f64.powf(db / 10.0) / trials as f64;
            }
        }
        // Unit noise through a Hann taper: mean power 3/8 per range bin.
        let floor = 10.0 * 0.375f64.log10();
        assert!(mean.iter().all(|m| (10.0 * m.log10() - floor).abs() < 6.0));
    }

    #[test]
    fn two_close_targets_resolved() {
        let p = radar(20.0, 512);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let w = p.fine_bin_width();
        // Echoes in antiphase at the band center, 375 MHz above f_c.
        let mid = 2.5 * p.b_a;
        let targets = [-0.5, 0.5].map(|side: f64| {
            let eps = side * w;
            let phase = TAU * 2.0 * eps * mid / SPEED_OF_LIGHT + if side > 0.0 { std::f64::consts::PI } else { 0.0 };
            Target::new(20.0 + eps, -15.0, 20.0).with_phase(phase)
        });
        let hops = random_hops(&p, &[0, 1, 2, 3, 4, 5], &mut rng);
        let frame = frame_for(&p, &targets, &hops, 1.0, &mut rng);
        let prof = profile(&p, &frame, -15.0, 96, 20..21);
        let (_, _, top) = prof.peak();
        let maxima = prof.local_maxima(top - 6.0);
        assert!(maxima.len() >= 2, "{maxima:?}");
    }

    #[test]
    fn mainlobe_width_interpolates() {
        let prof = FineRangeProfile {
            velocity: 0.0,
            ranges: vec![0.0, 1.0, 2.0, 3.0, 4.0],
            magnitude_db: vec![-10.0, -2.0, 0.0, -4.0, -10.0],
        };
        // Crossings at −3 dB: left between 0 and 1 at 1 − 1/8, right between 2 and 3 at 2.75.
        let width = prof.mainlobe_width(3.0).unwrap();
        assert!((width - (2.75 - 0.875)).abs() < 1e-12);
        assert_eq!(prof.off_peak_median_db(1.5), Some(-10.0));
    }
}
