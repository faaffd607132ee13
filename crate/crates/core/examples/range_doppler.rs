//! Signal chain for one hopped frame: synthesis, range FFT, coarse peak and
//! the hop-compensated fine range/velocity search.
//!
//! cargo run --release --example range_doppler

use hopsim::signal::{
    estimate_target, fine_range_doppler, range_fft, range_profile_at_velocity, synthesize_frame, ChirpParams,
    RangeDopplerSurface, Target, Window,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> hopsim::Result<()> {
    let params = ChirpParams::new(77e9, 150e6, 6, 20e-6, 16e-6, 20e6, 256)?;
    println!(
        "coarse bin {:.3} m, fine bin {:.4} m, max velocity {:.1} m/s",
        params.coarse_bin_width(),
        params.fine_bin_width(),
        params.max_velocity()
    );
    let target = Target::new(23.37, 8.0, 15.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let hops: Vec<f64> = (0..params.chirps)
        .map(|_| params.hop_offset(rng.random_range(0..params.subbands)))
        .collect();
    let frame = synthesize_frame(&params, std::slice::from_ref(&target), &hops, 1.0, &mut rng)?;
    let map = range_fft(&frame, Window::Hann)?;

    let velocities = RangeDopplerSurface::default_velocities(&params);
    let offsets = RangeDopplerSurface::default_offsets(&params);
    let est = estimate_target(&map, frame.hops(), &velocities, &offsets, &params)?;
    println!(
        "truth {:.3} m at {:.1} m/s; coarse {:.1} m, fine {:.3} m at {:.2} m/s",
        target.range, target.velocity, est.coarse_range, est.range, est.velocity
    );

    let fine = RangeDopplerSurface::fine_offsets(&params, 48);
    let surfaces = (est.coarse_bin - 2..=est.coarse_bin + 2)
        .map(|b| fine_range_doppler(&map, frame.hops(), b, &[est.velocity], &fine, &params))
        .collect::<hopsim::Result<Vec<_>>>()?;
    let profile = range_profile_at_velocity(&surfaces, est.velocity)?;
    println!(
        "profile: peak {:.3} m, -3 dB width {:.3?} m, off-peak median {:.1?} dB",
        profile.peak().1,
        profile.mainlobe_width(3.0),
        profile.off_peak_median_db(1.0)
    );
    Ok(())
}
