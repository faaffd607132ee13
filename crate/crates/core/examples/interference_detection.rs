//! Per-chirp interference detection: a victim chirp with and without a
//! colliding chirp, compared against the ground-truth split.
//!
//! cargo run --example interference_detection

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hopsim::signal::{
    compose_received, dechirped_echo, dechirped_interference, detect_interference, linear_to_db, theoretical_sinr,
    ChirpParams, Detection, Target, DEFAULT_DETECTION_FACTOR,
};

fn main() -> hopsim::Result<()> {
    let victim = ChirpParams::new(77e9, 150e6, 6, 20e-6, 16e-6, 20e6, 512)?;
    let source = ChirpParams::new(77e9, 150e6, 6, 40e-6, 32e-6, 20e6, 256)?;
    let target = Target::new(20.0, -15.0, 20.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n_s = victim.samples_per_chirp();

    for (label, offset, collide) in [("clean", 0.0, false), ("full overlap", -8e-6, true), ("partial", 10e-6, true)] {
        let echo = dechirped_echo(&victim, &target, 0, 0.0, 0.3)?;
        let interference = dechirped_interference(&victim, &source, 30.0, offset, collide, 1.1);
        let fraction = interference.iter().filter(|x| x.norm_sqr() > 0.0).count() as f64 / n_s as f64;
        let received = compose_received(n_s, &[echo], std::slice::from_ref(&interference), 1.0, &mut rng)?;

        let detected = detect_interference(&received, 1.0, DEFAULT_DETECTION_FACTOR)?;
        let genie = Detection::genie(&received, &interference, 1.0)?;
        let theory = theoretical_sinr(100.0, 1000.0 * fraction, 1.0)?;
        let zeroed = detected.interference.iter().filter(|x| **x != Complex64::new(0.0, 0.0)).count();
        println!(
            "{label:<13} overlap {:>5.1}%  flag {:<5} excised {zeroed:>3} samples  SINR detector {:6.2} dB, genie {:6.2} dB, theory {:6.2} dB",
            100.0 * fraction,
            detected.flag,
            linear_to_db(detected.measurement(0, 1.0).sinr),
            linear_to_db(genie.measurement(0, 1.0).sinr),
            linear_to_db(theory),
        );
    }
    Ok(())
}
