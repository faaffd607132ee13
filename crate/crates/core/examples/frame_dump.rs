//! Writes a synthesized frame and its hop sequence to disk and reads both
//! back.
//!
//! cargo run --example frame_dump [dir]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hopsim::signal::{read_frame, read_hops, synthesize_frame, write_frame, write_hops, ChirpFrame, ChirpParams, Target};

fn main() -> hopsim::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    let params = ChirpParams::new(77e9, 150e6, 6, 20e-6, 16e-6, 20e6, 32)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let hops: Vec<f64> = (0..params.chirps)
        .map(|_| params.hop_offset(rng.random_range(0..params.subbands)))
        .collect();
    let frame = synthesize_frame(&params, &[Target::new(12.0, 3.0, 10.0)], &hops, 1.0, &mut rng)?;

    let frame_path = dir.join("hopsim_frame.bin");
    let hops_path = dir.join("hopsim_hops.txt");
    write_frame(&frame_path, &frame, params.f_s)?;
    write_hops(&hops_path, frame.hops(), params.f_c)?;

    let (loaded, f_s) = read_frame(&frame_path)?;
    let loaded = ChirpFrame::new(loaded.samples_per_chirp(), loaded.chirps().to_vec(), read_hops(&hops_path, params.f_c)?)?;
    println!(
        "{} chirps x {} samples at {} Hz -> {} ({} bytes)",
        loaded.chirp_count(),
        loaded.samples_per_chirp(),
        f_s,
        frame_path.display(),
        std::fs::metadata(&frame_path).map_or(0, |m| m.len())
    );
    // Samples are stored as f32, hops as absolute frequencies in text.
    let sample_err = (0..loaded.chirp_count())
        .flat_map(|k| loaded.chirp(k).iter().zip(frame.chirp(k)).map(|(a, b)| (a - b).norm()))
        .fold(0.0, f64::max);
    let hop_err = loaded.hops().iter().zip(frame.hops()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("max sample error {sample_err:.2e}, max hop error {hop_err:.2e} Hz");
    Ok(())
}
