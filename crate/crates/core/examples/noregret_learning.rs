//! The bandit learner on its own: one radar facing a fixed interferer that
//! jams subbands 0 and 1, fed per-episode SINR estimates directly.
//!
//! cargo run --example noregret_learning

use hopsim::hopping::{noregret_update, sample_subband, EpisodeStats, NoRegretConfig, NoRegretState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CHIRPS: usize = 64;

fn main() -> hopsim::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut state = NoRegretState::new(6, NoRegretConfig::default())?;
    for episode in 0..60 {
        let mut counts = [0usize; 6];
        for _ in 0..CHIRPS {
            counts[sample_subband(state.current(), &mut rng)] += 1;
        }
        let entries: Vec<(usize, usize, f64)> = counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(f, &n)| (f, n, if f < 2 { -8.0 } else { 20.0 }))
            .collect();
        state = noregret_update(&state, &EpisodeStats::from_clean(6, &entries))?;
        if episode % 10 == 9 {
            println!("episode {:2}: {:.3?}", episode + 1, state.current().probs());
        }
    }
    println!("support: {:?}", state.current().support());
    Ok(())
}
