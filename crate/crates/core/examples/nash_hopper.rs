//! Explore-then-commit hopping on the two-radar scenario: the estimated
//! game after exploration and the subbands each radar commits to.
//!
//! cargo run --release --example nash_hopper

use hopsim::hopping::{NashHopperConfig, Policy};
use hopsim::sim::{run_scenario, ScenarioConfig};

fn main() -> hopsim::Result<()> {
    let mut cfg = ScenarioConfig::two_radar(Policy::Nash(NashHopperConfig::default()));
    cfg.run.frames = 20;
    let m = run_scenario(&cfg)?;
    for (e, (strategies, rates)) in m.strategies.iter().zip(&m.interference_rate).enumerate() {
        let played: Vec<String> = strategies
            .iter()
            .map(|s| s.as_pure().map_or("mixed".to_string(), |f| format!("subband {f}")))
            .collect();
        println!("episode {:2}: {:?} interference {:.3?}", e + 1, played, rates);
    }
    println!("final mean SINR: {:.1?} dB", m.mean_sinr_db.last().unwrap());
    Ok(())
}
