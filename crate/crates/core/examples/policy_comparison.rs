//! The two-radar scenario under each scheduling policy, with the headline
//! numbers a run reports: interference, SINR, regret, CCE gap and range
//! resolution.
//!
//! cargo run --release --example policy_comparison [frames] [seed]

use hopsim::hopping::{NashHopperConfig, NoRegretConfig, Policy};
use hopsim::sim::{run_scenario, ScenarioConfig};

fn main() -> hopsim::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("numeric argument"));
    let frames = args.next().unwrap_or(30) as usize;
    let seed = args.next().unwrap_or(0);
    println!(
        "{:<9} {:>12} {:>9} {:>10} {:>9} {:>9} {:>9}",
        "policy", "interference", "sinr_db", "regret_db", "cce_gap", "width_m", "floor_db"
    );
    for policy in [
        Policy::Uniform,
        Policy::Noregret(NoRegretConfig::default()),
        Policy::Nash(NashHopperConfig::default()),
    ] {
        let name = policy.name();
        let mut cfg = ScenarioConfig::two_radar(policy);
        cfg.run.frames = frames;
        cfg.run.seed = seed;
        let m = run_scenario(&cfg)?;
        let profile = &m.profiles[name];
        println!(
            "{name:<9} {:>12.3} {:>9.2} {:>10.3} {:>9.4} {:>9.3} {:>9.1}",
            m.tail_interference_rate(10),
            m.mean_sinr_db.last().unwrap().iter().sum::<f64>() / 2.0,
            m.average_regret(0, frames),
            m.cce_gap.iter().copied().fold(f64::MIN, f64::max),
            profile.mainlobe_width(3.0).unwrap_or(f64::NAN),
            profile.off_peak_median_db(1.0).unwrap_or(f64::NAN),
        );
        let supports: Vec<Vec<usize>> = m.final_strategies.iter().map(|s| s.support()).collect();
        println!("          final supports {supports:?}");
    }
    Ok(())
}
