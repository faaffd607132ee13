//! Equilibria of a two-radar subband game: pure equilibria, the welfare-best
//! equilibrium, and how far a correlated play is from a CCE.
//!
//! cargo run --example game_equilibrium

use hopsim::game::{
    cce_deviation_gap, enumerate_pure_nash, expected_utility, nash_candidates, JointDistribution, NashSearch,
    UtilityTable,
};

fn main() -> hopsim::Result<()> {
    // Three subbands; sharing one drops both radars from 20 dB to -10 dB.
    let table = UtilityTable::from_fn(2, 3, |_, joint| if joint[0] == joint[1] { -10.0 } else { 20.0 })?;

    println!("pure equilibria:");
    for joint in enumerate_pure_nash(&table)? {
        println!("  {joint:?}");
    }

    println!("all equilibria by support enumeration:");
    for c in nash_candidates(&table, NashSearch::SupportEnumeration)? {
        let probs: Vec<Vec<f64>> = c.profile.strategies().iter().map(|s| s.probs().to_vec()).collect();
        let utils: Vec<f64> = (0..2)
            .map(|i| expected_utility(&table, &c.profile, i))
            .collect::<hopsim::Result<_>>()?;
        println!("  welfare {:6.2} dB  utilities {utils:.2?}  {probs:.3?}", c.welfare);
    }

    // Both radars always on subband 0, then a 50/50 mix of two disjoint plays.
    let mut clash = vec![0.0; 9];
    clash[0] = 1.0;
    let mut split = vec![0.0; 9];
    split[1] = 0.5;
    split[3] = 0.5;
    for (name, mass) in [("always collide", clash), ("alternate 0-1 / 1-0", split)] {
        let joint = JointDistribution::new(2, 3, mass)?;
        let gaps: Vec<f64> = (0..2)
            .map(|i| cce_deviation_gap(&joint, &table, i))
            .collect::<hopsim::Result<_>>()?;
        println!("CCE gap for {name}: {gaps:?}");
    }
    Ok(())
}
