use serde::{Deserialize, Serialize};

use crate::signal::ChirpParams;

/// An interfering chirp overlapping a victim chirp in time and subband.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub source: usize,
    pub chirp: usize,
    /// Overlap duration over the victim's active time, in `(0, 1]`.
    pub fraction: f64,
    /// Source chirp start minus victim chirp start (s).
    pub offset: f64,
}

/// `table[victim][chirp]` lists the overlaps suffered by that chirp.
pub type CollisionTable = Vec<Vec<Vec<Overlap>>>;

/// Collisions among chirp sequences that all start at time zero, chirp `k`
/// of radar `i` occupying `[k·T_pri, k·T_pri + T_a)` in subband `actions[i][k]`.
pub fn collision_table(params: &[ChirpParams], actions: &[Vec<usize>]) -> CollisionTable {
    params
        .iter()
        .zip(actions)
        .enumerate()
        .map(|(victim, (pv, av))| {
            av.iter()
                .enumerate()
                .map(|(k, &band)| {
                    let start = k as f64 * pv.t_pri;
                    let end = start + pv.t_a;
                    let mut hits = Vec::new();
                    for (source, (ps, a_src)) in params.iter().zip(actions).enumerate() {
                        if source == victim {
                            continue;
                        }
                        let first = ((start - ps.t_a) / ps.t_pri).floor().max(0.0) as usize;
                        let last = ((end / ps.t_pri).ceil() as usize).min(a_src.len());
                        for m in first..last {
                            if a_src[m] != band {
                                continue;
                            }
                            let s_start = m as f64 * ps.t_pri;
                            let overlap = end.min(s_start + ps.t_a) - start.max(s_start);
                            if overlap > 1e-12 * pv.t_a {
                                hits.push(Overlap {
                                    source,
                                    chirp: m,
                                    fraction: snap_unit(overlap / pv.t_a),
                                    offset: s_start - start,
                                });
                            }
                        }
                    }
                    hits
                })
                .collect()
        })
        .collect()
}

/// Absorbs rounding in `k·T_pri` so full overlaps report exactly 1.
fn snap_unit(fraction: f64) -> f64 {
    if fraction > 1.0 - 1e-9 {
        1.0
    } else {
        fraction
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radar(pri_us: f64, chirps: usize) -> ChirpParams {
        ChirpParams::new(77e9, 150e6, 6, pri_us * 1e-6, 0.8 * pri_us * 1e-6, 20e6, chirps).unwrap()
    }

    fn interval_overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
        (a.1.min(b.1) - a.0.max(b.0)).max(0.0)
    }

    #[test]
    fn synchronized_equal_pri() {
        let p = radar(20.0, 4);
        let table = collision_table(&[p.clone(), p], &[vec![2; 4], vec![2; 4]]);
        for victim in 0..2 {
            for (k, hits) in table[victim].iter().enumerate() {
                assert_eq!(hits.len(), 1);
                assert_eq!(hits[0].chirp, k);
                assert_eq!(hits[0].fraction, 1.0);
                assert_eq!(hits[0].offset, 0.0);
            }
        }
    }

    #[test]
    fn mixed_pri_matches_interval_oracle() {
        let r1 = radar(20.0, 16);
        let r2 = radar(40.0, 8);
        let table = collision_table(&[r1.clone(), r2.clone()], &[vec![0; 16], vec![0; 8]]);
        // Every radar-2 chirp overlaps two radar-1 chirps.
        assert!(table[1].iter().all(|hits| hits.len() == 2));
        for (victim, (pv, ps)) in [(0, (&r1, &r2)), (1, (&r2, &r1))] {
            for (k, hits) in table[victim].iter().enumerate() {
                let v = (k as f64 * pv.t_pri, k as f64 * pv.t_pri + pv.t_a);
                let expected: Vec<(usize, f64)> = (0..ps.chirps)
                    .map(|m| (m, interval_overlap(v, (m as f64 * ps.t_pri, m as f64 * ps.t_pri + ps.t_a))))
                    .filter(|(_, o)| *o > 0.0)
                    .map(|(m, o)| (m, o / pv.t_a))
                    .collect();
                let got: Vec<(usize, f64)> = hits.iter().map(|h| (h.chirp, h.fraction)).collect();
                assert_eq!(got.len(), expected.len());
                for (g, e) in got.iter().zip(&expected) {
                    assert_eq!(g.0, e.0);
                    assert!((g.1 - e.1).abs() < 1e-12);
                }
            }
        }
        assert!((table[0][0][0].fraction - 1.0).abs() < 1e-12);
        assert!((table[0][1][0].fraction - 0.75).abs() < 1e-12);
        assert!((table[1][0][0].fraction - 0.5).abs() < 1e-12);
        assert!((table[1][0][1].fraction - 0.375).abs() < 1e-12);
    }

    #[test]
    fn distinct_subbands_never_collide() {
        let r1 = radar(20.0, 16);
        let r2 = radar(40.0, 8);
        let table = collision_table(&[r1, r2], &[vec![1; 16], vec![4; 8]]);
        assert!(table.iter().flatten().all(|hits| hits.is_empty()));
    }
}
