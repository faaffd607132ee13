use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::output::{load_manifest, SeedSummary};
use crate::error::{Error, Result};

/// Medians across all seeds that ran the same policy mix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyReport {
    /// Policy name, or names joined by `+` for mixed scenarios.
    pub policy: String,
    pub seeds: usize,
    pub final_interference_rate: f64,
    pub final_mean_sinr_db: f64,
    pub cce_gap_db: f64,
    pub mainlobe_width_m: Option<f64>,
}

fn median(mut values: Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len().is_multiple_of(2) {
        0.5 * (values[mid - 1] + values[mid])
    } else {
        values[mid]
    })
}

fn policy_key(summary: &SeedSummary) -> String {
    let mut names = summary.policies.clone();
    names.dedup();
    if names.iter().all(|n| *n == names[0]) {
        names.truncate(1);
    }
    names.join("+")
}

/// Loads the manifests under `dirs` and reports per-policy medians along
/// with a printable table.
pub fn cmd_report(dirs: &[PathBuf]) -> Result<(Vec<PolicyReport>, String)> {
    if dirs.is_empty() {
        return Err(Error::invalid("report needs at least one run directory"));
    }
    let mut groups: BTreeMap<String, Vec<SeedSummary>> = BTreeMap::new();
    for dir in dirs {
        for summary in load_manifest(dir)?.summaries {
            groups.entry(policy_key(&summary)).or_default().push(summary);
        }
    }
    let reports: Vec<PolicyReport> = groups
        .into_iter()
        .map(|(policy, runs)| {
            let pick = |f: fn(&SeedSummary) -> f64| median(runs.iter().map(f).collect()).unwrap_or(f64::NAN);
            let widths = runs
                .iter()
                .filter_map(|s| s.mainlobe_width_m.get(&policy).copied().flatten())
                .collect();
            PolicyReport {
                seeds: runs.len(),
                final_interference_rate: pick(|s| s.final_interference_rate),
                final_mean_sinr_db: pick(|s| s.final_mean_sinr_db),
                cce_gap_db: pick(|s| s.cce_gap_db),
                mainlobe_width_m: median(widths),
                policy,
            }
        })
        .collect();

    let mut text = format!(
        "{:<20} {:>5} {:>18} {:>13} {:>11} {:>15}\n",
        "policy", "seeds", "interference_rate", "mean_sinr_db", "cce_gap_db", "mainlobe_3db_m"
    );
    for r in &reports {
        let width = r.mainlobe_width_m.map_or("-".to_string(), |w| format!("{w:.4}"));
        let _ = writeln!(
            text,
            "{:<20} {:>5} {:>18.4} {:>13.2} {:>11.4} {:>15}",
            r.policy, r.seeds, r.final_interference_rate, r.final_mean_sinr_db, r.cce_gap_db, width
        );
    }
    Ok((reports, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(median(vec![]), None);
        assert_eq!(median(vec![3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), Some(2.5));
    }

    #[test]
    fn missing_manifest_fails() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(cmd_report(&[dir.path().to_path_buf()]), Err(Error::Io { .. })));
        assert!(cmd_report(&[]).is_err());
    }
}
