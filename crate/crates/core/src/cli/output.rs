use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::sim::{run_scenario, RunMetrics, ScenarioConfig};

/// Header line of every emitted CSV, keyed by file name (`profile_*` share one).
pub const CSV_HEADERS: [(&str, &str); 5] = [
    ("strategies.csv", "episode,radar,subband,probability"),
    ("interference.csv", "episode,radar,rate,mean_sinr_db"),
    ("regret.csv", "episode,radar,cumulative_regret_db"),
    ("profile", "range_m,magnitude_db"),
    ("joint_dist.csv", "joint_action,mass"),
];

const MANIFEST: &str = "manifest.json";

fn header(name: &str) -> &'static str {
    CSV_HEADERS.iter().find(|(n, _)| *n == name).map(|(_, h)| *h).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub description: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Headline numbers of one seed, read back by [`super::cmd_report`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub policies: Vec<String>,
    /// Last-episode interference rate averaged over radars.
    pub final_interference_rate: f64,
    /// Last-episode mean SINR averaged over radars.
    pub final_mean_sinr_db: f64,
    /// Largest CCE deviation gap over radars.
    pub cce_gap_db: f64,
    /// −3 dB mainlobe width of each policy's range profile.
    pub mainlobe_width_m: BTreeMap<String, Option<f64>>,
}

impl SeedSummary {
    fn new(seed: u64, metrics: &RunMetrics) -> Self {
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
        Self {
            seed,
            policies: metrics.policies.clone(),
            final_interference_rate: metrics.interference_rate.last().map_or(0.0, |r| mean(r)),
            final_mean_sinr_db: metrics.mean_sinr_db.last().map_or(0.0, |r| mean(r)),
            cce_gap_db: metrics.cce_gap.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mainlobe_width_m: metrics
                .profiles
                .iter()
                .map(|(k, p)| (k.clone(), p.mainlobe_width(3.0)))
                .collect(),
        }
    }
}

/// Index of one `run` invocation, written as `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_path: String,
    pub out_dir: String,
    pub seeds: Vec<u64>,
    /// Effective configuration with every default filled in.
    pub config: ScenarioConfig,
    /// Paths relative to `out_dir`.
    pub artifacts: BTreeMap<String, Artifact>,
    pub summaries: Vec<SeedSummary>,
}

/// Runs the scenario once per seed on up to `threads` workers and writes
/// `seed_<s>/{strategies,interference,regret,joint_dist}.csv`, one
/// `profile_<policy>.csv` per profiled policy, and `manifest.json`.
pub fn cmd_run(
    config: &ScenarioConfig,
    config_path: &str,
    out_dir: &Path,
    seeds: &[u64],
    threads: usize,
) -> Result<RunManifest> {
    config.check()?;
    if seeds.is_empty() {
        return Err(Error::invalid("at least one seed is required"));
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let per_seed = pool.install(|| {
        seeds
            .par_iter()
            .map(|&seed| {
                let mut cfg = config.clone();
                cfg.run.seed = seed;
                let metrics = run_scenario(&cfg)?;
                let files = write_seed(out_dir, seed, &metrics)?;
                Ok((SeedSummary::new(seed, &metrics), files))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut artifacts = BTreeMap::new();
    let mut summaries = Vec::new();
    for (summary, files) in per_seed {
        artifacts.extend(files);
        summaries.push(summary);
    }
    let mut effective = config.clone();
    effective.run.seed = seeds[0];
    let manifest = RunManifest {
        config_path: config_path.to_string(),
        out_dir: out_dir.display().to_string(),
        seeds: seeds.to_vec(),
        config: effective,
        artifacts,
        summaries,
    };
    let path = out_dir.join(MANIFEST);
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::invalid(e.to_string()))?;
    fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

/// Reads `dir/manifest.json` and checks every listed artifact's checksum.
pub fn load_manifest(dir: &Path) -> Result<RunManifest> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let manifest: RunManifest = serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: Some(e.line()),
        message: format!("{}: {e}", path.display()),
    })?;
    for (name, artifact) in &manifest.artifacts {
        let file = dir.join(name);
        let bytes = fs::read(&file).map_err(|e| Error::io(&file, e))?;
        if sha256_hex(&bytes) != artifact.sha256 {
            return Err(Error::Consistency(format!("checksum mismatch for {}", file.display())));
        }
    }
    Ok(manifest)
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn write_seed(out_dir: &Path, seed: u64, m: &RunMetrics) -> Result<Vec<(String, Artifact)>> {
    let dir_name = format!("seed_{seed}");
    let dir: PathBuf = out_dir.join(&dir_name);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;

    let mut files = vec![
        ("strategies.csv".to_string(), "per-episode mixed strategies".to_string(), strategies_csv(m)),
        ("interference.csv".into(), "per-episode interference rate and mean SINR".into(), interference_csv(m)),
        ("regret.csv".into(), "cumulative external regret on the genie table".into(), regret_csv(m)),
        ("joint_dist.csv".into(), "empirical joint distribution of slot actions".into(), joint_csv(m)),
    ];
    for (policy, profile) in &m.profiles {
        let mut csv = String::from(header("profile"));
        csv.push('\n');
        for (r, db) in profile.ranges.iter().zip(&profile.magnitude_db) {
            let _ = writeln!(csv, "{r:.4},{db:.6}");
        }
        files.push((format!("profile_{policy}.csv"), format!("fine range profile, {policy} policy"), csv));
    }

    files
        .into_iter()
        .map(|(name, description, contents)| {
            let path = dir.join(&name);
            fs::write(&path, &contents).map_err(|e| Error::io(&path, e))?;
            let artifact = Artifact {
                description: format!("{description} (seed {seed})"),
                sha256: sha256_hex(contents.as_bytes()),
                bytes: contents.len() as u64,
            };
            Ok((format!("{dir_name}/{name}"), artifact))
        })
        .collect()
}

// Episodes and subbands are written one-based, radars zero-based as in the config.

fn strategies_csv(m: &RunMetrics) -> String {
    let mut csv = format!("{}\n", header("strategies.csv"));
    for (e, per_radar) in m.strategies.iter().enumerate() {
        for (i, s) in per_radar.iter().enumerate() {
            for (f, p) in s.probs().iter().enumerate() {
                let _ = writeln!(csv, "{},{i},{},{p:.9}", e + 1, f + 1);
            }
        }
    }
    csv
}

fn interference_csv(m: &RunMetrics) -> String {
    let mut csv = format!("{}\n", header("interference.csv"));
    for (e, (rates, sinrs)) in m.interference_rate.iter().zip(&m.mean_sinr_db).enumerate() {
        for (i, (r, s)) in rates.iter().zip(sinrs).enumerate() {
            let _ = writeln!(csv, "{},{i},{r:.6},{s:.6}", e + 1);
        }
    }
    csv
}

fn regret_csv(m: &RunMetrics) -> String {
    let mut csv = format!("{}\n", header("regret.csv"));
    for (e, per_radar) in m.cumulative_regret.iter().enumerate() {
        for (i, r) in per_radar.iter().enumerate() {
            let _ = writeln!(csv, "{},{i},{r:.6}", e + 1);
        }
    }
    csv
}

fn joint_csv(m: &RunMetrics) -> String {
    let mut csv = format!("{}\n", header("joint_dist.csv"));
    for (joint, mass) in m.joint.support() {
        let label: Vec<String> = joint.iter().map(|f| (f + 1).to_string()).collect();
        let _ = writeln!(csv, "{},{mass:.9}", label.join("-"));
    }
    csv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopping::Policy;

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn two_radar_single_seed_file_contract() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ScenarioConfig::two_radar(Policy::Uniform);
        cfg.run.frames = 2;
        let manifest = cmd_run(&cfg, "inline", dir.path(), &[4], 1).unwrap();
        let names: Vec<&str> = manifest.artifacts.keys().map(String::as_str).collect();
        assert_eq!(
            names,
            [
                "seed_4/interference.csv",
                "seed_4/joint_dist.csv",
                "seed_4/profile_uniform.csv",
                "seed_4/regret.csv",
                "seed_4/strategies.csv",
            ]
        );
        let strategies = fs::read_to_string(dir.path().join("seed_4/strategies.csv")).unwrap();
        assert_eq!(strategies.lines().count(), 1 + 2 * 2 * 6);
        assert_eq!(load_manifest(dir.path()).unwrap(), manifest);

        fs::write(dir.path().join("seed_4/regret.csv"), "tampered\n").unwrap();
        assert!(matches!(load_manifest(dir.path()), Err(Error::Consistency(_))));
    }
}
