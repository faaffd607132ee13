//! Config ingestion, per-seed runs with CSV output, and cross-run reports.
//!
//! The `hopsim` binary is a thin wrapper around [`cmd_run`] and
//! [`cmd_report`]; everything here is usable from library code and tests.

mod output;
mod report;

pub use output::{cmd_run, load_manifest, Artifact, RunManifest, SeedSummary, CSV_HEADERS};
pub use report::{cmd_report, PolicyReport};

use crate::error::{Error, Result};
use crate::sim::ScenarioConfig;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const RUNTIME: i32 = 3;
}

/// Exit code for an error raised while running a command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Validation(_) | Error::Parse { .. } => exit::VALIDATION,
        _ => exit::RUNTIME,
    }
}

/// Parses and validates a TOML scenario document.
///
/// Top-level sections are `[[radars]]` (with an optional
/// `[radars.policy]` table), `[[targets]]`, `[[links]]` and `[run]`.
/// Omitted fields take their documented defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let config: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map(|span| line_of(text, span.start)),
        message: e.message().to_string(),
    })?;
    config.check()?;
    Ok(config)
}

/// TOML rendering that [`parse_config`] reads back unchanged.
pub fn render(config: &ScenarioConfig) -> Result<String> {
    toml::to_string(config).map_err(|e| Error::Parse {
        line: None,
        message: e.to_string(),
    })
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Seeds from `"n"` (seeds `0..n`) or a comma-separated list such as `"3,7,11"`.
pub fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    let spec = spec.trim();
    let parse = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| Error::invalid(format!("invalid seed '{}' in '{spec}'", s.trim())))
    };
    let seeds = if spec.contains(',') {
        spec.split(',').map(parse).collect::<Result<Vec<_>>>()?
    } else {
        (0..parse(spec)?).collect()
    };
    if seeds.is_empty() {
        return Err(Error::invalid("at least one seed is required"));
    }
    let mut sorted = seeds.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != seeds.len() {
        return Err(Error::invalid(format!("duplicate seeds in '{spec}'")));
    }
    Ok(seeds)
}

/// Worker count from `HOPSIM_THREADS`, or the available parallelism.
pub fn worker_threads() -> usize {
    std::env::var("HOPSIM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopping::{NashHopperConfig, NoRegretConfig, Policy};

    #[test]
    fn render_round_trip() {
        for policy in [
            Policy::Uniform,
            Policy::Noregret(NoRegretConfig::default()),
            Policy::Nash(NashHopperConfig::default()),
        ] {
            let mut cfg = ScenarioConfig::two_radar(policy);
            cfg.targets[1].phase = Some(0.25);
            cfg.radars[0].t_a = Some(15e-6);
            let text = render(&cfg).unwrap();
            assert_eq!(parse_config(&text).unwrap(), cfg, "{text}");
        }
    }

    #[test]
    fn parse_error_has_line() {
        let text = "[[radars]]\nf_c = 77e9\nb_a = \"wide\"\n";
        match parse_config(text) {
            Err(Error::Parse { line: Some(3), message }) => assert!(message.contains("f64") || message.contains("float"), "{message}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_field_rejected() {
        let text = "[run]\nframez = 3\n";
        assert!(matches!(parse_config(text), Err(Error::Parse { line: Some(2), .. })));
    }

    #[test]
    fn empty_radars_is_validation_error() {
        match parse_config("[run]\nframes = 3\n") {
            Err(Error::Validation(list)) => assert!(list.iter().any(|e| e.contains("radars"))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bundled_two_radar() {
        let text = include_str!("../../configs/two_radar.cfg");
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg, ScenarioConfig::two_radar(Policy::Noregret(NoRegretConfig::default())));
        assert_eq!(cfg.actions(), 6);
        assert_eq!((cfg.radars[0].chirps, cfg.radars[1].chirps), (512, 256));
    }

    #[test]
    fn divisibility_through_parser() {
        let one = |chirps: usize, episodes: usize| {
            format!(
                "[[radars]]\nf_c = 77e9\nb_a = 150e6\nsubbands = 6\nt_pri = 20e-6\nchirps = {chirps}\n\n[run]\nepisodes_per_frame = {episodes}\n"
            )
        };
        assert!(parse_config(&one(500, 50)).is_ok());
        assert!(matches!(parse_config(&one(500, 60)), Err(Error::Validation(v)) if v.len() == 1));
    }

    #[test]
    fn seed_specs() {
        assert_eq!(parse_seeds("3").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_seeds("5, 9").unwrap(), vec![5, 9]);
        assert!(parse_seeds("0").is_err());
        assert!(parse_seeds("1,x").is_err());
        assert!(parse_seeds("2,2").is_err());
    }
}
