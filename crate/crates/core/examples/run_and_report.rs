//! The library side of `hopsim run` and `hopsim report`: parse a config,
//! run several seeds into an output directory, then summarize it.
//!
//! cargo run --release --example run_and_report [out_dir]

use std::path::PathBuf;

use hopsim::cli::{cmd_report, cmd_run, parse_config, worker_threads};

fn main() -> hopsim::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("hopsim_example"), PathBuf::from);
    let text = include_str!("../configs/two_radar.cfg").replace("frames = 50", "frames = 15");
    let config = parse_config(&text)?;

    let manifest = cmd_run(&config, "configs/two_radar.cfg", &out, &[0, 1, 2], worker_threads())?;
    for (name, artifact) in &manifest.artifacts {
        println!("{:<28} {:>8} bytes  {}", name, artifact.bytes, &artifact.sha256[..12]);
    }
    let (_, table) = cmd_report(&[out])?;
    print!("\n{table}");
    Ok(())
}
