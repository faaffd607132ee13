//! Scenario orchestration: radars hop per chirp, the channel is synthesized
//! on a shared clock, estimates feed the schedulers at episode boundaries,
//! and evaluation metrics are accumulated.

mod collision;
mod config;
mod run;

pub use collision::{collision_table, CollisionTable, Overlap};
pub use config::{ProfileConfig, RadarConfig, RunConfig, ScenarioConfig, TargetConfig};
pub use run::{genie_utility_table, run_scenario, RunMetrics};
