//! Frequency hopping for FMCW radars that share spectrum, modelled as a
//! repeated game.
//!
//! - [`signal`]: chirp synthesis, interference, detection and range/velocity processing.
//! - [`game`]: utility tables, Nash equilibria, regret and CCE gaps.
//! - [`hopping`]: uniform, no-regret bandit and explore-then-commit Nash schedulers.
//! - [`sim`]: multi-radar scenarios tying the above together.
//! - [`cli`]: config files, CSV output and reports behind the `hopsim` binary.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod game;
pub mod hopping;
pub mod signal;
pub mod sim;

pub use error::{Error, Result};
