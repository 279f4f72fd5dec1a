//! Desk-scale TDMR channel for a group of three down tracks.
//!
//! The Voronoi grain model is replaced by a surrogate: a fixed 3x3 kernel
//! scaled by the TD density plus Gaussian media noise scaled by the TD
//! energy metric. Tracks outside the group contribute no interference.

pub mod channel;
pub mod config;
pub mod profile;
pub mod reconfigure;
pub mod sweep;

use thiserror::Error;

use crate::framing::FramingError;
use crate::grid::GridError;

pub use channel::{apply_channel, convolve, read_hard, ChannelParams, Kernel, Surrogate};
pub use config::{SimConfig, SweepKind};
pub use profile::{profile_errors, ErrorKind, ErrorProfile};
pub use reconfigure::{reconfigure, write_schedule, ScheduleEntry};
pub use sweep::{read_csv, run_sweep, write_csv, SimCode, SweepPoint, SweepResult, SweepRow};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("{name} must be positive, got {value}")]
    Geometry { name: &'static str, value: f64 },
    #[error("channel expects 3 rows, got {0}")]
    Rows(usize),
    #[error("at least one frame is required")]
    NoFrames,
    #[error("config line {0}: expected key = value")]
    ConfigLine(usize),
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("bad value {value:?} for {key}")]
    Value { key: String, value: String },
    #[error("sweeps are misaligned at point {0}")]
    Misaligned(usize),
    #[error(transparent)]
    Framing(#[from] FramingError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
