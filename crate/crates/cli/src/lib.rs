//! Sweep orchestration and analysis front-end for `qpl-core`.
//!
//! A sweep is described by a JSON [`SweepConfig`]; [`run_sweep`] evaluates
//! every `(n, d, p)` cell on a worker pool and writes one CSV row per cell.
//! Finished cells go to a checkpoint next to the output so that an
//! interrupted sweep resumes where it stopped. Seeds are derived from cell
//! coordinates, which makes the output independent of the worker count.

pub mod bound;
pub mod checkpoint;
pub mod config;
pub mod error;
pub mod fit;
pub mod plotdata;
pub mod record;
pub mod sweep;

pub use config::{Ensemble, PGrid, Rate, Spacing, SweepConfig};
pub use error::{CliError, Result};
pub use record::{read_records_file, write_records, Quantity, ResultRecord};
pub use sweep::{run_sweep, threads_from_env, SweepReport};
