//! Experiment runner: schedules counts and density computations from the
//! `cubelab` library, caches their results and writes CSV or JSON reports.

pub mod cache;
pub mod error;
pub mod experiment;
pub mod report;
pub mod spec;

pub use error::CliError;
pub use experiment::{run, RunOptions};
pub use report::{Report, Row, Value};
pub use spec::{ExperimentSpec, Format, Kind};
