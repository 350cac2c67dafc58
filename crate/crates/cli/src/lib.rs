//! Configuration, operator cache and runner behind the `qaffine` binary.

pub mod cache;
pub mod config;
pub mod run;

pub use cache::OperatorCache;
pub use config::{Format, Mode, QValue, RunConfig, Suite};
pub use run::{run, ReportDocument};
