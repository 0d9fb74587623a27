//! Dataset emission and verification reports behind the `ptloc` binary.

pub mod config;
pub mod datasets;
pub mod output;
pub mod verify;

pub use config::{Command, ConfigError, Format, RunConfig};
pub use datasets::{Cell, Dataset};
pub use verify::{Check, VerifyReport};

/// Version of the JSON layout written by every subcommand.
pub const SCHEMA_VERSION: u32 = 1;
