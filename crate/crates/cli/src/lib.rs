//! IO, sweep orchestration and the command line for the cavity QED
//! spectroscopy engine. The physics lives in `cqed-core`; this crate owns
//! configuration ingestion, CSV/JSON/SVG emission and exit-code policy.

pub mod cli;
pub mod config;
pub mod svg;
pub mod sweep;
pub mod table;

pub use cli::{run, OUT_DIR_ENV};
pub use config::{parse_config, Config, ConfigError, Format, JobKind};
