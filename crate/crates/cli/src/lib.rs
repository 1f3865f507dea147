//! Library surface of the `btkit` command-line tool: run configuration,
//! the command implementations, and the seeded property suites.

pub mod commands;
pub mod config;
pub mod suites;

pub use commands::CmdOut;
pub use config::{FacetArg, OutputFormat, RunConfig};
pub use suites::{run_suite, SuiteReport, SUITE_NAMES};
