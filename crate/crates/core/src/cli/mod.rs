//! Text formats, the property-check runner and the command implementations
//! behind the `liesys` binary.

pub mod commands;
pub mod format;
pub mod suite;

pub use commands::main_with;
pub use format::{parse_operator, Operator, Parsed, ScenarioFile, Warning};
pub use suite::{run_suite, CheckReport, SUITES};
