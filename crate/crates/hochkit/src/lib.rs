//! Batch front end: job files in, deterministic reports out.

pub mod execute;
pub mod jobspec;
pub mod report;

pub use execute::{execute, run_source, Outcome, EXIT_INPUT, EXIT_OK, EXIT_VERDICT};
pub use jobspec::{parse_spec, serialize_spec, Command, Format, JobSpec, SpecError};
pub use report::Report;
