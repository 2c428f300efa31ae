//! Spec-file parsing, run orchestration and reporting behind the `cmprep`
//! binary.

pub mod error;
pub mod report;
pub mod run;
pub mod specfile;

pub use error::CliError;
pub use report::{RunReport, Verdict};
pub use run::{replay, run_spec, selftest, verify, RunArtifacts, RunOptions};
pub use specfile::{SpecError, SpecFile};
