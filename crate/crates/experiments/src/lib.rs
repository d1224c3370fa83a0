//! Experiments over corpora of m-primary ideals: Monte-Carlo estimates of
//! `a_r(I)`, scans over powers of `I`, property checks, and the run
//! directory format used by the `annvv` tool.

pub mod checks;
pub mod commands;
pub mod error;
pub mod estimate;
pub mod input;
pub mod report;
pub mod run;

pub use commands::{Command, Format, RunConfig};
pub use error::{ExperimentError, Result};
pub use input::{Corpus, Document};
pub use run::{replay, run_corpus, write_run, RunManifest, RunOutput};
