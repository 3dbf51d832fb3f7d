//! Experiment harness over `descent-core`: text formats, configuration,
//! reports, a rayon executor, and the single / sweep / counterexample runs
//! behind the `atlas` binary.

pub mod config;
pub mod exec;
pub mod parse;
pub mod report;
pub mod run;
