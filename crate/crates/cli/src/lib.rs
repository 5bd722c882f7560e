//! Batch experiment surface for `qspectral`: configuration, the pipeline
//! commands and the self-test.

pub mod commands;
pub mod config;
pub mod selftest;

pub use commands::{cmd_amplify_trace, cmd_cluster_classical, cmd_cluster_quantum, cmd_graph};
pub use config::ExperimentConfig;
pub use selftest::{run_selftest, Check};
