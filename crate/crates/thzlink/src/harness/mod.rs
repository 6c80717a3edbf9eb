//! Experiment harness: TOML-driven configuration, experiment runners, and
//! CSV result tables.
//!
//! The harness turns a declarative [`config::RunConfig`] into result tables
//! with a stable column layout and reproducible contents — the same
//! configuration and seed always produce byte-identical CSV, independent of
//! worker count.

pub mod config;
pub mod runners;
pub mod table;

pub use config::RunConfig;
pub use runners::{
    run_ber_sweep, run_budget, run_noise_stats, run_phase_noise_suite, run_phase_psd,
    run_snr_sweep, run_validation, RunOutput,
};
pub use table::{Cell, Table};
