//! File formats, experiment configuration and parallel execution around
//! [`pefem_core`].

pub mod config;
pub mod meshio;
pub mod output;
pub mod threads;

pub use pefem_core;

use config::ExperimentConfig;
use pefem_core::analyze::{run_study, ConvergenceReport};
use pefem_core::exec::{Executor, Serial};

/// Runs the study described by `cfg`, serially when it asks for
/// determinism.
pub fn run_experiment(cfg: &ExperimentConfig, exec: &impl Executor) -> anyhow::Result<ConvergenceReport> {
    cfg.validate()?;
    let plan = cfg.plan();
    let report = if cfg.deterministic { run_study(&plan, &Serial) } else { run_study(&plan, exec) };
    Ok(report?)
}
