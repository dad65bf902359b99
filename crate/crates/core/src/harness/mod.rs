//! Command-line driver and measurement layer: configured runs, the
//! benchmark ladder and the dam-break convergence study.

use thiserror::Error;

use crate::cases::CaseError;
use crate::engine::EngineError;
use crate::io::IoError;
use crate::mesh::MeshError;

mod bench;
mod cli;
mod converge;
mod run;

pub use bench::{
    default_ladder, run_benchmark, BenchConfig, BenchMode, BenchReport, BenchRow, Rung, SpeedupSummary,
};
pub use cli::cli_main;
pub use converge::{convergence_study, l1_depth_error, write_convergence_csv, ConvergenceRow};
pub use run::{load_mesh, run_config, RunSummary, ECHO_FILE};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("mesh: {0}")]
    Mesh(#[from] MeshError),
    #[error("case: {0}")]
    Case(#[from] CaseError),
    #[error("engine: {0}")]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Invalid(String),
}
