//! File interfaces: the native SWEMESH mesh format, legacy VTK snapshots,
//! CSV step statistics and the JSON run configuration.
//!
//! Every floating-point number is printed with 17 significant digits
//! (`{:.16e}`), which round-trips any `f64` exactly.

use std::path::{Path, PathBuf};

use thiserror::Error;

mod config;
mod native;
mod stats;
mod vtk;

pub use config::{parse_config, Config, GridSpec, MeshSection, MeshSource, OutputSpec, Overrides};
pub use native::{read_mesh_file, read_mesh_native, write_mesh_file, write_mesh_native, NativeMesh};
pub use stats::{write_stats_csv, StatsWriter, STATS_HEADER};
pub use vtk::{write_vtk, write_vtk_snapshot};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Format(String),
}

impl IoError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        IoError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Lossless 17-significant-digit rendering.
#[inline]
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
