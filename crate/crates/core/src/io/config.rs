use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::cases::CaseSpec;
use crate::engine::{BackendKind, BackendSpec};
use crate::kernels::PhysParams;

/// Structured-grid generator settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
}

/// As written in the file: at most one of the two keys.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generate: Option<GridSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    File(PathBuf),
    Generate(GridSpec),
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_vtk_pattern() -> String {
    "snapshot_{index}.vtk".to_string()
}
fn default_stats() -> String {
    "stats.csv".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// Seconds of simulated time between VTK snapshots; `null` disables them.
    #[serde(default)]
    pub snapshot_interval: Option<f64>,
    /// File name under `dir`; `{index}` is replaced by the snapshot number.
    #[serde(default = "default_vtk_pattern")]
    pub vtk_pattern: String,
    /// File name under `dir`.
    #[serde(default = "default_stats")]
    pub stats_csv: String,
    /// Write measured wall times into the stats CSV instead of zeros.
    #[serde(default)]
    pub record_timings: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            dir: default_dir(),
            snapshot_interval: None,
            vtk_pattern: default_vtk_pattern(),
            stats_csv: default_stats(),
            record_timings: false,
        }
    }
}

impl OutputSpec {
    pub fn stats_path(&self) -> PathBuf {
        self.dir.join(&self.stats_csv)
    }

    pub fn snapshot_path(&self, index: usize) -> PathBuf {
        self.dir
            .join(self.vtk_pattern.replace("{index}", &format!("{index:05}")))
    }

    /// Creates the output directory and probes it for writability.
    pub fn prepare_dir(&self) -> Result<(), IoError> {
        fs::create_dir_all(&self.dir).map_err(|e| IoError::io(&self.dir, e))?;
        let probe = self.dir.join(".swfv-write-probe");
        fs::write(&probe, b"").map_err(|e| IoError::io(&self.dir, e))?;
        fs::remove_file(&probe).map_err(|e| IoError::io(&probe, e))
    }
}

/// Complete run description. After [`parse_config`] every default is filled
/// in and exactly one mesh source is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub mesh: MeshSection,
    pub case: CaseSpec,
    #[serde(default)]
    pub params: PhysParams,
    #[serde(default)]
    pub backend: BackendSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Command-line values that replace file values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub threads: Option<usize>,
    pub backend: Option<BackendKind>,
    pub t_end: Option<f64>,
    pub out_dir: Option<PathBuf>,
}

impl Config {
    pub fn mesh_source(&self) -> MeshSource {
        match (&self.mesh.file, &self.mesh.generate) {
            (Some(path), _) => MeshSource::File(path.clone()),
            (None, Some(g)) => MeshSource::Generate(*g),
            (None, None) => {
                let (nx, ny) = self.case.default_resolution();
                let [lx, ly] = self.case.extent();
                MeshSource::Generate(GridSpec { nx, ny, lx, ly })
            }
        }
    }

    /// Makes a relative mesh path relative to `base` instead of the
    /// working directory.
    pub fn resolve_paths(&mut self, base: &Path) {
        if let Some(file) = &self.mesh.file {
            if file.is_relative() {
                self.mesh.file = Some(base.join(file));
            }
        }
    }

    pub fn validate(&self) -> Result<(), IoError> {
        if self.mesh.file.is_some() && self.mesh.generate.is_some() {
            return Err(IoError::Config(
                "contradictory mesh sources: give either mesh.file or mesh.generate".into(),
            ));
        }
        if let Some(g) = &self.mesh.generate {
            if g.nx == 0 || g.ny == 0 {
                return Err(IoError::Config("mesh.generate: nx and ny must be at least 1".into()));
            }
            if !(g.lx > 0.0 && g.lx.is_finite() && g.ly > 0.0 && g.ly.is_finite()) {
                return Err(IoError::Config("mesh.generate: lx and ly must be positive".into()));
            }
        }
        self.case
            .validate()
            .map_err(|e| IoError::Config(format!("case: {e}")))?;
        self.params
            .validate()
            .map_err(|e| IoError::Config(format!("params: {e}")))?;
        if self.backend.threads == 0 {
            return Err(IoError::Config("backend: threads must be at least 1".into()));
        }
        if let Some(dt) = self.output.snapshot_interval {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(IoError::Config(format!(
                    "output: snapshot_interval must be positive or null, got {dt}"
                )));
            }
        }
        if !self.output.vtk_pattern.contains("{index}") {
            return Err(IoError::Config("output: vtk_pattern must contain {index}".into()));
        }
        if self.output.stats_csv.is_empty() {
            return Err(IoError::Config("output: stats_csv must not be empty".into()));
        }
        Ok(())
    }

    /// Pretty JSON of the effective configuration.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

/// Parses, applies overrides and defaults, and validates. The mesh source
/// is made explicit so that the echoed configuration is self-contained.
pub fn parse_config(json: &str, overrides: &Overrides) -> Result<Config, IoError> {
    let mut cfg: Config = serde_json::from_str(json).map_err(|e| IoError::Config(e.to_string()))?;
    if let Some(threads) = overrides.threads {
        cfg.backend.threads = threads;
    }
    if let Some(kind) = overrides.backend {
        cfg.backend.kind = kind;
    }
    if let Some(t_end) = overrides.t_end {
        cfg.case.set_t_end(t_end);
    }
    if let Some(dir) = &overrides.out_dir {
        cfg.output.dir = dir.clone();
    }
    cfg.validate()?;
    if cfg.mesh.file.is_none() && cfg.mesh.generate.is_none() {
        if let MeshSource::Generate(g) = cfg.mesh_source() {
            cfg.mesh.generate = Some(g);
        }
    }
    Ok(cfg)
}
