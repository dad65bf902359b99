use std::fs;
use std::path::PathBuf;

use super::HarnessError;
use crate::cases::prepare;
use crate::engine::{Backend, RunEvent, RunOptions, RunStats, Solver};
use crate::io::{read_mesh_file, write_vtk_snapshot, Config, IoError, MeshSource, StatsWriter};
use crate::mesh::{generate_square_mesh, RawMesh};

/// Name of the effective-configuration echo inside the output directory.
pub const ECHO_FILE: &str = "effective_config.json";

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub stats: RunStats,
    pub cells: usize,
    pub edges: usize,
    pub snapshots: usize,
    pub stats_path: PathBuf,
    pub echo_path: PathBuf,
}

pub fn load_mesh(source: &MeshSource) -> Result<RawMesh, HarnessError> {
    match source {
        MeshSource::File(path) => Ok(read_mesh_file(path)?.raw),
        MeshSource::Generate(g) => Ok(generate_square_mesh(g.nx, g.ny, g.lx, g.ly)?),
    }
}

/// Runs a validated configuration: writes the echo, the per-step stats CSV
/// and any scheduled VTK snapshots into the output directory.
pub fn run_config(cfg: &Config) -> Result<RunSummary, HarnessError> {
    cfg.validate()?;
    let out = &cfg.output;
    out.prepare_dir()?;
    let echo_path = out.dir.join(ECHO_FILE);
    fs::write(&echo_path, cfg.to_json()).map_err(|e| IoError::Io {
        path: echo_path.clone(),
        source: e,
    })?;

    let raw = load_mesh(&cfg.mesh_source())?;
    let (mesh, initial) = prepare(&cfg.case, &raw)?;
    let backend = Backend::new(cfg.backend)?;
    let mut solver = Solver::new(&mesh, cfg.params, backend, initial)?;

    let stats_path = out.stats_path();
    let mut writer = StatsWriter::create(&stats_path, out.record_timings)?;
    let mut failure: Option<IoError> = None;
    let mut snapshots = 0;
    let h_dry = cfg.params.h_dry;
    let options = RunOptions {
        t_end: cfg.case.t_end(),
        snapshot_interval: out.snapshot_interval,
        max_steps: None,
    };
    let result = solver.run(&options, |event| {
        if failure.is_some() {
            return;
        }
        let written = match event {
            RunEvent::Step(s) => writer.write(s),
            RunEvent::Snapshot { index, t, state, .. } => {
                snapshots += 1;
                write_vtk_snapshot(&mesh, state, t, h_dry, &out.snapshot_path(index))
            }
        };
        if let Err(e) = written {
            failure = Some(e);
        }
    });
    writer.finish()?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    let stats = result.map_err(|f| f.error)?;
    Ok(RunSummary {
        stats,
        cells: mesh.num_cells(),
        edges: mesh.num_edges(),
        snapshots,
        stats_path,
        echo_path,
    })
}
