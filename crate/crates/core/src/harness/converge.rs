use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::HarnessError;
use crate::cases::{prepare, stoker_exact, CaseSpec, DamBreak};
use crate::engine::{Backend, BackendSpec, RunOptions, Solver};
use crate::io::{fmt_f64, IoError};
use crate::kernels::{Conserved, PhysParams};
use crate::mesh::{generate_square_mesh, Mesh};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub nx: usize,
    pub ny: usize,
    pub cells: usize,
    pub steps: u64,
    pub l1_error: f64,
    /// Error of the previous (coarser) rung over this one.
    pub ratio: Option<f64>,
    /// `log2(ratio)`.
    pub order: Option<f64>,
    /// False when the error did not decrease from the previous rung.
    pub monotone: bool,
}

/// Area-weighted mean of `|h - h_exact|` with the exact depth sampled at
/// cell centroids.
pub fn l1_depth_error(mesh: &Mesh, state: &[Conserved], spec: &DamBreak, t: f64, g: f64) -> Result<f64, HarnessError> {
    let mut err = 0.0;
    let mut area = 0.0;
    for (cell, u) in mesh.cells.iter().zip(state) {
        let (h, _) = stoker_exact(spec.h_left, spec.h_right, cell.centroid[0], t, spec.x_dam, g)?;
        err += cell.area * (u.h - h).abs();
        area += cell.area;
    }
    Ok(err / area)
}

pub fn convergence_study(
    spec: &DamBreak,
    resolutions: &[(usize, usize)],
    t_eval: f64,
    params: &PhysParams,
    backend: BackendSpec,
) -> Result<Vec<ConvergenceRow>, HarnessError> {
    if !(t_eval >= 0.0 && t_eval.is_finite()) {
        return Err(HarnessError::Invalid(format!("t_eval must be non-negative, got {t_eval}")));
    }
    let case = *spec;
    let case_spec = CaseSpec::DamBreak(case);
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(resolutions.len());
    for &(nx, ny) in resolutions {
        let raw = generate_square_mesh(nx, ny, case.lx, case.ly)?;
        let (mesh, initial) = prepare(&case_spec, &raw)?;
        let mut solver = Solver::new(&mesh, *params, Backend::new(backend)?, initial)?;
        let stats = solver
            .run(
                &RunOptions {
                    t_end: t_eval,
                    snapshot_interval: None,
                    max_steps: None,
                },
                |_| {},
            )
            .map_err(|f| f.error)?;
        let l1 = l1_depth_error(&mesh, solver.state(), &case, solver.time(), params.g)?;
        let (ratio, order, monotone) = match rows.last() {
            Some(prev) => {
                let r = prev.l1_error / l1;
                (Some(r), Some(r.log2()), l1 < prev.l1_error)
            }
            None => (None, None, true),
        };
        rows.push(ConvergenceRow {
            nx,
            ny,
            cells: mesh.num_cells(),
            steps: stats.steps,
            l1_error: l1,
            ratio,
            order,
            monotone,
        });
    }
    Ok(rows)
}

pub fn write_convergence_csv(path: &Path, rows: &[ConvergenceRow]) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| IoError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let mut body = String::from("nx,ny,cells,steps,l1_error,ratio,order,monotone\n");
    for r in rows {
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.nx,
            r.ny,
            r.cells,
            r.steps,
            fmt_f64(r.l1_error),
            opt(r.ratio),
            opt(r.order),
            r.monotone
        ));
    }
    w.write_all(body.as_bytes()).map_err(|e| IoError::io(path, e))?;
    w.flush().map_err(|e| IoError::io(path, e))
}
