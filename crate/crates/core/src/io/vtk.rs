use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{fmt_f64, IoError};
use crate::kernels::Conserved;
use crate::mesh::Mesh;

/// Legacy ASCII VTK 3.0 unstructured grid with cell data `h`, `eta`, `z`
/// and `velocity`. Dry cells report zero velocity.
pub fn write_vtk(mut w: impl Write, mesh: &Mesh, state: &[Conserved], t: f64, h_dry: f64) -> std::io::Result<()> {
    assert_eq!(state.len(), mesh.num_cells(), "state sized to mesh");
    let n = mesh.num_cells();
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "shallow water snapshot t={}", fmt_f64(t))?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "FIELD FieldData 1")?;
    writeln!(w, "TIME 1 1 double")?;
    writeln!(w, "{}", fmt_f64(t))?;
    writeln!(w, "POINTS {} double", mesh.num_nodes())?;
    for p in &mesh.nodes {
        writeln!(w, "{} {} {}", fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(0.0))?;
    }
    writeln!(w, "CELLS {} {}", n, 4 * n)?;
    for c in &mesh.cells {
        writeln!(w, "3 {} {} {}", c.nodes[0], c.nodes[1], c.nodes[2])?;
    }
    writeln!(w, "CELL_TYPES {n}")?;
    for _ in 0..n {
        writeln!(w, "5")?;
    }
    writeln!(w, "CELL_DATA {n}")?;
    let scalar = |w: &mut dyn Write, name: &str, values: &mut dyn Iterator<Item = f64>| -> std::io::Result<()> {
        writeln!(w, "SCALARS {name} double 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for v in values {
            writeln!(w, "{}", fmt_f64(v))?;
        }
        Ok(())
    };
    scalar(&mut w, "h", &mut state.iter().map(|u| u.h))?;
    scalar(
        &mut w,
        "eta",
        &mut state.iter().zip(&mesh.cells).map(|(u, c)| u.h + c.bathymetry),
    )?;
    scalar(&mut w, "z", &mut mesh.cells.iter().map(|c| c.bathymetry))?;
    writeln!(w, "VECTORS velocity double")?;
    for u in state {
        let (vx, vy) = u.velocity(h_dry);
        writeln!(w, "{} {} {}", fmt_f64(vx), fmt_f64(vy), fmt_f64(0.0))?;
    }
    Ok(())
}

pub fn write_vtk_snapshot(mesh: &Mesh, state: &[Conserved], t: f64, h_dry: f64, path: &Path) -> Result<(), IoError> {
    if state.len() != mesh.num_cells() {
        return Err(IoError::Format(format!(
            "state has {} cells, mesh has {}",
            state.len(),
            mesh.num_cells()
        )));
    }
    let file = File::create(path).map_err(|e| IoError::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_vtk(&mut w, mesh, state, t, h_dry).map_err(|e| IoError::io(path, e))?;
    w.flush().map_err(|e| IoError::io(path, e))
}
