//! Unstructured triangular meshes with edge-based connectivity.
//!
//! A [`Mesh`] is built once from a [`RawMesh`] (node coordinates plus
//! triangle node triples) and is immutable afterwards. Each edge stores a
//! unit normal pointing from its left cell to its right cell; each cell
//! stores its three edge incidences with a sign that turns that normal
//! into the cell's outward normal.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("mesh dimensions must be positive (nx={nx}, ny={ny}, lx={lx}, ly={ly})")]
    InvalidDimensions { nx: usize, ny: usize, lx: f64, ly: f64 },
    #[error("triangle {triangle} references node {node}, but the mesh has {nodes} nodes")]
    NodeOutOfRange {
        triangle: usize,
        node: usize,
        nodes: usize,
    },
    #[error("triangle {triangle} repeats a node index {nodes:?}")]
    RepeatedNode { triangle: usize, nodes: [usize; 3] },
    #[error("triangle {triangle} has zero area")]
    ZeroArea { triangle: usize },
    #[error("non-manifold edge ({a}, {b}): {reason}")]
    NonManifoldEdge { a: usize, b: usize, reason: String },
    #[error("{what} has length {got}, expected {expected}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("cell {cell} has invalid {what} value {value}")]
    InvalidCellValue {
        cell: usize,
        what: &'static str,
        value: f64,
    },
    #[error("mesh has no triangles")]
    Empty,
}

/// Node coordinates and triangle connectivity as read from a file or
/// produced by a generator.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawMesh {
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

impl RawMesh {
    /// Checks index ranges and repeated indices.
    pub fn validate(&self) -> Result<(), MeshError> {
        if self.triangles.is_empty() {
            return Err(MeshError::Empty);
        }
        let n = self.nodes.len();
        for (t, tri) in self.triangles.iter().enumerate() {
            for &node in tri {
                if node >= n {
                    return Err(MeshError::NodeOutOfRange {
                        triangle: t,
                        node,
                        nodes: n,
                    });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(MeshError::RepeatedNode {
                    triangle: t,
                    nodes: *tri,
                });
            }
        }
        Ok(())
    }

    /// Centroid of triangle `t`, in the order the nodes are listed.
    pub fn centroid(&self, t: usize) -> [f64; 2] {
        let [a, b, c] = self.triangles[t];
        let (pa, pb, pc) = (self.nodes[a], self.nodes[b], self.nodes[c]);
        [(pa[0] + pb[0] + pc[0]) / 3.0, (pa[1] + pb[1] + pc[1]) / 3.0]
    }
}

fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// Structured triangulation of the rectangle `[0, lx] x [0, ly]`.
///
/// Every grid square is split along its lower-left to upper-right
/// diagonal, so the triangulation maps onto itself under a 180 degree
/// rotation about the rectangle center.
pub fn generate_square_mesh(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<RawMesh, MeshError> {
    if nx == 0 || ny == 0 || !(lx > 0.0) || !(ly > 0.0) || !lx.is_finite() || !ly.is_finite() {
        return Err(MeshError::InvalidDimensions { nx, ny, lx, ly });
    }
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        let y = ly * j as f64 / ny as f64;
        for i in 0..=nx {
            nodes.push([lx * i as f64 / nx as f64, y]);
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (p00, p10, p11, p01) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            triangles.push([p00, p10, p11]);
            triangles.push([p00, p11, p01]);
        }
    }
    Ok(RawMesh { nodes, triangles })
}

/// Sentinel stored in [`Edge::right`] for boundary edges.
pub const BOUNDARY: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeIncidence {
    pub edge: usize,
    /// +1 when the cell is the edge's left cell, -1 when it is the right cell.
    pub sign: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    /// Counter-clockwise node triple.
    pub nodes: [usize; 3],
    pub area: f64,
    pub centroid: [f64; 2],
    pub perimeter: f64,
    /// `2 * area / perimeter`, the CFL length scale.
    pub inradius: f64,
    pub bathymetry: f64,
    pub manning: f64,
    pub edges: [EdgeIncidence; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Node pair, ordered counter-clockwise with respect to the left cell.
    pub nodes: [usize; 2],
    pub left: usize,
    /// Right cell, or [`BOUNDARY`].
    pub right: usize,
    /// Unit normal pointing from the left cell to the right cell.
    pub normal: [f64; 2],
    pub length: f64,
}

impl Edge {
    #[inline]
    pub fn is_boundary(&self) -> bool {
        self.right == BOUNDARY
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    pub cells: Vec<Cell>,
    pub edges: Vec<Edge>,
}

/// Builds connectivity and geometry.
///
/// Triangles given clockwise are reordered counter-clockwise. Edge ids are
/// assigned in order of first appearance, scanning triangles in order, so
/// the result depends only on the input.
pub fn build_mesh(raw: &RawMesh, bathymetry: &[f64], manning: &[f64]) -> Result<Mesh, MeshError> {
    raw.validate()?;
    let ncells = raw.triangles.len();
    check_len("bathymetry", ncells, bathymetry.len())?;
    check_len("manning", ncells, manning.len())?;

    let mut cells = Vec::with_capacity(ncells);
    let mut edges: Vec<Edge> = Vec::with_capacity(ncells * 3 / 2 + 2);
    let mut lookup: HashMap<(usize, usize), usize> = HashMap::with_capacity(ncells * 3 / 2 + 2);

    for (t, tri) in raw.triangles.iter().enumerate() {
        if !bathymetry[t].is_finite() {
            return Err(MeshError::InvalidCellValue {
                cell: t,
                what: "bathymetry",
                value: bathymetry[t],
            });
        }
        if !(manning[t] >= 0.0) || !manning[t].is_finite() {
            return Err(MeshError::InvalidCellValue {
                cell: t,
                what: "manning",
                value: manning[t],
            });
        }
        let mut nodes = *tri;
        let mut area = signed_area(raw.nodes[nodes[0]], raw.nodes[nodes[1]], raw.nodes[nodes[2]]);
        if area < 0.0 {
            nodes.swap(1, 2);
            area = -area;
        }
        if !(area > 0.0) {
            return Err(MeshError::ZeroArea { triangle: t });
        }

        let mut incidences = [EdgeIncidence { edge: 0, sign: 1.0 }; 3];
        let mut perimeter = 0.0;
        for k in 0..3 {
            let (a, b) = (nodes[k], nodes[(k + 1) % 3]);
            let key = (a.min(b), a.max(b));
            match lookup.get(&key) {
                None => {
                    let (pa, pb) = (raw.nodes[a], raw.nodes[b]);
                    let (dx, dy) = (pb[0] - pa[0], pb[1] - pa[1]);
                    let length = dx.hypot(dy);
                    let id = edges.len();
                    edges.push(Edge {
                        nodes: [a, b],
                        left: t,
                        right: BOUNDARY,
                        // Outward normal of a counter-clockwise triangle.
                        normal: [dy / length, -dx / length],
                        length,
                    });
                    lookup.insert(key, id);
                    incidences[k] = EdgeIncidence { edge: id, sign: 1.0 };
                    perimeter += length;
                }
                Some(&id) => {
                    let edge = &mut edges[id];
                    if edge.right != BOUNDARY {
                        return Err(MeshError::NonManifoldEdge {
                            a,
                            b,
                            reason: "shared by more than two triangles".into(),
                        });
                    }
                    if edge.nodes != [b, a] {
                        return Err(MeshError::NonManifoldEdge {
                            a,
                            b,
                            reason: format!(
                                "triangles {} and {} overlap (edge traversed in the same direction)",
                                edge.left, t
                            ),
                        });
                    }
                    edge.right = t;
                    incidences[k] = EdgeIncidence { edge: id, sign: -1.0 };
                    perimeter += edge.length;
                }
            }
        }

        let (pa, pb, pc) = (raw.nodes[nodes[0]], raw.nodes[nodes[1]], raw.nodes[nodes[2]]);
        cells.push(Cell {
            nodes,
            area,
            centroid: [(pa[0] + pb[0] + pc[0]) / 3.0, (pa[1] + pb[1] + pc[1]) / 3.0],
            perimeter,
            inradius: 2.0 * area / perimeter,
            bathymetry: bathymetry[t],
            manning: manning[t],
            edges: incidences,
        });
    }

    Ok(Mesh {
        nodes: raw.nodes.clone(),
        cells,
        edges,
    })
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<(), MeshError> {
    if expected != got {
        return Err(MeshError::SizeMismatch { what, expected, got });
    }
    Ok(())
}

impl Mesh {
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn boundary_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_boundary()).count()
    }

    pub fn min_inradius(&self) -> f64 {
        self.cells.iter().map(|c| c.inradius).fold(f64::INFINITY, f64::min)
    }

    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &self.nodes {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        (lo, hi)
    }

    /// Replaces per-cell bathymetry and Manning coefficients.
    pub fn with_cell_fields(mut self, bathymetry: &[f64], manning: &[f64]) -> Result<Mesh, MeshError> {
        let n = self.cells.len();
        check_len("bathymetry", n, bathymetry.len())?;
        check_len("manning", n, manning.len())?;
        for (i, cell) in self.cells.iter_mut().enumerate() {
            if !bathymetry[i].is_finite() {
                return Err(MeshError::InvalidCellValue {
                    cell: i,
                    what: "bathymetry",
                    value: bathymetry[i],
                });
            }
            if !(manning[i] >= 0.0) || !manning[i].is_finite() {
                return Err(MeshError::InvalidCellValue {
                    cell: i,
                    what: "manning",
                    value: manning[i],
                });
            }
            cell.bathymetry = bathymetry[i];
            cell.manning = manning[i];
        }
        Ok(self)
    }

    /// Outward-signed sum of `n_k * l_k` over the edges of cell `i`.
    pub fn closure_residual(&self, i: usize) -> [f64; 2] {
        let mut s = [0.0; 2];
        for inc in &self.cells[i].edges {
            let e = &self.edges[inc.edge];
            s[0] += inc.sign * e.normal[0] * e.length;
            s[1] += inc.sign * e.normal[1] * e.length;
        }
        s
    }

    /// Recovers the raw connectivity (counter-clockwise ordered).
    pub fn to_raw(&self) -> RawMesh {
        RawMesh {
            nodes: self.nodes.clone(),
            triangles: self.cells.iter().map(|c| c.nodes).collect(),
        }
    }

    pub fn bathymetry(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.bathymetry).collect()
    }

    pub fn manning(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.manning).collect()
    }
}

/// Summary of mesh quality and topology checks.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub nodes: usize,
    pub cells: usize,
    pub edges: usize,
    pub boundary_edges: usize,
    pub boundary_loops: usize,
    pub min_area: f64,
    pub max_area: f64,
    pub min_inradius: f64,
    /// `V - E + F` with F counting triangles only.
    pub euler_characteristic: i64,
    pub euler_ok: bool,
    /// Largest closure residual norm divided by the cell perimeter.
    pub max_closure_residual: f64,
    pub closure_ok: bool,
    pub normals_ok: bool,
    pub build_error: Option<MeshError>,
}

impl DiagnosticsReport {
    pub fn passed(&self) -> bool {
        self.build_error.is_none() && self.euler_ok && self.closure_ok && self.normals_ok
    }

    fn failed(err: MeshError, nodes: usize, cells: usize) -> Self {
        DiagnosticsReport {
            nodes,
            cells,
            edges: 0,
            boundary_edges: 0,
            boundary_loops: 0,
            min_area: f64::NAN,
            max_area: f64::NAN,
            min_inradius: f64::NAN,
            euler_characteristic: 0,
            euler_ok: false,
            max_closure_residual: f64::NAN,
            closure_ok: false,
            normals_ok: false,
            build_error: Some(err),
        }
    }
}

pub const CLOSURE_TOLERANCE: f64 = 1e-10;

/// Builds `raw` with flat zero fields and reports on it. Build failures
/// are carried in [`DiagnosticsReport::build_error`].
pub fn diagnose_raw(raw: &RawMesh) -> DiagnosticsReport {
    let zeros = vec![0.0; raw.triangles.len()];
    match build_mesh(raw, &zeros, &zeros) {
        Ok(mesh) => mesh_diagnostics(&mesh),
        Err(e) => DiagnosticsReport::failed(e, raw.nodes.len(), raw.triangles.len()),
    }
}

pub fn mesh_diagnostics(mesh: &Mesh) -> DiagnosticsReport {
    let mut min_area = f64::INFINITY;
    let mut max_area = 0.0f64;
    let mut max_closure = 0.0f64;
    for (i, c) in mesh.cells.iter().enumerate() {
        min_area = min_area.min(c.area);
        max_area = max_area.max(c.area);
        let r = mesh.closure_residual(i);
        max_closure = max_closure.max(r[0].hypot(r[1]) / c.perimeter);
    }
    let normals_ok = mesh
        .edges
        .iter()
        .all(|e| (e.normal[0].hypot(e.normal[1]) - 1.0).abs() <= 1e-12);

    let boundary_loops = count_boundary_loops(mesh);
    let euler = mesh.num_nodes() as i64 - mesh.num_edges() as i64 + mesh.num_cells() as i64;
    DiagnosticsReport {
        nodes: mesh.num_nodes(),
        cells: mesh.num_cells(),
        edges: mesh.num_edges(),
        boundary_edges: mesh.boundary_edge_count(),
        boundary_loops,
        min_area,
        max_area,
        min_inradius: mesh.min_inradius(),
        euler_characteristic: euler,
        euler_ok: euler == 2 - boundary_loops as i64,
        max_closure_residual: max_closure,
        closure_ok: max_closure <= CLOSURE_TOLERANCE,
        normals_ok,
        build_error: None,
    }
}

/// Connected components of the boundary-edge graph.
fn count_boundary_loops(mesh: &Mesh) -> usize {
    let mut parent: Vec<usize> = (0..mesh.num_nodes()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut on_boundary = vec![false; mesh.num_nodes()];
    for e in mesh.edges.iter().filter(|e| e.is_boundary()) {
        let [a, b] = e.nodes;
        on_boundary[a] = true;
        on_boundary[b] = true;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    (0..mesh.num_nodes())
        .filter(|&n| on_boundary[n] && find(&mut parent, n) == n)
        .count()
}

impl std::fmt::Display for DiagnosticsReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(e) = &self.build_error {
            writeln!(f, "nodes: {}", self.nodes)?;
            writeln!(f, "cells: {}", self.cells)?;
            return writeln!(f, "build: FAILED ({e})");
        }
        writeln!(f, "nodes: {}", self.nodes)?;
        writeln!(f, "cells: {}", self.cells)?;
        writeln!(f, "edges: {}", self.edges)?;
        writeln!(f, "boundary edges: {}", self.boundary_edges)?;
        writeln!(f, "boundary loops: {}", self.boundary_loops)?;
        writeln!(f, "area min/max: {:.6e} / {:.6e}", self.min_area, self.max_area)?;
        writeln!(f, "min inradius: {:.6e}", self.min_inradius)?;
        writeln!(
            f,
            "euler V-E+F: {} ({})",
            self.euler_characteristic,
            if self.euler_ok { "ok" } else { "FAILED" }
        )?;
        writeln!(
            f,
            "closure residual: {:.3e} ({})",
            self.max_closure_residual,
            if self.closure_ok { "ok" } else { "FAILED" }
        )?;
        writeln!(f, "unit normals: {}", if self.normals_ok { "ok" } else { "FAILED" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(raw: &RawMesh) -> Mesh {
        let z = vec![0.0; raw.triangles.len()];
        build_mesh(raw, &z, &z).unwrap()
    }

    #[test]
    fn smallest_square_mesh() {
        let raw = generate_square_mesh(1, 1, 1.0, 1.0).unwrap();
        assert_eq!(raw.nodes.len(), 4);
        assert_eq!(raw.triangles.len(), 2);
        let mesh = flat(&raw);
        assert_eq!(mesh.num_edges(), 5);
        let interior: Vec<_> = mesh.edges.iter().filter(|e| !e.is_boundary()).collect();
        assert_eq!(interior.len(), 1);
        assert_ne!(interior[0].left, interior[0].right);
    }

    #[test]
    fn two_by_two_counts() {
        let mesh = flat(&generate_square_mesh(2, 2, 1.0, 1.0).unwrap());
        assert_eq!(mesh.num_nodes(), 9);
        assert_eq!(mesh.num_cells(), 8);
        assert_eq!(mesh.num_edges(), 16);
        assert_eq!(mesh.boundary_edge_count(), 8);
        // two boundary edges per side of the square
        let side = |pred: &dyn Fn([f64; 2]) -> bool| {
            mesh.edges
                .iter()
                .filter(|e| e.is_boundary())
                .filter(|e| pred(mesh.nodes[e.nodes[0]]) && pred(mesh.nodes[e.nodes[1]]))
                .count()
        };
        assert_eq!(side(&|p| p[0] == 0.0), 2);
        assert_eq!(side(&|p| p[0] == 1.0), 2);
        assert_eq!(side(&|p| p[1] == 0.0), 2);
        assert_eq!(side(&|p| p[1] == 1.0), 2);
    }

    #[test]
    fn table_scale_generator() {
        let raw = generate_square_mesh(23, 23, 75.0, 75.0).unwrap();
        assert_eq!(raw.triangles.len(), 1058);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(generate_square_mesh(0, 1, 1.0, 1.0).is_err());
        assert!(generate_square_mesh(1, 0, 1.0, 1.0).is_err());
        assert!(generate_square_mesh(1, 1, 0.0, 1.0).is_err());
        assert!(generate_square_mesh(1, 1, 1.0, -2.0).is_err());
    }

    #[test]
    fn clockwise_input_is_reordered() {
        let raw = RawMesh {
            nodes: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            triangles: vec![[0, 2, 1]],
        };
        let mesh = flat(&raw);
        assert_eq!(mesh.cells[0].nodes, [0, 1, 2]);
        assert_eq!(mesh.cells[0].area, 0.5);
    }

    #[test]
    fn duplicate_triangle_is_non_manifold() {
        let mut raw = generate_square_mesh(1, 1, 1.0, 1.0).unwrap();
        raw.triangles.push(raw.triangles[0]);
        let report = diagnose_raw(&raw);
        assert!(matches!(report.build_error, Some(MeshError::NonManifoldEdge { .. })));
        assert!(!report.passed());
    }

    #[test]
    fn triple_shared_edge_is_non_manifold() {
        let raw = RawMesh {
            nodes: vec![[0.0, 0.0], [1.0, 0.0], [0.5, 1.0], [0.5, -1.0], [2.0, 2.0]],
            triangles: vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]],
        };
        let z = vec![0.0; 3];
        assert!(matches!(build_mesh(&raw, &z, &z), Err(MeshError::NonManifoldEdge { .. })));
    }

    #[test]
    fn structural_errors() {
        let raw = RawMesh {
            nodes: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            triangles: vec![[0, 1, 3]],
        };
        assert!(matches!(raw.validate(), Err(MeshError::NodeOutOfRange { node: 3, .. })));
        let raw = RawMesh {
            nodes: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            triangles: vec![[0, 1, 1]],
        };
        assert!(matches!(raw.validate(), Err(MeshError::RepeatedNode { .. })));
        let raw = RawMesh {
            nodes: vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]],
            triangles: vec![[0, 1, 2]],
        };
        assert!(matches!(flat_err(&raw), MeshError::ZeroArea { triangle: 0 }));
        let raw = generate_square_mesh(1, 1, 1.0, 1.0).unwrap();
        assert!(matches!(
            build_mesh(&raw, &[0.0], &[0.0, 0.0]),
            Err(MeshError::SizeMismatch { what: "bathymetry", .. })
        ));
        assert!(matches!(
            build_mesh(&raw, &[0.0, 0.0], &[0.0, -0.1]),
            Err(MeshError::InvalidCellValue { what: "manning", .. })
        ));
    }

    fn flat_err(raw: &RawMesh) -> MeshError {
        let z = vec![0.0; raw.triangles.len()];
        build_mesh(raw, &z, &z).unwrap_err()
    }

    #[test]
    fn unit_square_diagnostics() {
        let report = mesh_diagnostics(&flat(&generate_square_mesh(1, 1, 1.0, 1.0).unwrap()));
        assert_eq!(report.min_area, 0.5);
        assert_eq!(report.boundary_edges, 4);
        assert_eq!(report.euler_characteristic, 1);
        assert!(report.passed());
        // legs 1, 1, hypotenuse sqrt(2)
        let r = 2.0 * 0.5 / (2.0 + 2f64.sqrt());
        assert!((report.min_inradius - r).abs() < 1e-15);
    }

    #[test]
    fn build_is_idempotent() {
        let raw = generate_square_mesh(4, 3, 2.0, 1.5).unwrap();
        let once = flat(&raw);
        let twice = flat(&once.to_raw());
        assert_eq!(once, twice);
    }

    #[test]
    fn incidence_signs_are_opposite_on_interior_edges() {
        let mesh = flat(&generate_square_mesh(5, 4, 3.0, 2.0).unwrap());
        let mut seen = vec![Vec::new(); mesh.num_edges()];
        for (i, c) in mesh.cells.iter().enumerate() {
            for inc in &c.edges {
                seen[inc.edge].push((i, inc.sign));
            }
        }
        for (id, refs) in seen.iter().enumerate() {
            let e = &mesh.edges[id];
            if e.is_boundary() {
                assert_eq!(refs, &vec![(e.left, 1.0)]);
            } else {
                assert_eq!(refs.len(), 2);
                assert_eq!(refs[0].1 + refs[1].1, 0.0);
            }
        }
    }
}
