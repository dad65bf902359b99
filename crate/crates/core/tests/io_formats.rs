use proptest::prelude::*;
use swfv::cases::{prepare, CaseSpec, WaterDrop};
use swfv::engine::{Backend, RunOptions, Solver};
use swfv::io::{read_mesh_native, write_mesh_native, write_stats_csv, write_vtk_snapshot, STATS_HEADER};
use swfv::{build_mesh, generate_square_mesh, Conserved, PhysParams};

/// Minimal legacy-VTK reader: checks section counts and returns the points,
/// connectivity and named cell arrays.
struct VtkData {
    points: Vec<[f64; 3]>,
    cells: Vec<[usize; 3]>,
    scalars: Vec<(String, Vec<f64>)>,
    vectors: Vec<[f64; 3]>,
    time: f64,
}

fn parse_vtk(text: &str) -> Result<VtkData, String> {
    let mut lines = text.lines();
    let mut next = || lines.next().ok_or_else(|| "unexpected end".to_string());
    if next()? != "# vtk DataFile Version 3.0" {
        return Err("header".into());
    }
    next()?;
    if next()? != "ASCII" || next()? != "DATASET UNSTRUCTURED_GRID" {
        return Err("dataset".into());
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{s}: {e}"));
    let int = |s: &str| s.parse::<usize>().map_err(|e| format!("{s}: {e}"));
    let fields = |s: &str| s.split_whitespace().map(str::to_string).collect::<Vec<_>>();

    let mut time = f64::NAN;
    let mut line = next()?;
    if line.starts_with("FIELD") {
        if next()? != "TIME 1 1 double" {
            return Err("time field".into());
        }
        time = num(next()?)?;
        line = next()?;
    }
    let f = fields(line);
    if f.len() != 3 || f[0] != "POINTS" {
        return Err(format!("points header: {line}"));
    }
    let np = int(&f[1])?;
    let mut points = Vec::with_capacity(np);
    for _ in 0..np {
        let f = fields(next()?);
        if f.len() != 3 {
            return Err("point arity".into());
        }
        points.push([num(&f[0])?, num(&f[1])?, num(&f[2])?]);
    }
    let f = fields(next()?);
    if f[0] != "CELLS" {
        return Err("cells header".into());
    }
    let nc = int(&f[1])?;
    let size = int(&f[2])?;
    let mut cells = Vec::with_capacity(nc);
    let mut counted = 0;
    for _ in 0..nc {
        let f = fields(next()?);
        counted += f.len();
        if f.len() != 4 || f[0] != "3" {
            return Err("triangle connectivity".into());
        }
        let c = [int(&f[1])?, int(&f[2])?, int(&f[3])?];
        if c.iter().any(|&i| i >= np) {
            return Err("point index out of range".into());
        }
        cells.push(c);
    }
    if counted != size {
        return Err(format!("CELLS size {size} but {counted} entries"));
    }
    let f = fields(next()?);
    if f != ["CELL_TYPES".to_string(), nc.to_string()] {
        return Err("cell types header".into());
    }
    for _ in 0..nc {
        if next()? != "5" {
            return Err("cell type".into());
        }
    }
    let f = fields(next()?);
    if f != ["CELL_DATA".to_string(), nc.to_string()] {
        return Err("cell data header".into());
    }
    let mut scalars = Vec::new();
    let mut vectors = Vec::new();
    while let Some(line) = lines.next() {
        let f = fields(line);
        match f.first().map(String::as_str) {
            Some("SCALARS") => {
                if lines.next() != Some("LOOKUP_TABLE default") {
                    return Err("lookup table".into());
                }
                let mut values = Vec::with_capacity(nc);
                for _ in 0..nc {
                    values.push(num(lines.next().ok_or("short scalar block")?)?);
                }
                scalars.push((f[1].clone(), values));
            }
            Some("VECTORS") => {
                for _ in 0..nc {
                    let v = fields(lines.next().ok_or("short vector block")?);
                    if v.len() != 3 {
                        return Err("vector arity".into());
                    }
                    vectors.push([num(&v[0])?, num(&v[1])?, num(&v[2])?]);
                }
            }
            None => {}
            Some(other) => return Err(format!("unexpected section {other}")),
        }
    }
    Ok(VtkData {
        points,
        cells,
        scalars,
        vectors,
        time,
    })
}

fn scalar<'a>(d: &'a VtkData, name: &str) -> &'a [f64] {
    &d.scalars.iter().find(|(n, _)| n == name).unwrap().1
}

#[test]
fn two_triangle_vtk_layout() {
    let raw = generate_square_mesh(1, 1, 1.0, 1.0).unwrap();
    let mesh = build_mesh(&raw, &[0.0, 0.0], &[0.0, 0.0]).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dry.vtk");
    write_vtk_snapshot(&mesh, &[Conserved::DRY; 2], 0.0, 1e-6, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\nCELLS 2 8\n"));
    let d = parse_vtk(&text).unwrap();
    assert_eq!(scalar(&d, "h"), &[0.0, 0.0]);
    assert_eq!(d.points.len(), 4);
}

#[test]
fn vtk_parse_back_matches_state() {
    let spec = CaseSpec::WaterDrop(WaterDrop::default());
    let raw = generate_square_mesh(12, 12, 1000.0, 1000.0).unwrap();
    let (mesh, init) = prepare(&spec, &raw).unwrap();
    let params = PhysParams::default();
    let mut solver = Solver::new(&mesh, params, Backend::sequential(), init).unwrap();
    solver
        .run(
            &RunOptions {
                t_end: 30.0,
                snapshot_interval: None,
                max_steps: None,
            },
            |_| {},
        )
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wd.vtk");
    write_vtk_snapshot(&mesh, solver.state(), solver.time(), params.h_dry, &path).unwrap();
    let d = parse_vtk(&std::fs::read_to_string(&path).unwrap()).unwrap();

    assert_eq!(d.time, solver.time());
    assert_eq!(d.points.len(), mesh.num_nodes());
    assert_eq!(d.cells.len(), mesh.num_cells());
    for (p, q) in d.points.iter().zip(&mesh.nodes) {
        assert_eq!([p[0], p[1]], *q);
    }
    for (c, cell) in d.cells.iter().zip(&mesh.cells) {
        assert_eq!(*c, cell.nodes);
    }
    assert_eq!(d.vectors.len(), mesh.num_cells());
    let h = scalar(&d, "h");
    let eta = scalar(&d, "eta");
    let z = scalar(&d, "z");
    for (i, u) in solver.state().iter().enumerate() {
        let bed = mesh.cells[i].bathymetry;
        assert_eq!(h[i], u.h);
        assert_eq!(z[i], bed);
        assert_eq!(eta[i], u.h + bed);
        assert_eq!(d.vectors[i], [u.qx / u.h, u.qy / u.h, 0.0]);
    }
}

#[test]
fn stats_csv_schema() {
    let spec = CaseSpec::WaterDrop(WaterDrop::default());
    let raw = generate_square_mesh(6, 6, 1000.0, 1000.0).unwrap();
    let (mesh, init) = prepare(&spec, &raw).unwrap();
    let mut solver = Solver::new(&mesh, PhysParams::default(), Backend::sequential(), init).unwrap();
    let mut steps = Vec::new();
    for _ in 0..5 {
        steps.push(solver.step(1e9).unwrap());
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    write_stats_csv(&path, &steps, false).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], STATS_HEADER);
    assert_eq!(rows.len(), 6);
    for (row, s) in rows[1..].iter().zip(&steps) {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f.len(), 8);
        assert_eq!(f[0].parse::<u64>().unwrap(), s.step);
        assert_eq!(f[1].parse::<f64>().unwrap(), s.t);
        assert_eq!(f[2].parse::<f64>().unwrap(), s.dt);
        assert_eq!(f[3].parse::<f64>().unwrap(), s.mass);
    }
}

fn arb_raw_mesh() -> impl Strategy<Value = (usize, usize, f64, f64, u64)> {
    (1usize..6, 1usize..6, 1e-3f64..1e4, 1e-3f64..1e4, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn native_round_trip((nx, ny, lx, ly, seed) in arb_raw_mesh()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut raw = generate_square_mesh(nx, ny, lx, ly).unwrap();
        for p in raw.nodes.iter_mut() {
            p[0] += rng.gen_range(-1e-6..1e-6) * lx;
        }
        let n = raw.triangles.len();
        let z: Vec<f64> = (0..n).map(|_| rng.gen_range(-1e3..1e3)).collect();
        let m: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..0.1)).collect();

        let mut first = Vec::new();
        write_mesh_native(&mut first, &raw, &z, &m).unwrap();
        let parsed = read_mesh_native(first.as_slice()).unwrap();
        prop_assert_eq!(&parsed.raw, &raw);
        prop_assert_eq!(&parsed.bathymetry, &z);
        prop_assert_eq!(&parsed.manning, &m);
        let mut second = Vec::new();
        write_mesh_native(&mut second, &parsed.raw, &parsed.bathymetry, &parsed.manning).unwrap();
        prop_assert_eq!(first, second);
    }
}
