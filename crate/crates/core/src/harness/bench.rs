use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::HarnessError;
use crate::cases::{prepare, CaseSpec, WaterDrop};
use crate::engine::{Backend, BackendKind, BackendSpec, RunOptions, Solver};
use crate::io::IoError;
use crate::kernels::PhysParams;
use crate::mesh::generate_square_mesh;

/// One grid of the ladder: an `n × n` generated water-drop basin.
#[derive(Debug, Clone, PartialEq)]
pub struct Rung {
    pub label: String,
    pub n: usize,
    /// Simulated time used in [`BenchMode::SimTime`].
    pub t_sim: f64,
}

/// Approximately 1k, 10k and 100k triangles, plus 1M and 10M when `large`.
pub fn default_ladder(large: bool) -> Vec<Rung> {
    let mut ladder = vec![
        Rung { label: "1k".into(), n: 23, t_sim: 240.0 },
        Rung { label: "10k".into(), n: 71, t_sim: 60.0 },
        Rung { label: "100k".into(), n: 224, t_sim: 12.0 },
    ];
    if large {
        ladder.push(Rung { label: "1M".into(), n: 707, t_sim: 3.0 });
        ladder.push(Rung { label: "10M".into(), n: 2236, t_sim: 1.0 });
    }
    ladder
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BenchMode {
    /// Fixed number of timed steps on every rung.
    Steps(u64),
    /// Each rung runs to its own `t_sim`.
    SimTime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub ladder: Vec<Rung>,
    /// Thread counts for the parallel backend; a sequential baseline is
    /// always measured.
    pub threads: Vec<usize>,
    pub mode: BenchMode,
    pub repetitions: usize,
    pub params: PhysParams,
    /// Skip rungs whose estimated footprint exceeds this many bytes.
    /// `None` reads `MemAvailable` from `/proc/meminfo`.
    pub memory_limit: Option<u64>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            ladder: default_ladder(false),
            threads: vec![1, 2, 4],
            mode: BenchMode::Steps(50),
            repetitions: 3,
            params: PhysParams::default(),
            memory_limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub label: String,
    pub cells: usize,
    pub edges: usize,
    pub backend: BackendKind,
    pub threads: usize,
    pub repetition: usize,
    pub steps: u64,
    /// Compute phases only: time step, fluxes, update, friction.
    pub wall_s: f64,
    pub wall_flux_s: f64,
    pub wall_update_s: f64,
    pub wall_friction_s: f64,
    /// `cells * steps / wall_s`.
    pub throughput: f64,
    /// Sequential wall time of the same repetition over this one.
    pub speedup: f64,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupSummary {
    pub label: String,
    pub backend: BackendKind,
    pub threads: usize,
    pub runs: usize,
    pub median_wall_s: f64,
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
    pub std_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub summary: Vec<SpeedupSummary>,
}

const BYTES_PER_CELL: u64 = 600;

fn available_memory() -> Option<u64> {
    let text = std::fs::read_to_string("/proc/meminfo").ok()?;
    text.lines()
        .find(|l| l.starts_with("MemAvailable:"))
        .and_then(|l| l.split_whitespace().nth(1))
        .and_then(|kb| kb.parse::<u64>().ok())
        .map(|kb| kb * 1024)
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

struct Timing {
    steps: u64,
    wall: f64,
    flux: f64,
    update: f64,
    friction: f64,
}

fn time_one(
    mesh: &crate::mesh::Mesh,
    initial: &[crate::kernels::Conserved],
    params: &PhysParams,
    spec: BackendSpec,
    mode: BenchMode,
    t_sim: f64,
) -> Result<Timing, HarnessError> {
    let mut solver = Solver::new(mesh, *params, Backend::new(spec)?, initial.to_vec())?;
    // warmup, not timed
    solver.step(f64::INFINITY)?;
    let options = match mode {
        BenchMode::Steps(n) => RunOptions {
            t_end: f64::INFINITY,
            snapshot_interval: None,
            max_steps: Some(n),
        },
        BenchMode::SimTime => RunOptions {
            t_end: t_sim,
            snapshot_interval: None,
            max_steps: None,
        },
    };
    let stats = solver.run(&options, |_| {}).map_err(|f| f.error)?;
    Ok(Timing {
        steps: stats.steps,
        wall: stats.wall_compute().as_secs_f64(),
        flux: stats.wall_flux.as_secs_f64(),
        update: stats.wall_update.as_secs_f64(),
        friction: stats.wall_friction.as_secs_f64(),
    })
}

/// Measures every rung with the sequential backend and the parallel backend
/// at each thread count. Repetitions run back to back and never overlap.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport, HarnessError> {
    if cfg.repetitions == 0 {
        return Err(HarnessError::Invalid("repetitions must be at least 1".into()));
    }
    if let BenchMode::Steps(0) = cfg.mode {
        return Err(HarnessError::Invalid("step count must be at least 1".into()));
    }
    if cfg.threads.contains(&0) {
        return Err(HarnessError::Invalid("thread counts must be at least 1".into()));
    }
    let limit = cfg.memory_limit.or_else(available_memory);
    let case = WaterDrop::default();
    let case_spec = CaseSpec::WaterDrop(case);
    let mut specs = vec![BackendSpec::sequential()];
    specs.extend(cfg.threads.iter().map(|&t| BackendSpec::parallel(t)));

    let mut report = BenchReport::default();
    for rung in &cfg.ladder {
        let cells = 2 * rung.n * rung.n;
        let footprint = cells as u64 * BYTES_PER_CELL;
        if let Some(limit) = limit {
            if footprint > limit {
                for spec in &specs {
                    report.rows.push(BenchRow {
                        label: rung.label.clone(),
                        cells,
                        edges: 0,
                        backend: spec.kind,
                        threads: spec.threads,
                        repetition: 0,
                        steps: 0,
                        wall_s: f64::NAN,
                        wall_flux_s: f64::NAN,
                        wall_update_s: f64::NAN,
                        wall_friction_s: f64::NAN,
                        throughput: f64::NAN,
                        speedup: f64::NAN,
                        skipped: Some(format!("needs ~{footprint} bytes, {limit} available")),
                    });
                }
                continue;
            }
        }
        let raw = generate_square_mesh(rung.n, rung.n, case.lx, case.ly)?;
        let (mesh, initial) = prepare(&case_spec, &raw)?;

        let mut seq_walls = vec![f64::NAN; cfg.repetitions];
        let first_row = report.rows.len();
        for (rep, seq_wall) in seq_walls.iter_mut().enumerate() {
            for spec in &specs {
                let t = time_one(&mesh, &initial, &cfg.params, *spec, cfg.mode, rung.t_sim)?;
                if spec.kind == BackendKind::Sequential {
                    *seq_wall = t.wall;
                }
                report.rows.push(BenchRow {
                    label: rung.label.clone(),
                    cells: mesh.num_cells(),
                    edges: mesh.num_edges(),
                    backend: spec.kind,
                    threads: spec.threads,
                    repetition: rep,
                    steps: t.steps,
                    wall_s: t.wall,
                    wall_flux_s: t.flux,
                    wall_update_s: t.update,
                    wall_friction_s: t.friction,
                    throughput: mesh.num_cells() as f64 * t.steps as f64 / t.wall,
                    speedup: f64::NAN,
                    skipped: None,
                });
            }
        }
        for row in &mut report.rows[first_row..] {
            row.speedup = if row.backend == BackendKind::Sequential {
                1.0
            } else {
                seq_walls[row.repetition] / row.wall_s
            };
        }
        for spec in &specs {
            let rows: Vec<&BenchRow> = report.rows[first_row..]
                .iter()
                .filter(|r| r.backend == spec.kind && r.threads == spec.threads)
                .collect();
            let mut speedups: Vec<f64> = rows.iter().map(|r| r.speedup).collect();
            let mut walls: Vec<f64> = rows.iter().map(|r| r.wall_s).collect();
            let n = speedups.len() as f64;
            let mean = speedups.iter().sum::<f64>() / n;
            let var = speedups.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
            report.summary.push(SpeedupSummary {
                label: rung.label.clone(),
                backend: spec.kind,
                threads: spec.threads,
                runs: rows.len(),
                median_wall_s: median(&mut walls),
                mean,
                median: median(&mut speedups),
                min: speedups.iter().copied().fold(f64::INFINITY, f64::min),
                max: speedups.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                std_dev: var.sqrt(),
            });
        }
    }
    Ok(report)
}

fn write_text(path: &Path, body: &str) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| IoError::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(body.as_bytes()).map_err(|e| IoError::io(path, e))?;
    w.flush().map_err(|e| IoError::io(path, e))
}

impl BenchReport {
    pub fn rows_csv(&self) -> String {
        let mut s = String::from(
            "grid,cells,edges,backend,threads,repetition,steps,wall_s,wall_flux_s,wall_update_s,wall_friction_s,cell_steps_per_s,speedup,skipped\n",
        );
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6},{}\n",
                r.label,
                r.cells,
                r.edges,
                r.backend,
                r.threads,
                r.repetition,
                r.steps,
                r.wall_s,
                r.wall_flux_s,
                r.wall_update_s,
                r.wall_friction_s,
                r.throughput,
                r.speedup,
                r.skipped.as_deref().unwrap_or("")
            ));
        }
        s
    }

    pub fn summary_csv(&self) -> String {
        let mut s = String::from(
            "grid,backend,threads,runs,median_wall_s,speedup_mean,speedup_median,speedup_min,speedup_max,speedup_std\n",
        );
        for r in &self.summary {
            s.push_str(&format!(
                "{},{},{},{},{:.6e},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                r.label, r.backend, r.threads, r.runs, r.median_wall_s, r.mean, r.median, r.min, r.max, r.std_dev
            ));
        }
        s
    }

    pub fn write_csv(&self, rows: &Path, summary: &Path) -> Result<(), IoError> {
        write_text(rows, &self.rows_csv())?;
        write_text(summary, &self.summary_csv())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> BenchConfig {
        BenchConfig {
            ladder: vec![Rung { label: "tiny".into(), n: 6, t_sim: 20.0 }],
            threads: vec![1, 2],
            mode: BenchMode::Steps(3),
            repetitions: 3,
            ..Default::default()
        }
    }

    #[test]
    fn sequential_rows_have_unit_speedup() {
        let report = run_benchmark(&tiny()).unwrap();
        assert_eq!(report.rows.len(), 9);
        for r in &report.rows {
            assert_eq!(r.steps, 3);
            assert_eq!(r.cells, 72);
            assert!(r.wall_s > 0.0);
            if r.backend == BackendKind::Sequential {
                assert_eq!(r.speedup, 1.0);
            }
        }
        assert_eq!(report.summary.len(), 3);
        assert!(report.summary.iter().all(|s| s.runs == 3 && s.std_dev.is_finite()));
        assert_eq!(report.rows_csv().lines().count(), 10);
    }

    #[test]
    fn sim_time_mode_equal_steps() {
        let mut cfg = tiny();
        cfg.mode = BenchMode::SimTime;
        let report = run_benchmark(&cfg).unwrap();
        let steps = report.rows[0].steps;
        assert!(steps > 0);
        assert!(report.rows.iter().all(|r| r.steps == steps));
    }

    #[test]
    fn oversized_rung_skipped() {
        let mut cfg = tiny();
        cfg.memory_limit = Some(1000);
        let report = run_benchmark(&cfg).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.rows.iter().all(|r| r.skipped.is_some()));
        assert!(report.summary.is_empty());
    }
}
