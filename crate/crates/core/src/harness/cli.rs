use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand};

use super::{
    convergence_study, default_ladder, run_benchmark, run_config, write_convergence_csv, BenchConfig, BenchMode,
    HarnessError,
};
use crate::cases::DamBreak;
use crate::engine::{BackendKind, BackendSpec};
use crate::io::{parse_config, read_mesh_file, write_mesh_file, IoError, Overrides};
use crate::kernels::PhysParams;
use crate::mesh::{build_mesh, diagnose_raw, generate_square_mesh, mesh_diagnostics};

#[derive(Debug, Parser)]
#[command(name = "swfv", version, about = "Shallow water finite-volume solver on triangular meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a simulation described by a JSON configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_parser = parse_backend)]
        backend: Option<BackendKind>,
        #[arg(long = "t-end")]
        t_end: Option<f64>,
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
    },
    /// Benchmark the grid ladder across backends and thread counts.
    Bench {
        /// Timed steps per run (fixed-step mode).
        #[arg(long, default_value_t = 50, conflicts_with = "sim_time")]
        steps: u64,
        /// Run every rung to its own simulated end time instead.
        #[arg(long = "sim-time")]
        sim_time: bool,
        /// Parallel thread counts, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        threads: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
        /// Add the ~1M and ~10M cell rungs.
        #[arg(long)]
        large: bool,
        #[arg(long = "out-dir", default_value = "bench")]
        out_dir: PathBuf,
    },
    /// Dam-break convergence study against the Stoker solution.
    Converge {
        /// Resolutions as NXxNY, comma separated.
        #[arg(long, value_delimiter = ',', value_parser = parse_resolution,
              default_value = "200x5,400x10,800x20")]
        resolutions: Vec<(usize, usize)>,
        #[arg(long = "t-eval", default_value_t = 6.0)]
        t_eval: f64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(short, long, default_value = "convergence.csv")]
        out: PathBuf,
    },
    /// Write a structured grid of a rectangle in SWEMESH format.
    Meshgen {
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        #[arg(long)]
        lx: f64,
        #[arg(long)]
        ly: f64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Print mesh diagnostics.
    Validate {
        #[arg(long)]
        mesh: PathBuf,
    },
}

fn parse_backend(s: &str) -> Result<BackendKind, String> {
    s.parse()
}

fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once('x')
        .ok_or_else(|| format!("expected NXxNY, got '{s}'"))?;
    let nx = a.parse().map_err(|_| format!("bad nx in '{s}'"))?;
    let ny = b.parse().map_err(|_| format!("bad ny in '{s}'"))?;
    Ok((nx, ny))
}

/// Parses `argv` (program name first) and executes the subcommand.
/// Returns 0 on success, 2 on usage errors and 1 on runtime failures.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return 0;
            }
            let text = e.render().to_string();
            eprint!("{text}");
            if !text.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return 2;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn read_text(path: &Path) -> Result<String, HarnessError> {
    fs::read_to_string(path).map_err(|e| IoError::io(path, e).into())
}

fn execute(command: Command) -> Result<i32, HarnessError> {
    match command {
        Command::Run {
            config,
            threads,
            backend,
            t_end,
            out_dir,
        } => {
            let text = read_text(&config)?;
            let overrides = Overrides {
                threads,
                backend,
                t_end,
                out_dir,
            };
            let mut cfg = parse_config(&text, &overrides)?;
            if let Some(base) = config.parent() {
                cfg.resolve_paths(base);
            }
            let summary = run_config(&cfg)?;
            let s = &summary.stats;
            println!("case: {}", cfg.case.name());
            println!("cells: {} edges: {}", summary.cells, summary.edges);
            println!("backend: {} threads: {}", cfg.backend.kind, cfg.backend.threads);
            println!("steps: {} t_final: {}", s.steps, s.t_final);
            println!("mass drift: {:.3e} (max {:.3e})", s.mass_drift, s.max_abs_mass_drift);
            println!("clip events: {} min depth: {:.3e}", s.clip_events, s.min_depth);
            println!(
                "wall: {:.3} s ({:.3e} cell-steps/s)",
                s.wall_total.as_secs_f64(),
                summary.cells as f64 * s.steps as f64 / s.wall_compute().as_secs_f64().max(1e-12)
            );
            println!("stats: {}", summary.stats_path.display());
            println!("config echo: {}", summary.echo_path.display());
            if summary.snapshots > 0 {
                println!("snapshots: {}", summary.snapshots);
            }
            Ok(0)
        }
        Command::Bench {
            steps,
            sim_time,
            threads,
            repetitions,
            large,
            out_dir,
        } => {
            let cfg = BenchConfig {
                ladder: default_ladder(large),
                threads,
                mode: if sim_time { BenchMode::SimTime } else { BenchMode::Steps(steps) },
                repetitions,
                params: PhysParams::default(),
                memory_limit: None,
            };
            let report = run_benchmark(&cfg)?;
            fs::create_dir_all(&out_dir).map_err(|e| IoError::io(&out_dir, e))?;
            let rows = out_dir.join("bench_runs.csv");
            let summary = out_dir.join("bench_summary.csv");
            report.write_csv(&rows, &summary)?;
            print!("{}", report.summary_csv());
            for r in report.rows.iter().filter(|r| r.skipped.is_some()) {
                println!("skipped {} {} x{}: {}", r.label, r.backend, r.threads, r.skipped.as_deref().unwrap_or(""));
            }
            println!("rows: {}", rows.display());
            println!("summary: {}", summary.display());
            Ok(0)
        }
        Command::Converge {
            resolutions,
            t_eval,
            threads,
            out,
        } => {
            if resolutions.len() < 3 {
                return Err(HarnessError::Invalid("convergence needs at least 3 resolutions".into()));
            }
            let backend = if threads > 1 {
                BackendSpec::parallel(threads)
            } else {
                BackendSpec::sequential()
            };
            let rows = convergence_study(&DamBreak::default(), &resolutions, t_eval, &PhysParams::default(), backend)?;
            write_convergence_csv(&out, &rows)?;
            println!("nx,ny,cells,l1_error,ratio,order,monotone");
            for r in &rows {
                println!(
                    "{},{},{},{:.6e},{},{},{}",
                    r.nx,
                    r.ny,
                    r.cells,
                    r.l1_error,
                    r.ratio.map(|v| format!("{v:.4}")).unwrap_or_default(),
                    r.order.map(|v| format!("{v:.4}")).unwrap_or_default(),
                    r.monotone
                );
            }
            if rows.iter().any(|r| !r.monotone) {
                println!("warning: error does not decrease monotonically");
            }
            println!("table: {}", out.display());
            Ok(0)
        }
        Command::Meshgen { nx, ny, lx, ly, out } => {
            let raw = generate_square_mesh(nx, ny, lx, ly)?;
            let zeros = vec![0.0; raw.triangles.len()];
            if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| IoError::io(parent, e))?;
            }
            write_mesh_file(&out, &raw, &zeros, &zeros)?;
            println!("wrote {} nodes, {} cells to {}", raw.nodes.len(), raw.triangles.len(), out.display());
            Ok(0)
        }
        Command::Validate { mesh } => {
            let native = read_mesh_file(&mesh)?;
            let report = match build_mesh(&native.raw, &native.bathymetry, &native.manning) {
                Ok(m) => mesh_diagnostics(&m),
                Err(_) => diagnose_raw(&native.raw),
            };
            print!("{report}");
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}
