//! Explicit time loop over interchangeable backends.
//!
//! One step is a sequence of data-parallel passes with disjoint writes:
//!
//! 1. CFL reduction over cells (exact min, order independent)
//! 2. flux pass over edges, writing one [`EdgeFlux`] per edge
//! 3. gather pass over cells, summing the fluxes of the cell's three edges
//! 4. friction and dry clamping over cells
//! 5. mass reduction over fixed-size chunks, combined in chunk order
//!
//! Nothing is scattered, and every reduction either is exact or has an
//! association order fixed by [`CHUNK`], so in deterministic mode the
//! parallel backend reproduces the sequential trajectory bit for bit.

use std::ops::Range;
use std::time::Duration;
#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernels::{
    apply_friction, cell_time_bound, clamp_dry, finish_time_bound, interface_fluxes,
    wall_flux_relative, Conserved, Flux3, KernelError, PhysParams, TimeStepBound,
};
use crate::mesh::Mesh;

/// Work unit for chunked passes and the fixed summation order of reductions.
pub const CHUNK: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("flux evaluation failed at edge {edge}: {source}")]
    Edge { edge: usize, source: KernelError },
    #[error("numeric blowup at step {step}, cell {cell} (last dt {dt}): {detail}")]
    Blowup {
        step: u64,
        cell: usize,
        dt: f64,
        detail: String,
    },
    #[error("negative depth at step {step}, cell {cell}: {source}")]
    Positivity {
        step: u64,
        cell: usize,
        source: KernelError,
    },
    #[error("state has {got} cells, mesh has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("invalid initial state in cell {cell}: {reason}")]
    InvalidState { cell: usize, reason: String },
    #[error("simulation already reached t_end = {t_end}")]
    Finished { t_end: f64 },
    #[error("backend setup failed: {0}")]
    Backend(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    #[serde(alias = "seq")]
    Sequential,
    #[serde(alias = "par")]
    Parallel,
}

impl std::str::FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seq" | "sequential" => Ok(BackendKind::Sequential),
            "par" | "parallel" => Ok(BackendKind::Parallel),
            other => Err(format!("unknown backend '{other}' (expected seq or par)")),
        }
    }
}

impl std::fmt::Display for BackendKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BackendKind::Sequential => "sequential",
            BackendKind::Parallel => "parallel",
        })
    }
}

fn default_kind() -> BackendKind {
    BackendKind::Sequential
}
fn default_threads() -> usize {
    1
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendSpec {
    #[serde(default = "default_kind")]
    pub kind: BackendKind,
    #[serde(default = "default_threads")]
    pub threads: usize,
    /// Fixed-order reductions; parallel runs then match sequential bitwise.
    #[serde(default = "default_true")]
    pub deterministic: bool,
}

impl Default for BackendSpec {
    fn default() -> Self {
        BackendSpec {
            kind: BackendKind::Sequential,
            threads: 1,
            deterministic: true,
        }
    }
}

impl BackendSpec {
    pub fn sequential() -> Self {
        Self::default()
    }

    pub fn parallel(threads: usize) -> Self {
        BackendSpec {
            kind: BackendKind::Parallel,
            threads,
            deterministic: true,
        }
    }
}

/// An executor for the engine's passes.
pub struct Backend {
    spec: BackendSpec,
    pool: Option<rayon::ThreadPool>,
}

impl std::fmt::Debug for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Backend").field("spec", &self.spec).finish()
    }
}

impl Backend {
    pub fn new(spec: BackendSpec) -> Result<Self, EngineError> {
        if spec.threads == 0 {
            return Err(EngineError::Backend("thread count must be at least 1".into()));
        }
        let pool = match spec.kind {
            BackendKind::Sequential => None,
            BackendKind::Parallel => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(spec.threads)
                    .build()
                    .map_err(|e| EngineError::Backend(e.to_string()))?,
            ),
        };
        Ok(Backend { spec, pool })
    }

    pub fn sequential() -> Self {
        Backend {
            spec: BackendSpec::sequential(),
            pool: None,
        }
    }

    pub fn spec(&self) -> BackendSpec {
        self.spec
    }

    /// Applies `f` to consecutive [`CHUNK`]-sized pieces of `data`, returning
    /// per-chunk results in chunk order.
    fn map_chunks_mut<T, R, F>(&self, data: &mut [T], f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(usize, &mut [T]) -> R + Sync + Send,
    {
        match &self.pool {
            None => data
                .chunks_mut(CHUNK)
                .enumerate()
                .map(|(k, c)| f(k * CHUNK, c))
                .collect(),
            Some(pool) => pool.install(|| {
                data.par_chunks_mut(CHUNK)
                    .enumerate()
                    .map(|(k, c)| f(k * CHUNK, c))
                    .collect()
            }),
        }
    }

    /// Applies `f` to the index ranges of consecutive chunks of `0..n`.
    fn map_ranges<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(Range<usize>) -> R + Sync + Send,
    {
        let chunks = n.div_ceil(CHUNK);
        let range = |k: usize| k * CHUNK..((k + 1) * CHUNK).min(n);
        match &self.pool {
            None => (0..chunks).map(|k| f(range(k))).collect(),
            Some(pool) => pool.install(|| (0..chunks).into_par_iter().map(|k| f(range(k))).collect()),
        }
    }
}

/// Fluxes of one edge as applied to each adjacent cell, in the direction
/// of the edge normal. Boundary edges only use `left`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EdgeFlux {
    pub left: Flux3,
    pub right: Flux3,
}

impl EdgeFlux {
    /// Flux for the cell with incidence `sign`, in that cell's outward direction.
    #[inline]
    pub fn outward(&self, sign: f64) -> Flux3 {
        let f = if sign > 0.0 { &self.left } else { &self.right };
        Flux3::new(sign * f.mass, sign * f.momx, sign * f.momy)
    }
}

/// Conservation bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct MassLedger {
    pub initial: f64,
    /// Volume added by clipping round-off negative depths, m³.
    pub clipped_volume: f64,
    pub clip_events: u64,
}

/// Monotonic wall clock. Reads zero on wasm32, which has no `Instant`.
#[derive(Debug, Clone, Copy)]
struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] Instant);

impl Stopwatch {
    fn start() -> Self {
        #[cfg(not(target_arch = "wasm32"))]
        return Stopwatch(Instant::now());
        #[cfg(target_arch = "wasm32")]
        return Stopwatch();
    }

    fn elapsed(&self) -> Duration {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed();
        #[cfg(target_arch = "wasm32")]
        return Duration::ZERO;
    }
}

/// Double-buffered solution and clock.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub current: Vec<Conserved>,
    next: Vec<Conserved>,
    pub t: f64,
    pub step: u64,
    pub ledger: MassLedger,
    /// Total mass of `current`.
    pub mass: f64,
    /// Depth scale for the negative-depth tolerance.
    pub h_ref: f64,
}

impl SimulationState {
    pub fn new(mesh: &Mesh, initial: Vec<Conserved>) -> Result<Self, EngineError> {
        if initial.len() != mesh.num_cells() {
            return Err(EngineError::SizeMismatch {
                expected: mesh.num_cells(),
                got: initial.len(),
            });
        }
        for (i, u) in initial.iter().enumerate() {
            if !u.is_finite() {
                return Err(EngineError::InvalidState {
                    cell: i,
                    reason: "non-finite value".into(),
                });
            }
            if u.h < 0.0 {
                return Err(EngineError::InvalidState {
                    cell: i,
                    reason: format!("negative depth {}", u.h),
                });
            }
        }
        let h_max = initial.iter().map(|u| u.h).fold(0.0, f64::max);
        let mass = total_mass(&initial, mesh);
        Ok(SimulationState {
            next: initial.clone(),
            current: initial,
            t: 0.0,
            step: 0,
            ledger: MassLedger {
                initial: mass,
                ..Default::default()
            },
            mass,
            h_ref: if h_max > 0.0 { h_max } else { 1.0 },
        })
    }
}

fn chunk_mass(state: &[Conserved], mesh: &Mesh, range: Range<usize>) -> f64 {
    let mut s = 0.0;
    for i in range {
        s += state[i].h * mesh.cells[i].area;
    }
    s
}

/// Water volume `sum(h_i * area_i)`, summed per [`CHUNK`] and then across
/// chunks in order.
pub fn total_mass(state: &[Conserved], mesh: &Mesh) -> f64 {
    total_mass_with(state, mesh, &Backend::sequential())
}

pub fn total_mass_with(state: &[Conserved], mesh: &Mesh, backend: &Backend) -> f64 {
    if !backend.spec.deterministic {
        if let Some(pool) = &backend.pool {
            return pool.install(|| {
                state
                    .par_iter()
                    .zip(mesh.cells.par_iter())
                    .map(|(u, c)| u.h * c.area)
                    .sum()
            });
        }
    }
    backend
        .map_ranges(state.len(), |r| chunk_mass(state, mesh, r))
        .into_iter()
        .sum()
}

/// CFL bound computed on the backend; identical to
/// [`crate::kernels::stable_dt`].
pub fn stable_dt_with(
    state: &[Conserved],
    mesh: &Mesh,
    params: &PhysParams,
    backend: &Backend,
) -> Result<TimeStepBound, KernelError> {
    let partials = backend.map_ranges(state.len(), |r| {
        let mut min_ratio = f64::INFINITY;
        let mut max_speed = 0.0f64;
        for i in r {
            if let Some((ratio, speed)) = cell_time_bound(i, &state[i], mesh.cells[i].inradius, params)? {
                min_ratio = min_ratio.min(ratio);
                max_speed = max_speed.max(speed);
            }
        }
        Ok((min_ratio, max_speed))
    });
    let mut min_ratio = f64::INFINITY;
    let mut max_speed = 0.0f64;
    for p in partials {
        let (r, s) = p?;
        min_ratio = min_ratio.min(r);
        max_speed = max_speed.max(s);
    }
    Ok(finish_time_bound(min_ratio, max_speed, params))
}

/// Evaluates every edge flux into `out` (one entry per edge).
pub fn compute_fluxes_into(
    state: &[Conserved],
    mesh: &Mesh,
    params: &PhysParams,
    backend: &Backend,
    out: &mut [EdgeFlux],
) -> Result<(), EngineError> {
    if state.len() != mesh.num_cells() {
        return Err(EngineError::SizeMismatch {
            expected: mesh.num_cells(),
            got: state.len(),
        });
    }
    assert_eq!(out.len(), mesh.num_edges(), "flux buffer sized to edge count");
    let errors = backend.map_chunks_mut(out, |start, chunk| {
        for (k, slot) in chunk.iter_mut().enumerate() {
            let id = start + k;
            let e = &mesh.edges[id];
            let ul = &state[e.left];
            if e.is_boundary() {
                *slot = EdgeFlux {
                    left: wall_flux_relative(ul, e.normal, params),
                    right: Flux3::ZERO,
                };
            } else {
                let ur = &state[e.right];
                let zl = mesh.cells[e.left].bathymetry;
                let zr = mesh.cells[e.right].bathymetry;
                match interface_fluxes(ul, zl, ur, zr, e.normal, params) {
                    Ok((left, right)) => *slot = EdgeFlux { left, right },
                    Err(source) => return Some(EngineError::Edge { edge: id, source }),
                }
            }
        }
        None
    });
    match errors.into_iter().flatten().next() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

pub fn compute_fluxes(
    state: &[Conserved],
    mesh: &Mesh,
    params: &PhysParams,
    backend: &Backend,
) -> Result<Vec<EdgeFlux>, EngineError> {
    let mut out = vec![EdgeFlux::default(); mesh.num_edges()];
    compute_fluxes_into(state, mesh, params, backend, &mut out)?;
    Ok(out)
}

/// Per-step report.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepStats {
    pub step: u64,
    /// Clock after the step.
    pub t: f64,
    pub dt: f64,
    pub max_speed: f64,
    pub mass: f64,
    /// Change in total mass over this step.
    pub mass_delta: f64,
    /// `(mass - initial) / initial`, zero for an empty basin.
    pub mass_drift: f64,
    pub clip_events: u64,
    pub wall_dt: Duration,
    pub wall_flux: Duration,
    pub wall_update: Duration,
    pub wall_friction: Duration,
}

#[derive(Default)]
struct CellOutcome {
    clipped: f64,
    clip_events: u64,
    error: Option<EngineError>,
}

/// Advances `sim` by one explicit step, truncated so that it never passes
/// `t_end`. `fluxes` is scratch space, resized as needed.
pub fn advance_step(
    sim: &mut SimulationState,
    mesh: &Mesh,
    params: &PhysParams,
    backend: &Backend,
    t_end: f64,
    fluxes: &mut Vec<EdgeFlux>,
) -> Result<StepStats, EngineError> {
    let remaining = t_end - sim.t;
    if !(remaining > 0.0) {
        return Err(EngineError::Finished { t_end });
    }
    let step = sim.step + 1;
    fluxes.resize(mesh.num_edges(), EdgeFlux::default());

    let clock = Stopwatch::start();
    let bound = stable_dt_with(&sim.current, mesh, params, backend).map_err(|e| match e {
        KernelError::NonFinite { cell, .. } => EngineError::Blowup {
            step,
            cell,
            dt: 0.0,
            detail: e.to_string(),
        },
        other => EngineError::Backend(other.to_string()),
    })?;
    let last = bound.dt >= remaining;
    let dt = if last { remaining } else { bound.dt };
    let wall_dt = clock.elapsed();

    let clock = Stopwatch::start();
    compute_fluxes_into(&sim.current, mesh, params, backend, fluxes)?;
    let wall_flux = clock.elapsed();

    let clock = Stopwatch::start();
    {
        let current = &sim.current;
        let fluxes = &*fluxes;
        backend.map_chunks_mut(&mut sim.next, |start, chunk| {
            for (k, slot) in chunk.iter_mut().enumerate() {
                let i = start + k;
                let cell = &mesh.cells[i];
                let mut acc = Flux3::ZERO;
                for inc in &cell.edges {
                    let f = fluxes[inc.edge].outward(inc.sign);
                    let l = mesh.edges[inc.edge].length;
                    acc.mass += f.mass * l;
                    acc.momx += f.momx * l;
                    acc.momy += f.momy * l;
                }
                let k = dt / cell.area;
                let u = &current[i];
                *slot = Conserved::new(u.h - k * acc.mass, u.qx - k * acc.momx, u.qy - k * acc.momy);
            }
        });
    }
    let wall_update = clock.elapsed();

    let clock = Stopwatch::start();
    let h_ref = sim.h_ref;
    let outcomes = backend.map_chunks_mut(&mut sim.next, |start, chunk| {
        let mut out = CellOutcome::default();
        for (k, slot) in chunk.iter_mut().enumerate() {
            let i = start + k;
            if !slot.is_finite() {
                out.error = Some(EngineError::Blowup {
                    step,
                    cell: i,
                    dt,
                    detail: format!("h={}, qx={}, qy={}", slot.h, slot.qx, slot.qy),
                });
                return out;
            }
            let after_friction = apply_friction(slot, mesh.cells[i].manning, dt, params);
            match clamp_dry(&after_friction, params, h_ref) {
                Ok(c) => {
                    if c.clipped > 0.0 {
                        out.clipped += c.clipped * mesh.cells[i].area;
                        out.clip_events += 1;
                    }
                    *slot = c.state;
                }
                Err(source) => {
                    out.error = Some(EngineError::Positivity { step, cell: i, source });
                    return out;
                }
            }
        }
        out
    });
    let wall_friction = clock.elapsed();

    let mut clipped = 0.0;
    let mut clip_events = 0;
    for o in outcomes {
        if let Some(e) = o.error {
            return Err(e);
        }
        clipped += o.clipped;
        clip_events += o.clip_events;
    }

    std::mem::swap(&mut sim.current, &mut sim.next);
    sim.t = if last { t_end } else { sim.t + dt };
    sim.step = step;
    sim.ledger.clipped_volume += clipped;
    sim.ledger.clip_events += clip_events;

    let mass = total_mass_with(&sim.current, mesh, backend);
    let previous_mass = std::mem::replace(&mut sim.mass, mass);
    let initial = sim.ledger.initial;
    Ok(StepStats {
        step,
        t: sim.t,
        dt,
        max_speed: bound.max_speed,
        mass,
        mass_delta: mass - previous_mass,
        mass_drift: if initial > 0.0 { (mass - initial) / initial } else { 0.0 },
        clip_events,
        wall_dt,
        wall_flux,
        wall_update,
        wall_friction,
    })
}

/// Run-level summary.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunStats {
    pub steps: u64,
    pub t_final: f64,
    pub wall_total: Duration,
    pub wall_dt: Duration,
    pub wall_flux: Duration,
    pub wall_update: Duration,
    pub wall_friction: Duration,
    pub mass_initial: f64,
    pub mass_final: f64,
    pub mass_drift: f64,
    pub max_abs_mass_drift: f64,
    pub clipped_volume: f64,
    pub clip_events: u64,
    pub min_dt: f64,
    pub mean_dt: f64,
    pub min_depth: f64,
}

impl RunStats {
    fn accumulate(&mut self, s: &StepStats) {
        self.steps += 1;
        self.t_final = s.t;
        self.wall_dt += s.wall_dt;
        self.wall_flux += s.wall_flux;
        self.wall_update += s.wall_update;
        self.wall_friction += s.wall_friction;
        self.mass_final = s.mass;
        self.mass_drift = s.mass_drift;
        self.max_abs_mass_drift = self.max_abs_mass_drift.max(s.mass_drift.abs());
        self.clip_events += s.clip_events;
        self.min_dt = if self.steps == 1 { s.dt } else { self.min_dt.min(s.dt) };
        // running mean keeps the value independent of run length bookkeeping
        self.mean_dt += (s.dt - self.mean_dt) / self.steps as f64;
    }

    /// Wall time of the solver phases only.
    pub fn wall_compute(&self) -> Duration {
        self.wall_dt + self.wall_flux + self.wall_update + self.wall_friction
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub stats: RunStats,
    pub error: EngineError,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} (after {} completed steps, t = {})",
            self.error, self.stats.steps, self.stats.t_final
        )
    }
}

impl std::error::Error for RunFailure {}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub t_end: f64,
    /// Emit a snapshot whenever the clock crosses a multiple of this interval.
    pub snapshot_interval: Option<f64>,
    /// Stop after this many steps even if `t_end` is not reached.
    pub max_steps: Option<u64>,
}

/// Notifications from [`Solver::run`]. Snapshots are the only place the
/// state leaves the solver mid-run.
pub enum RunEvent<'a> {
    Step(&'a StepStats),
    Snapshot {
        index: usize,
        t: f64,
        step: u64,
        state: &'a [Conserved],
    },
}

/// A mesh, its parameters and a resident solution.
pub struct Solver<'m> {
    mesh: &'m Mesh,
    params: PhysParams,
    backend: Backend,
    sim: SimulationState,
    fluxes: Vec<EdgeFlux>,
}

impl<'m> Solver<'m> {
    pub fn new(
        mesh: &'m Mesh,
        params: PhysParams,
        backend: Backend,
        initial: Vec<Conserved>,
    ) -> Result<Self, EngineError> {
        params.validate().map_err(EngineError::Backend)?;
        let sim = SimulationState::new(mesh, initial)?;
        Ok(Solver {
            mesh,
            params,
            backend,
            sim,
            fluxes: vec![EdgeFlux::default(); mesh.num_edges()],
        })
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn state(&self) -> &[Conserved] {
        &self.sim.current
    }

    pub fn simulation(&self) -> &SimulationState {
        &self.sim
    }

    pub fn time(&self) -> f64 {
        self.sim.t
    }

    pub fn steps(&self) -> u64 {
        self.sim.step
    }

    pub fn mass(&self) -> f64 {
        self.sim.mass
    }

    pub fn step(&mut self, t_end: f64) -> Result<StepStats, EngineError> {
        advance_step(
            &mut self.sim,
            self.mesh,
            &self.params,
            &self.backend,
            t_end,
            &mut self.fluxes,
        )
    }

    /// Steps until `t_end` (or `max_steps`), reporting through `observer`.
    pub fn run(
        &mut self,
        options: &RunOptions,
        mut observer: impl FnMut(RunEvent<'_>),
    ) -> Result<RunStats, RunFailure> {
        let started = Stopwatch::start();
        let mut stats = RunStats {
            mass_initial: self.sim.ledger.initial,
            mass_final: self.mass(),
            t_final: self.sim.t,
            ..Default::default()
        };
        let mut snapshot_index = 0;
        let mut next_snapshot = options.snapshot_interval.map(|_| self.sim.t);
        let mut min_depth = min_depth(&self.sim.current);

        let emit_snapshot = |index: &mut usize, sim: &SimulationState, observer: &mut dyn FnMut(RunEvent<'_>)| {
            observer(RunEvent::Snapshot {
                index: *index,
                t: sim.t,
                step: sim.step,
                state: &sim.current,
            });
            *index += 1;
        };

        if next_snapshot.is_some() {
            emit_snapshot(&mut snapshot_index, &self.sim, &mut observer);
            next_snapshot = options.snapshot_interval.map(|dt| self.sim.t + dt);
        }

        while self.sim.t < options.t_end && options.max_steps.is_none_or(|m| stats.steps < m) {
            match self.step(options.t_end) {
                Ok(s) => {
                    stats.accumulate(&s);
                    min_depth = min_depth.min(self::min_depth(&self.sim.current));
                    observer(RunEvent::Step(&s));
                    if let (Some(at), Some(every)) = (next_snapshot, options.snapshot_interval) {
                        if self.sim.t >= at || self.sim.t >= options.t_end {
                            emit_snapshot(&mut snapshot_index, &self.sim, &mut observer);
                            let mut at = at;
                            while at <= self.sim.t {
                                at += every;
                            }
                            next_snapshot = Some(at);
                        }
                    }
                }
                Err(error) => {
                    stats.wall_total = started.elapsed();
                    stats.clipped_volume = self.sim.ledger.clipped_volume;
                    stats.min_depth = min_depth;
                    return Err(RunFailure { stats, error });
                }
            }
        }
        stats.wall_total = started.elapsed();
        stats.clipped_volume = self.sim.ledger.clipped_volume;
        stats.min_depth = min_depth;
        Ok(stats)
    }
}

fn min_depth(state: &[Conserved]) -> f64 {
    state.iter().map(|u| u.h).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_mesh, generate_square_mesh};

    fn square(nx: usize, ny: usize, lx: f64, ly: f64) -> Mesh {
        let raw = generate_square_mesh(nx, ny, lx, ly).unwrap();
        let z = vec![0.0; raw.triangles.len()];
        build_mesh(&raw, &z, &z).unwrap()
    }

    #[test]
    fn unit_depth_unit_square_mass() {
        let mesh = square(3, 3, 1.0, 1.0);
        let state = vec![Conserved::new(1.0, 0.0, 0.0); mesh.num_cells()];
        assert!((total_mass(&state, &mesh) - 1.0).abs() < 1e-15);
        let dry = vec![Conserved::DRY; mesh.num_cells()];
        assert_eq!(total_mass(&dry, &mesh), 0.0);
    }

    #[test]
    fn still_water_is_steady() {
        let mesh = square(4, 4, 2.0, 2.0);
        let initial = vec![Conserved::new(0.8, 0.0, 0.0); mesh.num_cells()];
        let mut solver = Solver::new(&mesh, PhysParams::default(), Backend::sequential(), initial.clone()).unwrap();
        solver.step(10.0).unwrap();
        assert_eq!(solver.state(), &initial[..]);
    }

    #[test]
    fn short_run_lands_on_t_end() {
        let mesh = square(4, 4, 2.0, 2.0);
        let initial = vec![Conserved::new(0.8, 0.1, 0.0); mesh.num_cells()];
        let mut solver = Solver::new(&mesh, PhysParams::default(), Backend::sequential(), initial).unwrap();
        let stats = solver
            .run(
                &RunOptions {
                    t_end: 1e-6,
                    ..Default::default()
                },
                |_| {},
            )
            .unwrap();
        assert_eq!(stats.steps, 1);
        assert_eq!(solver.time(), 1e-6);
        assert!(matches!(solver.step(1e-6), Err(EngineError::Finished { .. })));
    }

    #[test]
    fn size_mismatch_rejected() {
        let mesh = square(1, 1, 1.0, 1.0);
        assert!(matches!(
            SimulationState::new(&mesh, vec![Conserved::DRY]),
            Err(EngineError::SizeMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn blowup_is_reported_with_cell() {
        let mesh = square(2, 1, 2.0, 1.0);
        let mut sim = SimulationState::new(&mesh, vec![Conserved::new(1.0, 0.0, 0.0); 4]).unwrap();
        sim.current[2].qx = f64::INFINITY;
        let err = advance_step(&mut sim, &mesh, &PhysParams::default(), &Backend::sequential(), 1.0, &mut Vec::new())
            .unwrap_err();
        assert!(matches!(err, EngineError::Blowup { cell: 2, step: 1, .. }), "{err}");
    }

    #[test]
    fn zero_threads_rejected() {
        assert!(Backend::new(BackendSpec {
            kind: BackendKind::Parallel,
            threads: 0,
            deterministic: true
        })
        .is_err());
    }

    #[test]
    fn backend_kind_parses_short_names() {
        assert_eq!("seq".parse::<BackendKind>().unwrap(), BackendKind::Sequential);
        assert_eq!("par".parse::<BackendKind>().unwrap(), BackendKind::Parallel);
        assert!("gpu".parse::<BackendKind>().is_err());
    }
}
