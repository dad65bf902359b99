//! Browser bindings for the solver: an interactive 2D simulation, the
//! single-interface HLLC flux and the Stoker dam-break profile.
//!
//! Each exported method has a plain Rust counterpart returning
//! `Result<_, String>` so it can be tested natively.

use swfv::cases::{prepare, stoker_exact, CaseSpec, DamBreak, LakeAtRest, ThreeMounds, WaterDrop};
use swfv::engine::{advance_step, Backend, EdgeFlux, SimulationState};
use swfv::kernels::{hllc_flux, wave_speed_estimates};
use swfv::{generate_square_mesh, Conserved, Mesh, PhysParams};
use wasm_bindgen::prelude::*;

fn js(e: String) -> JsError {
    JsError::new(&e)
}

pub fn case_by_name(name: &str) -> Result<CaseSpec, String> {
    match name {
        "water_drop" => Ok(CaseSpec::WaterDrop(WaterDrop::default())),
        "three_mounds" => Ok(CaseSpec::ThreeMounds(ThreeMounds::default())),
        "lake_at_rest" => Ok(CaseSpec::LakeAtRest(LakeAtRest::default())),
        "dam_break_1d" => Ok(CaseSpec::DamBreak(DamBreak::default())),
        other => Err(format!(
            "unknown case '{other}' (water_drop, three_mounds, lake_at_rest, dam_break_1d)"
        )),
    }
}

/// A resident simulation on a generated grid, stepped sequentially.
#[wasm_bindgen]
pub struct WebSimulation {
    mesh: Mesh,
    params: PhysParams,
    backend: Backend,
    sim: SimulationState,
    fluxes: Vec<EdgeFlux>,
    t_end: f64,
}

impl WebSimulation {
    pub fn create(case: &str, nx: usize, ny: usize) -> Result<Self, String> {
        let spec = case_by_name(case)?;
        let [lx, ly] = spec.extent();
        let raw = generate_square_mesh(nx, ny, lx, ly).map_err(|e| e.to_string())?;
        let (mesh, initial) = prepare(&spec, &raw).map_err(|e| e.to_string())?;
        let sim = SimulationState::new(&mesh, initial).map_err(|e| e.to_string())?;
        Ok(WebSimulation {
            fluxes: vec![EdgeFlux::default(); mesh.num_edges()],
            mesh,
            params: PhysParams::default(),
            backend: Backend::sequential(),
            sim,
            t_end: spec.t_end(),
        })
    }

    /// Advances up to `steps` steps, stopping at the case end time.
    pub fn advance(&mut self, steps: u32) -> Result<f64, String> {
        for _ in 0..steps {
            if self.sim.t >= self.t_end {
                break;
            }
            advance_step(
                &mut self.sim,
                &self.mesh,
                &self.params,
                &self.backend,
                self.t_end,
                &mut self.fluxes,
            )
            .map_err(|e| e.to_string())?;
        }
        Ok(self.sim.t)
    }

    /// Raises the surface by a Gaussian bump centered at `(x, y)`.
    /// The mass reference is reset so drift is measured from here on.
    pub fn drop_water(&mut self, x: f64, y: f64, amplitude: f64, radius: f64) -> Result<(), String> {
        if !(amplitude >= 0.0 && amplitude.is_finite() && radius > 0.0 && radius.is_finite()) {
            return Err(format!("invalid drop: amplitude {amplitude}, radius {radius}"));
        }
        let mut state = self.sim.current.clone();
        for (u, cell) in state.iter_mut().zip(&self.mesh.cells) {
            let r2 = (cell.centroid[0] - x).powi(2) + (cell.centroid[1] - y).powi(2);
            u.h += amplitude * (-r2 / (2.0 * radius * radius)).exp();
        }
        let (t, step) = (self.sim.t, self.sim.step);
        self.sim = SimulationState::new(&self.mesh, state).map_err(|e| e.to_string())?;
        self.sim.t = t;
        self.sim.step = step;
        self.t_end = f64::INFINITY;
        Ok(())
    }

    pub fn state(&self) -> &[Conserved] {
        &self.sim.current
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }
}

#[wasm_bindgen]
impl WebSimulation {
    /// `case` is one of `water_drop`, `three_mounds`, `lake_at_rest`,
    /// `dam_break_1d`.
    #[wasm_bindgen(constructor)]
    pub fn new(case: &str, nx: usize, ny: usize) -> Result<WebSimulation, JsError> {
        Self::create(case, nx, ny).map_err(js)
    }

    pub fn step(&mut self, steps: u32) -> Result<f64, JsError> {
        self.advance(steps).map_err(js)
    }

    #[wasm_bindgen(js_name = dropWater)]
    pub fn drop_water_js(&mut self, x: f64, y: f64, amplitude: f64, radius: f64) -> Result<(), JsError> {
        self.drop_water(x, y, amplitude, radius).map_err(js)
    }

    /// Node coordinates, interleaved `x0 y0 x1 y1 ...`.
    pub fn nodes(&self) -> Vec<f64> {
        self.mesh.nodes.iter().flat_map(|p| [p[0], p[1]]).collect()
    }

    /// Counter-clockwise node triples, flattened.
    pub fn triangles(&self) -> Vec<u32> {
        self.mesh
            .cells
            .iter()
            .flat_map(|c| c.nodes.map(|n| n as u32))
            .collect()
    }

    pub fn depth(&self) -> Vec<f64> {
        self.sim.current.iter().map(|u| u.h).collect()
    }

    /// Free-surface elevation `h + z`.
    pub fn surface(&self) -> Vec<f64> {
        self.sim
            .current
            .iter()
            .zip(&self.mesh.cells)
            .map(|(u, c)| u.h + c.bathymetry)
            .collect()
    }

    pub fn bed(&self) -> Vec<f64> {
        self.mesh.bathymetry()
    }

    pub fn speed(&self) -> Vec<f64> {
        self.sim
            .current
            .iter()
            .map(|u| {
                let (vx, vy) = u.velocity(self.params.h_dry);
                vx.hypot(vy)
            })
            .collect()
    }

    pub fn time(&self) -> f64 {
        self.sim.t
    }

    pub fn steps(&self) -> f64 {
        self.sim.step as f64
    }

    pub fn mass(&self) -> f64 {
        self.sim.mass
    }

    #[wasm_bindgen(js_name = massDrift)]
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.sim.ledger.initial;
        if m0 > 0.0 {
            (self.sim.mass - m0) / m0
        } else {
            0.0
        }
    }

    pub fn cells(&self) -> usize {
        self.mesh.num_cells()
    }

    /// `[xmin, ymin, xmax, ymax]`.
    pub fn bounds(&self) -> Vec<f64> {
        let (lo, hi) = self.mesh.bounding_box();
        vec![lo[0], lo[1], hi[0], hi[1]]
    }
}

/// `[mass flux, momentum flux, SL, S*, SR]` across a single interface with
/// normal `+x`.
pub fn interface_flux(hl: f64, ul: f64, hr: f64, ur: f64) -> Result<Vec<f64>, String> {
    if !(hl >= 0.0 && hr >= 0.0) || ![hl, ul, hr, ur].iter().all(|v| v.is_finite()) {
        return Err("depths must be non-negative and all inputs finite".into());
    }
    let p = PhysParams::default();
    let f = hllc_flux(
        &Conserved::from_velocity(hl, ul, 0.0),
        &Conserved::from_velocity(hr, ur, 0.0),
        [1.0, 0.0],
        &p,
    )
    .map_err(|e| e.to_string())?;
    let ws = wave_speed_estimates(hl, ul, hr, ur, &p);
    Ok(vec![f.mass, f.momx, ws.left, ws.star, ws.right])
}

#[wasm_bindgen(js_name = hllcFlux)]
pub fn hllc_flux_js(hl: f64, ul: f64, hr: f64, ur: f64) -> Result<Vec<f64>, JsError> {
    interface_flux(hl, ul, hr, ur).map_err(js)
}

/// Exact depth of the wet-bed dam break on `[0, length]` with the dam at
/// mid-length, sampled at `samples` evenly spaced points. Returns
/// interleaved `x h u`.
pub fn stoker_samples(hl: f64, hr: f64, t: f64, length: f64, samples: usize) -> Result<Vec<f64>, String> {
    if samples < 2 || !(length > 0.0) {
        return Err("need at least 2 samples on a positive length".into());
    }
    let x_dam = 0.5 * length;
    let mut out = Vec::with_capacity(3 * samples);
    for i in 0..samples {
        let x = length * i as f64 / (samples - 1) as f64;
        let (h, u) = stoker_exact(hl, hr, x, t, x_dam, PhysParams::default().g).map_err(|e| e.to_string())?;
        out.extend([x, h, u]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = stokerProfile)]
pub fn stoker_profile_js(hl: f64, hr: f64, t: f64, length: f64, samples: usize) -> Result<Vec<f64>, JsError> {
    stoker_samples(hl, hr, t, length, samples).map_err(js)
}
