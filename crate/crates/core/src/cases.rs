//! Initial conditions for the verification and benchmark scenarios, and the
//! Stoker wet-bed dam-break solution.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernels::Conserved;
use crate::mesh::{build_mesh, Mesh, MeshError, RawMesh};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CaseError {
    #[error("invalid case parameter: {0}")]
    Parameter(String),
    #[error("mesh bounding box {lo:?}..{hi:?} does not cover the case domain [0, {lx}] x [0, {ly}]")]
    Domain {
        lo: [f64; 2],
        hi: [f64; 2],
        lx: f64,
        ly: f64,
    },
    #[error("cell {cell}: declared wet but free surface {eta} lies below bed {z}")]
    BelowBed { cell: usize, eta: f64, z: f64 },
    #[error("Stoker root search did not converge (hl={hl}, hr={hr})")]
    NoConvergence { hl: f64, hr: f64 },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Gaussian hump of water at rest in a square basin with walls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaterDrop {
    #[serde(default = "WaterDrop::default_extent")]
    pub lx: f64,
    #[serde(default = "WaterDrop::default_extent")]
    pub ly: f64,
    /// Base free-surface level, m.
    #[serde(default = "one")]
    pub eta0: f64,
    /// Gaussian amplitude, m.
    #[serde(default = "WaterDrop::default_amplitude")]
    pub amplitude: f64,
    /// Gaussian width, m.
    #[serde(default = "WaterDrop::default_sigma")]
    pub sigma: f64,
    #[serde(default)]
    pub manning: f64,
    #[serde(default = "WaterDrop::default_t_end")]
    pub t_end: f64,
}

impl WaterDrop {
    fn default_extent() -> f64 {
        1000.0
    }
    fn default_amplitude() -> f64 {
        0.5
    }
    fn default_sigma() -> f64 {
        50.0
    }
    fn default_t_end() -> f64 {
        2400.0
    }
}

impl Default for WaterDrop {
    fn default() -> Self {
        WaterDrop {
            lx: 1000.0,
            ly: 1000.0,
            eta0: 1.0,
            amplitude: 0.5,
            sigma: 50.0,
            manning: 0.0,
            t_end: 2400.0,
        }
    }
}

/// Dam break over three conical mounds in a 75 m x 30 m channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreeMounds {
    /// Depth of the reservoir behind the dam, m.
    #[serde(default = "ThreeMounds::default_h_dam")]
    pub h_dam: f64,
    #[serde(default = "ThreeMounds::default_x_dam")]
    pub x_dam: f64,
    #[serde(default = "ThreeMounds::default_manning")]
    pub manning: f64,
    #[serde(default = "ThreeMounds::default_t_end")]
    pub t_end: f64,
}

impl ThreeMounds {
    fn default_h_dam() -> f64 {
        1.875
    }
    fn default_x_dam() -> f64 {
        16.0
    }
    fn default_manning() -> f64 {
        0.018
    }
    fn default_t_end() -> f64 {
        30.0
    }
}

impl Default for ThreeMounds {
    fn default() -> Self {
        ThreeMounds {
            h_dam: 1.875,
            x_dam: 16.0,
            manning: 0.018,
            t_end: 30.0,
        }
    }
}

/// Still water over the three-mound bed; mound tops above `eta0` stay dry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LakeAtRest {
    #[serde(default = "one")]
    pub eta0: f64,
    #[serde(default = "ThreeMounds::default_manning")]
    pub manning: f64,
    #[serde(default = "LakeAtRest::default_t_end")]
    pub t_end: f64,
}

impl LakeAtRest {
    fn default_t_end() -> f64 {
        10.0
    }
}

impl Default for LakeAtRest {
    fn default() -> Self {
        LakeAtRest {
            eta0: 1.0,
            manning: 0.018,
            t_end: 10.0,
        }
    }
}

/// Planar dam break on a flat frictionless bed: depth `h_left` for
/// `x < x_dam`, `h_right` beyond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DamBreak {
    #[serde(default = "DamBreak::default_lx")]
    pub lx: f64,
    #[serde(default = "DamBreak::default_ly")]
    pub ly: f64,
    #[serde(default = "one")]
    pub h_left: f64,
    #[serde(default = "DamBreak::default_h_right")]
    pub h_right: f64,
    #[serde(default = "DamBreak::default_x_dam")]
    pub x_dam: f64,
    #[serde(default = "DamBreak::default_t_end")]
    pub t_end: f64,
}

impl DamBreak {
    fn default_lx() -> f64 {
        100.0
    }
    fn default_ly() -> f64 {
        2.5
    }
    fn default_h_right() -> f64 {
        0.1
    }
    fn default_x_dam() -> f64 {
        50.0
    }
    fn default_t_end() -> f64 {
        6.0
    }
}

impl Default for DamBreak {
    fn default() -> Self {
        DamBreak {
            lx: 100.0,
            ly: 2.5,
            h_left: 1.0,
            h_right: 0.1,
            x_dam: 50.0,
            t_end: 6.0,
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CaseSpec {
    WaterDrop(WaterDrop),
    ThreeMounds(ThreeMounds),
    LakeAtRest(LakeAtRest),
    #[serde(rename = "dam_break_1d")]
    DamBreak(DamBreak),
}

pub const THREE_MOUNDS_EXTENT: [f64; 2] = [75.0, 30.0];

impl CaseSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CaseSpec::WaterDrop(_) => "water_drop",
            CaseSpec::ThreeMounds(_) => "three_mounds",
            CaseSpec::LakeAtRest(_) => "lake_at_rest",
            CaseSpec::DamBreak(_) => "dam_break_1d",
        }
    }

    pub fn t_end(&self) -> f64 {
        match self {
            CaseSpec::WaterDrop(c) => c.t_end,
            CaseSpec::ThreeMounds(c) => c.t_end,
            CaseSpec::LakeAtRest(c) => c.t_end,
            CaseSpec::DamBreak(c) => c.t_end,
        }
    }

    pub fn set_t_end(&mut self, t_end: f64) {
        match self {
            CaseSpec::WaterDrop(c) => c.t_end = t_end,
            CaseSpec::ThreeMounds(c) => c.t_end = t_end,
            CaseSpec::LakeAtRest(c) => c.t_end = t_end,
            CaseSpec::DamBreak(c) => c.t_end = t_end,
        }
    }

    /// Rectangle `[0, lx] x [0, ly]` the case is defined on.
    pub fn extent(&self) -> [f64; 2] {
        match self {
            CaseSpec::WaterDrop(c) => [c.lx, c.ly],
            CaseSpec::ThreeMounds(_) | CaseSpec::LakeAtRest(_) => THREE_MOUNDS_EXTENT,
            CaseSpec::DamBreak(c) => [c.lx, c.ly],
        }
    }

    /// Generator resolution used when a configuration names no mesh:
    /// roughly square cells, about 10k triangles.
    pub fn default_resolution(&self) -> (usize, usize) {
        let [lx, ly] = self.extent();
        let cells = 10_000.0f64;
        let nx = ((cells / 2.0) * lx / ly).sqrt().round().max(1.0);
        let ny = (nx * ly / lx).round().max(1.0);
        (nx as usize, ny as usize)
    }

    pub fn validate(&self) -> Result<(), CaseError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(CaseError::Parameter(format!("{name} must be positive, got {v}")))
            }
        };
        let non_negative = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(CaseError::Parameter(format!("{name} must be non-negative, got {v}")))
            }
        };
        positive("t_end", self.t_end())?;
        match self {
            CaseSpec::WaterDrop(c) => {
                positive("lx", c.lx)?;
                positive("ly", c.ly)?;
                positive("sigma", c.sigma)?;
                positive("eta0", c.eta0)?;
                non_negative("manning", c.manning)?;
                if !c.amplitude.is_finite() {
                    return Err(CaseError::Parameter("amplitude must be finite".into()));
                }
            }
            CaseSpec::ThreeMounds(c) => {
                positive("h_dam", c.h_dam)?;
                non_negative("manning", c.manning)?;
                if !(c.x_dam > 0.0 && c.x_dam < THREE_MOUNDS_EXTENT[0]) {
                    return Err(CaseError::Parameter(format!("x_dam must lie inside the channel, got {}", c.x_dam)));
                }
            }
            CaseSpec::LakeAtRest(c) => {
                non_negative("manning", c.manning)?;
                if !c.eta0.is_finite() {
                    return Err(CaseError::Parameter("eta0 must be finite".into()));
                }
            }
            CaseSpec::DamBreak(c) => {
                positive("lx", c.lx)?;
                positive("ly", c.ly)?;
                non_negative("h_right", c.h_right)?;
                if !(c.h_left > c.h_right) || !c.h_left.is_finite() {
                    return Err(CaseError::Parameter(format!(
                        "dam break requires h_left > h_right, got {} and {}",
                        c.h_left, c.h_right
                    )));
                }
                if !(c.x_dam > 0.0 && c.x_dam < c.lx) {
                    return Err(CaseError::Parameter(format!("x_dam must lie in (0, lx), got {}", c.x_dam)));
                }
            }
        }
        Ok(())
    }
}

/// Rounds a bed level to a multiple of 2^-20 m so that `eta - z` and
/// `h + z` are exact for the moderate magnitudes used here.
pub fn snap_bed(z: f64) -> f64 {
    const SCALE: f64 = (1u64 << 20) as f64;
    (z * SCALE).round() / SCALE
}

/// Three cones: height 1 m radius 8 m at (30, 6) and (30, 24), height 3 m
/// radius 10 m at (47.5, 15).
pub fn three_mound_bed(x: f64, y: f64) -> f64 {
    let cone = |cx: f64, cy: f64, height: f64, radius: f64| {
        let r = ((x - cx).powi(2) + (y - cy).powi(2)).sqrt();
        height * (1.0 - r / radius)
    };
    cone(30.0, 6.0, 1.0, 8.0)
        .max(cone(30.0, 24.0, 1.0, 8.0))
        .max(cone(47.5, 15.0, 3.0, 10.0))
        .max(0.0)
}

/// Per-cell fields of an initialized case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseInit {
    pub bathymetry: Vec<f64>,
    pub manning: Vec<f64>,
    pub state: Vec<Conserved>,
}

/// Evaluates bathymetry, roughness and the initial state at cell centroids.
pub fn init_case(spec: &CaseSpec, mesh: &Mesh) -> Result<CaseInit, CaseError> {
    spec.validate()?;
    let [lx, ly] = spec.extent();
    let (lo, hi) = mesh.bounding_box();
    let slack = 1e-9 * lx.max(ly);
    if lo[0] > slack || lo[1] > slack || hi[0] < lx - slack || hi[1] < ly - slack {
        return Err(CaseError::Domain { lo, hi, lx, ly });
    }

    let n = mesh.num_cells();
    let mut bathymetry = Vec::with_capacity(n);
    let mut manning = Vec::with_capacity(n);
    let mut state = Vec::with_capacity(n);
    for (i, cell) in mesh.cells.iter().enumerate() {
        let [x, y] = cell.centroid;
        let (z, rough, h) = match spec {
            CaseSpec::WaterDrop(c) => {
                let (xc, yc) = (0.5 * c.lx, 0.5 * c.ly);
                let r2 = (x - xc).powi(2) + (y - yc).powi(2);
                let eta = c.eta0 + c.amplitude * (-r2 / (2.0 * c.sigma * c.sigma)).exp();
                if eta < 0.0 {
                    return Err(CaseError::BelowBed { cell: i, eta, z: 0.0 });
                }
                (0.0, c.manning, eta)
            }
            CaseSpec::ThreeMounds(c) => {
                let z = snap_bed(three_mound_bed(x, y));
                let h = if x < c.x_dam {
                    if z > c.h_dam {
                        return Err(CaseError::BelowBed { cell: i, eta: c.h_dam, z });
                    }
                    c.h_dam - z
                } else {
                    0.0
                };
                (z, c.manning, h)
            }
            CaseSpec::LakeAtRest(c) => {
                let z = snap_bed(three_mound_bed(x, y));
                (z, c.manning, (c.eta0 - z).max(0.0))
            }
            CaseSpec::DamBreak(c) => (0.0, 0.0, if x < c.x_dam { c.h_left } else { c.h_right }),
        };
        bathymetry.push(z);
        manning.push(rough);
        state.push(Conserved::new(h, 0.0, 0.0));
    }
    Ok(CaseInit {
        bathymetry,
        manning,
        state,
    })
}

/// Builds `raw` and attaches the case's bed and roughness.
pub fn prepare(spec: &CaseSpec, raw: &RawMesh) -> Result<(Mesh, Vec<Conserved>), CaseError> {
    let zeros = vec![0.0; raw.triangles.len()];
    let mesh = build_mesh(raw, &zeros, &zeros)?;
    let init = init_case(spec, &mesh)?;
    let mesh = mesh.with_cell_fields(&init.bathymetry, &init.manning)?;
    Ok((mesh, init.state))
}

/// Middle state and shock speed of the wet-bed dam break.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokerState {
    pub h_middle: f64,
    pub u_middle: f64,
    pub shock_speed: f64,
}

/// Solves for the constant middle state between the rarefaction and the
/// shock by bisection on `(hr, hl)`.
pub fn stoker_middle_state(hl: f64, hr: f64, g: f64) -> Result<StokerState, CaseError> {
    if !(hl > hr && hr > 0.0) || !hl.is_finite() {
        return Err(CaseError::Parameter(format!(
            "Stoker solution needs hl > hr > 0, got hl={hl}, hr={hr}"
        )));
    }
    let cl = (g * hl).sqrt();
    // rarefaction velocity minus shock velocity, as functions of the middle depth
    let f = |hm: f64| 2.0 * (cl - (g * hm).sqrt()) - (hm - hr) * (0.5 * g * (hm + hr) / (hm * hr)).sqrt();
    let (mut lo, mut hi) = (hr, hl);
    let mut converged = false;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hl {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(CaseError::NoConvergence { hl, hr });
    }
    let hm = 0.5 * (lo + hi);
    let um = 2.0 * (cl - (g * hm).sqrt());
    Ok(StokerState {
        h_middle: hm,
        u_middle: um,
        shock_speed: hm * um / (hm - hr),
    })
}

/// Depth and velocity of the wet-bed dam break at `(x, t)`.
pub fn stoker_exact(hl: f64, hr: f64, x: f64, t: f64, x_dam: f64, g: f64) -> Result<(f64, f64), CaseError> {
    if !(t >= 0.0) {
        return Err(CaseError::Parameter(format!("t must be non-negative, got {t}")));
    }
    if hl == hr && hl > 0.0 {
        return Ok((hl, 0.0));
    }
    if t == 0.0 {
        if !(hl > hr && hr > 0.0) {
            return Err(CaseError::Parameter(format!(
                "Stoker solution needs hl > hr > 0, got hl={hl}, hr={hr}"
            )));
        }
        return Ok((if x < x_dam { hl } else { hr }, 0.0));
    }
    let s = stoker_middle_state(hl, hr, g)?;
    let cl = (g * hl).sqrt();
    let cm = (g * s.h_middle).sqrt();
    let xi = (x - x_dam) / t;
    Ok(if xi <= -cl {
        (hl, 0.0)
    } else if xi <= s.u_middle - cm {
        let c = (2.0 * cl - xi) / 3.0;
        (c * c / g, 2.0 * (cl + xi) / 3.0)
    } else if xi < s.shock_speed {
        (s.h_middle, s.u_middle)
    } else {
        (hr, 0.0)
    })
}
