//! Pointwise and edgewise numerics for the shallow water equations.
//!
//! All functions here are pure. States are conservative `(h, hu, hv)`;
//! fluxes are normal fluxes `F(U) . n` per unit edge length.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mesh::Mesh;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("inadmissible state: depth {h} is negative or not finite")]
    Inadmissible { h: f64 },
    #[error("positivity violation: depth {h} below round-off tolerance {tolerance}")]
    PositivityViolation { h: f64, tolerance: f64 },
    #[error("non-finite velocity in cell {cell} (h={h}, qx={qx}, qy={qy})")]
    NonFinite { cell: usize, h: f64, qx: f64, qy: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Conserved {
    pub h: f64,
    pub qx: f64,
    pub qy: f64,
}

impl Conserved {
    pub const DRY: Conserved = Conserved { h: 0.0, qx: 0.0, qy: 0.0 };

    pub fn new(h: f64, qx: f64, qy: f64) -> Self {
        Conserved { h, qx, qy }
    }

    pub fn from_velocity(h: f64, u: f64, v: f64) -> Self {
        Conserved { h, qx: h * u, qy: h * v }
    }

    /// Velocity `(u, v)`; zero below the dry threshold.
    #[inline]
    pub fn velocity(&self, h_dry: f64) -> (f64, f64) {
        if self.h < h_dry {
            (0.0, 0.0)
        } else {
            (self.qx / self.h, self.qy / self.h)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.h.is_finite() && self.qx.is_finite() && self.qy.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Flux3 {
    pub mass: f64,
    pub momx: f64,
    pub momy: f64,
}

impl Flux3 {
    pub const ZERO: Flux3 = Flux3 { mass: 0.0, momx: 0.0, momy: 0.0 };

    pub fn new(mass: f64, momx: f64, momy: f64) -> Self {
        Flux3 { mass, momx, momy }
    }

    pub fn is_finite(&self) -> bool {
        self.mass.is_finite() && self.momx.is_finite() && self.momy.is_finite()
    }
}

fn default_g() -> f64 {
    9.81
}
fn default_h_dry() -> f64 {
    1e-6
}
fn default_cfl() -> f64 {
    0.7
}
fn default_dt_max() -> f64 {
    1.0
}

/// Physical and numerical constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysParams {
    /// Gravitational acceleration, m/s².
    #[serde(default = "default_g")]
    pub g: f64,
    /// Depth below which a cell is dry, m.
    #[serde(default = "default_h_dry")]
    pub h_dry: f64,
    /// Courant number.
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Time step used when every cell is dry, s.
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams {
            g: default_g(),
            h_dry: default_h_dry(),
            cfl: default_cfl(),
            dt_max: default_dt_max(),
        }
    }
}

impl PhysParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(format!("g must be positive, got {}", self.g));
        }
        if !(self.h_dry > 0.0 && self.h_dry.is_finite()) {
            return Err(format!("h_dry must be positive, got {}", self.h_dry));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(format!("cfl must lie in (0, 1), got {}", self.cfl));
        }
        if !(self.dt_max > 0.0 && self.dt_max.is_finite()) {
            return Err(format!("dt_max must be positive, got {}", self.dt_max));
        }
        Ok(())
    }
}

/// `g h² / 2`, taken as zero for dry depths.
#[inline]
pub fn hydrostatic_pressure(h: f64, params: &PhysParams) -> f64 {
    if h < params.h_dry {
        0.0
    } else {
        0.5 * params.g * h * h
    }
}

/// A state expressed in an edge frame: normal and tangential velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalState {
    pub h: f64,
    pub un: f64,
    pub ut: f64,
}

impl NormalState {
    #[inline]
    pub fn from_conserved(u: &Conserved, n: [f64; 2], h_dry: f64) -> Self {
        let (vx, vy) = u.velocity(h_dry);
        NormalState {
            h: u.h,
            un: vx * n[0] + vy * n[1],
            ut: -vx * n[1] + vy * n[0],
        }
    }
}

#[inline]
fn rotate_back(f: [f64; 3], n: [f64; 2]) -> Flux3 {
    Flux3 {
        mass: f[0],
        momx: f[1] * n[0] - f[2] * n[1],
        momy: f[1] * n[1] + f[2] * n[0],
    }
}

#[inline]
fn normal_frame_flux(s: &NormalState, params: &PhysParams) -> [f64; 3] {
    if s.h < params.h_dry {
        return [0.0; 3];
    }
    let m = s.h * s.un;
    [m, m * s.un + hydrostatic_pressure(s.h, params), m * s.ut]
}

/// Exact normal flux `G(U) n_x + H(U) n_y`.
pub fn physical_flux_normal(u: &Conserved, n: [f64; 2], params: &PhysParams) -> Flux3 {
    let s = NormalState::from_conserved(u, n, params.h_dry);
    rotate_back(normal_frame_flux(&s, params), n)
}

/// Outer and contact wave speed estimates of a 1D Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpeeds {
    pub left: f64,
    pub star: f64,
    pub right: f64,
}

/// Two-rarefaction speed estimates with dry-front limits.
///
/// Depths below `h_dry` count as dry. Calling this with both sides dry is
/// a contract violation; the result is then all zeros.
pub fn wave_speed_estimates(hl: f64, ul: f64, hr: f64, ur: f64, params: &PhysParams) -> WaveSpeeds {
    let g = params.g;
    let l_dry = hl < params.h_dry;
    let r_dry = hr < params.h_dry;
    let (hl, ul) = if l_dry { (0.0, 0.0) } else { (hl, ul) };
    let (hr, ur) = if r_dry { (0.0, 0.0) } else { (hr, ur) };
    let cl = (g * hl).sqrt();
    let cr = (g * hr).sqrt();

    let (sl, sr) = match (l_dry, r_dry) {
        (true, true) => return WaveSpeeds { left: 0.0, star: 0.0, right: 0.0 },
        (false, true) => (ul - cl, ul + 2.0 * cl),
        (true, false) => (ur - 2.0 * cr, ur + cr),
        (false, false) => {
            let u_star = 0.5 * (ul + ur) + cl - cr;
            // sqrt(g h*) with h* = c*²/g; a negative c* means the two
            // rarefactions open a dry gap.
            let c_star = (0.5 * (cl + cr) + 0.25 * (ul - ur)).max(0.0);
            ((ul - cl).min(u_star - c_star), (ur + cr).max(u_star + c_star))
        }
    };

    let denom = hr * (ur - sr) - hl * (ul - sl);
    let star = if denom.abs() < 1e-14 {
        0.5 * (ul + ur)
    } else {
        (sl * hr * (ur - sr) - sr * hl * (ul - sl)) / denom
    };
    WaveSpeeds {
        left: sl,
        star: star.clamp(sl, sr),
        right: sr,
    }
}

/// 1D HLLC flux in the edge frame; the tangential velocity is a passive
/// scalar upwinded by the sign of the contact speed.
pub fn hllc_normal_frame(left: &NormalState, right: &NormalState, params: &PhysParams) -> [f64; 3] {
    let l_dry = left.h < params.h_dry;
    let r_dry = right.h < params.h_dry;
    if l_dry && r_dry {
        return [0.0; 3];
    }
    let (ul, vl) = if l_dry { (0.0, 0.0) } else { (left.un, left.ut) };
    let (ur, vr) = if r_dry { (0.0, 0.0) } else { (right.un, right.ut) };
    let ws = wave_speed_estimates(left.h, ul, right.h, ur, params);
    let fl = normal_frame_flux(left, params);
    let fr = normal_frame_flux(right, params);
    if ws.left >= 0.0 {
        return fl;
    }
    if ws.right <= 0.0 {
        return fr;
    }
    let (sl, sr) = (ws.left, ws.right);
    let (hl, hr) = (if l_dry { 0.0 } else { left.h }, if r_dry { 0.0 } else { right.h });
    let inv = 1.0 / (sr - sl);
    let mass = (sr * fl[0] - sl * fr[0] + sl * sr * (hr - hl)) * inv;
    let mom = (sr * fl[1] - sl * fr[1] + sl * sr * (hr * ur - hl * ul)) * inv;
    let trans = mass * if ws.star >= 0.0 { vl } else { vr };
    [mass, mom, trans]
}

fn check_admissible(u: &Conserved) -> Result<(), KernelError> {
    if !(u.h >= 0.0) || !u.is_finite() {
        return Err(KernelError::Inadmissible { h: u.h });
    }
    Ok(())
}

/// HLLC numerical flux across an edge with unit normal `n` (left to right).
pub fn hllc_flux(
    left: &Conserved,
    right: &Conserved,
    n: [f64; 2],
    params: &PhysParams,
) -> Result<Flux3, KernelError> {
    check_admissible(left)?;
    check_admissible(right)?;
    if left == right {
        return Ok(physical_flux_normal(left, n, params));
    }
    let sl = NormalState::from_conserved(left, n, params.h_dry);
    let sr = NormalState::from_conserved(right, n, params.h_dry);
    Ok(rotate_back(hllc_normal_frame(&sl, &sr, params), n))
}

/// Interface states and per-side pressure corrections of the hydrostatic
/// reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstruction {
    pub left: Conserved,
    pub right: Conserved,
    pub corr_left: Flux3,
    pub corr_right: Flux3,
}

/// Reconstructs both sides of an edge to the interface bed level
/// `max(z_l, z_r)`, keeping velocities.
pub fn hydrostatic_reconstruct(
    ul: &Conserved,
    zl: f64,
    ur: &Conserved,
    zr: f64,
    n: [f64; 2],
    params: &PhysParams,
) -> Reconstruction {
    let z_face = zl.max(zr);
    let side = |u: &Conserved, z: f64| -> (Conserved, Flux3) {
        let h_star = (u.h - (z_face - z)).max(0.0);
        let star = if h_star == u.h {
            *u
        } else {
            let (vx, vy) = u.velocity(params.h_dry);
            Conserved::new(h_star, h_star * vx, h_star * vy)
        };
        let dp = hydrostatic_pressure(u.h, params) - hydrostatic_pressure(h_star, params);
        (star, Flux3::new(0.0, dp * n[0], dp * n[1]))
    };
    let (left, corr_left) = side(ul, zl);
    let (right, corr_right) = side(ur, zr);
    Reconstruction {
        left,
        right,
        corr_left,
        corr_right,
    }
}

/// Fluxes of one interior edge as seen by each adjacent cell, with that
/// cell's own hydrostatic pressure `g h_i² n / 2` removed.
///
/// The removed pressure integrates to zero around a closed cell, so the
/// cell update `sum(sign * flux * l)` is unchanged in exact arithmetic;
/// for a lake at rest both returned momentum fluxes are exactly zero.
/// The mass component is shared.
pub fn interface_fluxes(
    ul: &Conserved,
    zl: f64,
    ur: &Conserved,
    zr: f64,
    n: [f64; 2],
    params: &PhysParams,
) -> Result<(Flux3, Flux3), KernelError> {
    let rec = hydrostatic_reconstruct(ul, zl, ur, zr, n, params);
    let f = hllc_flux(&rec.left, &rec.right, n, params)?;
    let pl = hydrostatic_pressure(rec.left.h, params);
    let pr = hydrostatic_pressure(rec.right.h, params);
    Ok((
        Flux3::new(f.mass, f.momx - pl * n[0], f.momy - pl * n[1]),
        Flux3::new(f.mass, f.momx - pr * n[0], f.momy - pr * n[1]),
    ))
}

/// Reflective wall: HLLC against the mirror state. The mass flux is zero.
pub fn wall_flux(u: &Conserved, n: [f64; 2], params: &PhysParams) -> Flux3 {
    let s = NormalState::from_conserved(u, n, params.h_dry);
    let mirror = NormalState { un: -s.un, ..s };
    let mut f = if s.un == 0.0 {
        normal_frame_flux(&s, params)
    } else {
        hllc_normal_frame(&s, &mirror, params)
    };
    f[0] = 0.0;
    rotate_back(f, n)
}

/// Wall flux with the cell's own hydrostatic pressure removed; the
/// boundary counterpart of [`interface_fluxes`].
pub fn wall_flux_relative(u: &Conserved, n: [f64; 2], params: &PhysParams) -> Flux3 {
    let f = wall_flux(u, n, params);
    let p = hydrostatic_pressure(u.h, params);
    Flux3::new(0.0, f.momx - p * n[0], f.momy - p * n[1])
}

/// `r / (|v| + sqrt(g h))` and the signal speed for one wet cell; `None`
/// when the cell is dry.
#[inline]
pub fn cell_time_bound(
    cell: usize,
    u: &Conserved,
    inradius: f64,
    params: &PhysParams,
) -> Result<Option<(f64, f64)>, KernelError> {
    if !u.is_finite() {
        return Err(KernelError::NonFinite {
            cell,
            h: u.h,
            qx: u.qx,
            qy: u.qy,
        });
    }
    if u.h < params.h_dry {
        return Ok(None);
    }
    let (vx, vy) = u.velocity(params.h_dry);
    let speed = (vx * vx + vy * vy).sqrt() + (params.g * u.h).sqrt();
    if !speed.is_finite() {
        return Err(KernelError::NonFinite {
            cell,
            h: u.h,
            qx: u.qx,
            qy: u.qy,
        });
    }
    Ok(Some((inradius / speed, speed)))
}

/// CFL-limited time step and the largest signal speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeStepBound {
    pub dt: f64,
    pub max_speed: f64,
}

/// `cfl * min(r_i / (|v_i| + sqrt(g h_i)))` over wet cells, or `dt_max`
/// when every cell is dry.
pub fn stable_dt(state: &[Conserved], mesh: &Mesh, params: &PhysParams) -> Result<TimeStepBound, KernelError> {
    let mut min_ratio = f64::INFINITY;
    let mut max_speed = 0.0f64;
    for (i, (u, cell)) in state.iter().zip(&mesh.cells).enumerate() {
        if let Some((ratio, speed)) = cell_time_bound(i, u, cell.inradius, params)? {
            min_ratio = min_ratio.min(ratio);
            max_speed = max_speed.max(speed);
        }
    }
    Ok(finish_time_bound(min_ratio, max_speed, params))
}

#[inline]
pub(crate) fn finish_time_bound(min_ratio: f64, max_speed: f64, params: &PhysParams) -> TimeStepBound {
    if min_ratio.is_finite() {
        TimeStepBound {
            dt: params.cfl * min_ratio,
            max_speed,
        }
    } else {
        TimeStepBound {
            dt: params.dt_max,
            max_speed: 0.0,
        }
    }
}

/// Semi-implicit Manning friction applied after the inviscid update.
pub fn apply_friction(u: &Conserved, manning: f64, dt: f64, params: &PhysParams) -> Conserved {
    if manning == 0.0 || u.h < params.h_dry {
        return *u;
    }
    let (vx, vy) = u.velocity(params.h_dry);
    let speed = (vx * vx + vy * vy).sqrt();
    if speed == 0.0 {
        return *u;
    }
    let h43 = u.h * u.h.cbrt();
    let denom = 1.0 + dt * params.g * manning * manning * speed / h43;
    Conserved::new(u.h, u.qx / denom, u.qy / denom)
}

/// Result of [`clamp_dry`]: the cleaned state and the depth added by
/// clipping a round-off negative value to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clamped {
    pub state: Conserved,
    pub clipped: f64,
}

/// Relative tolerance for clipping negative depths.
pub const NEGATIVE_DEPTH_TOLERANCE: f64 = 1e-14;

/// Zeroes momentum in dry cells and clips round-off negative depths.
pub fn clamp_dry(u: &Conserved, params: &PhysParams, h_ref: f64) -> Result<Clamped, KernelError> {
    let mut out = *u;
    let mut clipped = 0.0;
    if out.h < 0.0 {
        let tolerance = NEGATIVE_DEPTH_TOLERANCE * h_ref;
        if out.h < -tolerance {
            return Err(KernelError::PositivityViolation { h: out.h, tolerance });
        }
        clipped = -out.h;
        out.h = 0.0;
    }
    if out.h < params.h_dry {
        out.qx = 0.0;
        out.qy = 0.0;
    }
    Ok(Clamped { state: out, clipped })
}
