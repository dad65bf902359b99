//! Test-only reference implementations, written independently of the
//! solver code they check.
#![allow(dead_code)]

pub const G: f64 = 9.81;

/// Exact solution of the 1D shallow water Riemann problem
/// `(hl, ul) | (hr, ur)` sampled at `xi = x / t`. Returns `(h, u)`.
///
/// Star depth from bisection on the depth function, then the usual
/// shock / rarefaction sampling. Dry sides are handled with the dry-front
/// fans.
pub fn exact_riemann(hl: f64, ul: f64, hr: f64, ur: f64, xi: f64, g: f64) -> (f64, f64) {
    let cl = (g * hl).sqrt();
    let cr = (g * hr).sqrt();

    if hl <= 0.0 && hr <= 0.0 {
        return (0.0, 0.0);
    }
    if hr <= 0.0 {
        return dry_right(hl, ul, cl, xi, g);
    }
    if hl <= 0.0 {
        return dry_left(hr, ur, cr, xi, g);
    }
    if ur - ul >= 2.0 * (cl + cr) {
        // rarefactions separate and leave a dry middle
        let (h, u) = dry_right(hl, ul, cl, xi, g);
        if h > 0.0 || xi < ul + 2.0 * cl {
            return (h, u);
        }
        return dry_left(hr, ur, cr, xi, g);
    }

    let (h_star, u_star) = star_state(hl, ul, hr, ur, g);
    let c_star = (g * h_star).sqrt();

    if xi <= u_star {
        if h_star > hl {
            let s = ul - cl * ((h_star + hl) * h_star / (2.0 * hl * hl)).sqrt();
            if xi <= s {
                (hl, ul)
            } else {
                (h_star, u_star)
            }
        } else {
            let head = ul - cl;
            let tail = u_star - c_star;
            if xi <= head {
                (hl, ul)
            } else if xi >= tail {
                (h_star, u_star)
            } else {
                let c = (ul + 2.0 * cl - xi) / 3.0;
                (c * c / g, (ul + 2.0 * cl + 2.0 * xi) / 3.0)
            }
        }
    } else if h_star > hr {
        let s = ur + cr * ((h_star + hr) * h_star / (2.0 * hr * hr)).sqrt();
        if xi >= s {
            (hr, ur)
        } else {
            (h_star, u_star)
        }
    } else {
        let head = ur + cr;
        let tail = u_star + c_star;
        if xi >= head {
            (hr, ur)
        } else if xi <= tail {
            (h_star, u_star)
        } else {
            let c = (-ur + 2.0 * cr + xi) / 3.0;
            (c * c / g, (ur - 2.0 * cr + 2.0 * xi) / 3.0)
        }
    }
}

fn depth_function(h: f64, hk: f64, g: f64) -> f64 {
    if h > hk {
        (h - hk) * (0.5 * g * (h + hk) / (h * hk)).sqrt()
    } else {
        2.0 * ((g * h).sqrt() - (g * hk).sqrt())
    }
}

/// Star-region depth and velocity by bisection to 1e-14 relative.
pub fn star_state(hl: f64, ul: f64, hr: f64, ur: f64, g: f64) -> (f64, f64) {
    let f = |h: f64| depth_function(h, hl, g) + depth_function(h, hr, g) + ur - ul;
    let mut lo = 0.0;
    let mut hi = hl.max(hr);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let h = 0.5 * (lo + hi);
    let u = 0.5 * (ul + ur) + 0.5 * (depth_function(h, hr, g) - depth_function(h, hl, g));
    (h, u)
}

fn dry_right(hl: f64, ul: f64, cl: f64, xi: f64, g: f64) -> (f64, f64) {
    if xi <= ul - cl {
        (hl, ul)
    } else if xi < ul + 2.0 * cl {
        let c = (ul + 2.0 * cl - xi) / 3.0;
        (c * c / g, (ul + 2.0 * cl + 2.0 * xi) / 3.0)
    } else {
        (0.0, 0.0)
    }
}

fn dry_left(hr: f64, ur: f64, cr: f64, xi: f64, g: f64) -> (f64, f64) {
    if xi >= ur + cr {
        (hr, ur)
    } else if xi > ur - 2.0 * cr {
        let c = (-ur + 2.0 * cr + xi) / 3.0;
        (c * c / g, (ur - 2.0 * cr + 2.0 * xi) / 3.0)
    } else {
        (0.0, 0.0)
    }
}

/// Two-wave HLL flux `(SR FL - SL FR + SL SR (UR - UL)) / (SR - SL)` for
/// the 1D system `(h, hu)`, given externally supplied wave speeds.
pub fn hll_flux_1d(hl: f64, ul: f64, hr: f64, ur: f64, sl: f64, sr: f64, g: f64) -> [f64; 2] {
    let fl = [hl * ul, hl * ul * ul + 0.5 * g * hl * hl];
    let fr = [hr * ur, hr * ur * ur + 0.5 * g * hr * hr];
    if sl >= 0.0 {
        return fl;
    }
    if sr <= 0.0 {
        return fr;
    }
    let ul_vec = [hl, hl * ul];
    let ur_vec = [hr, hr * ur];
    let mut out = [0.0; 2];
    for k in 0..2 {
        out[k] = (sr * fl[k] - sl * fr[k] + sl * sr * (ur_vec[k] - ul_vec[k])) / (sr - sl);
    }
    out
}

/// Kahan-compensated sum.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Relative difference with an absolute floor for values near zero.
pub fn rel_diff(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(1e-300)
}
