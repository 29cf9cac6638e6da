//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Each export returns a flat `Float64Array`; the plain functions underneath are what
//! the native tests exercise.

use patchlab::angle_odes::rotation_speed;
use patchlab::angular_profile::{fourier_of_intervals, symmetrize, IntervalProfile};
use patchlab::effective_corner::odd_corner_integrate;
use patchlab::polar_elliptic::invert_angular_laplacian;
use patchlab::velocity_field::{sector_log_gradient, sector_velocity, spectral_norm};
use wasm_bindgen::prelude::*;

/// `[ζ, speed]` pairs over `n` widths spanning the open interval `(0, 2π/m)`.
pub fn speed_curve(m: usize, n: usize) -> Result<Vec<f64>, String> {
    if n < 2 {
        return Err("need at least two samples".into());
    }
    let top = std::f64::consts::TAU / m as f64;
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let z = top * (i as f64 + 0.5) / n as f64;
        out.push(z);
        out.push(rotation_speed(z, m).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// Near-corner flow of the `m`-fold sector stack `lo < θ < hi`.
///
/// Layout: `[c, s, log_rate, then (x1, x2, u1, u2) for an n×n grid on [-1, 1]²]`.
pub fn sector_flow(lo: f64, hi: f64, m: usize, n: usize) -> Result<Vec<f64>, String> {
    let p = IntervalProfile::indicator(lo, hi).and_then(|p| symmetrize(&p, m)).map_err(|e| e.to_string())?;
    let sol = invert_angular_laplacian(&fourier_of_intervals(&p, 256));
    let mut out = vec![sol.c, sol.s, spectral_norm(&sector_log_gradient(sol.c, sol.s))];
    for i in 0..n {
        for j in 0..n {
            let x = [-1.0 + 2.0 * (j as f64 + 0.5) / n as f64, -1.0 + 2.0 * (i as f64 + 0.5) / n as f64];
            let u = sector_velocity(&sol, x);
            out.extend([x[0], x[1], u[0], u[1]]);
        }
    }
    Ok(out)
}

/// `[τ, A]` samples of the odd corner model, every `stride` steps.
pub fn odd_trajectory(a0: f64, expanding: bool, t_span: f64, dtau: f64, stride: usize) -> Result<Vec<f64>, String> {
    let run = odd_corner_integrate(a0, if expanding { 1.0 } else { -1.0 }, t_span, dtau).map_err(|e| e.to_string())?;
    Ok(run.states.iter().step_by(stride.max(1)).flat_map(|s| [s.tau, s.a]).collect())
}

#[wasm_bindgen(js_name = speedCurve)]
pub fn speed_curve_js(m: usize, n: usize) -> Result<Vec<f64>, JsError> {
    speed_curve(m, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sectorFlow)]
pub fn sector_flow_js(lo: f64, hi: f64, m: usize, n: usize) -> Result<Vec<f64>, JsError> {
    sector_flow(lo, hi, m, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = oddTrajectory)]
pub fn odd_trajectory_js(a0: f64, expanding: bool, t_span: f64, dtau: f64, stride: usize) -> Result<Vec<f64>, JsError> {
    odd_trajectory(a0, expanding, t_span, dtau, stride).map_err(|e| JsError::new(&e))
}
