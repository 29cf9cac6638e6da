//! Corner-angle dynamics of m-fold symmetric sector profiles (m ≥ 3).
//!
//! The canonical route moves every interval endpoint with speed `2H(θ)` where `H` is the
//! exact `K_{S¹}` convolution of the current profile. The closed-form route evaluates the
//! sine/cosine sums obtained by replacing the symmetrized kernel with `c₁|sin(mθ/2)| + c₂`.
//! That replacement is exact only for `m = 4`; for other `m` the symmetrized kernel is
//! `π cos(2|φ| - 2π/m) / (2m sin(2π/m))` and the two routes differ at `O(C_m)` relative size.
//!
//! In the second sum of the gap equation the factor is `sin(mζ_l/4)` (the `l`-th sector's
//! own width), as produced by integrating the kernel over that sector.

use crate::angular_profile::{IntervalProfile, Piece};
use crate::error::{Error, Result};
use crate::ode;
use crate::polar_elliptic::Ks1Stream;
use std::f64::consts::TAU;

/// Width below which a corner or gap counts as collapsed.
pub const COLLISION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct MultiCornerState {
    pub m: usize,
    pub zeta: Vec<f64>,
    /// `γ_{j+1/2}` for `j = 1..k-1`.
    pub gamma: Vec<f64>,
    pub beta1: f64,
    pub t: f64,
}

impl MultiCornerState {
    pub fn new(m: usize, zeta: Vec<f64>, gamma: Vec<f64>, beta1: f64) -> Result<Self> {
        let s = MultiCornerState { m, zeta, gamma, beta1, t: 0.0 };
        s.validate()?;
        Ok(s)
    }

    /// A single corner of width `ζ₀` centred on the positive axis.
    pub fn single(m: usize, zeta0: f64) -> Result<Self> {
        Self::new(m, vec![zeta0], vec![], -0.5 * zeta0)
    }

    pub fn k(&self) -> usize {
        self.zeta.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 3 {
            return Err(Error::SymmetryTooLow(self.m));
        }
        if self.zeta.is_empty() || self.gamma.len() + 1 != self.zeta.len() {
            return Err(Error::State(format!(
                "need k >= 1 corner widths and k-1 gaps, got {} and {}",
                self.zeta.len(),
                self.gamma.len()
            )));
        }
        if self.zeta.iter().chain(self.gamma.iter()).any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::State("corner widths and gaps must be positive".into()));
        }
        let total: f64 = self.zeta.iter().sum::<f64>() + self.gamma.iter().sum::<f64>();
        if total >= TAU / self.m as f64 {
            return Err(Error::State(format!(
                "total angle {total:.6} must stay below 2π/m = {:.6}",
                TAU / self.m as f64
            )));
        }
        Ok(())
    }

    /// Lower edges `β_j`.
    pub fn betas(&self) -> Vec<f64> {
        let mut b = Vec::with_capacity(self.k());
        let mut acc = self.beta1;
        for j in 0..self.k() {
            b.push(acc);
            if j + 1 < self.k() {
                acc += self.zeta[j] + self.gamma[j];
            }
        }
        b
    }

    pub fn profile(&self) -> Result<IntervalProfile> {
        let pieces = self
            .betas()
            .iter()
            .zip(&self.zeta)
            .map(|(&b, &z)| Piece::new(b, b + z, 1.0))
            .collect();
        IntervalProfile::new(pieces, self.m)
    }

    pub fn sum_zeta(&self) -> f64 {
        self.zeta.iter().sum()
    }

    fn to_vec(&self) -> Vec<f64> {
        let mut v = self.zeta.clone();
        v.extend_from_slice(&self.gamma);
        v.push(self.beta1);
        v
    }

    fn from_vec(&self, v: &[f64], t: f64) -> Self {
        let k = self.k();
        MultiCornerState {
            m: self.m,
            zeta: v[..k].to_vec(),
            gamma: v[k..2 * k - 1].to_vec(),
            beta1: v[2 * k - 1],
            t,
        }
    }

    fn collapsed(&self) -> bool {
        self.zeta.iter().chain(self.gamma.iter()).any(|&v| v <= COLLISION_TOL)
            || TAU / self.m as f64 - self.zeta.iter().sum::<f64>() - self.gamma.iter().sum::<f64>() <= COLLISION_TOL
    }
}

/// Derivatives in state order: `(ζ₁..ζ_k, γ_{3/2}..γ_{k-1/2}, β₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleRates {
    pub zeta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub beta1: f64,
}

fn endpoint_speeds_raw(m: usize, zeta: &[f64], gamma: &[f64], beta1: f64) -> (Vec<f64>, Vec<f64>) {
    let k = zeta.len();
    let mut lo = Vec::with_capacity(k);
    let mut acc = beta1;
    for j in 0..k {
        lo.push(acc);
        if j + 1 < k {
            acc += zeta[j] + gamma[j];
        }
    }
    let mut pieces = Vec::with_capacity(k * m);
    for i in 0..m {
        let rot = TAU * i as f64 / m as f64;
        for j in 0..k {
            pieces.push(Piece::new(lo[j] + rot, lo[j] + zeta[j] + rot, 1.0));
        }
    }
    let st = Ks1Stream::from_pieces_unchecked(pieces);
    let vlo: Vec<f64> = lo.iter().map(|&b| 2.0 * st.value(b)).collect();
    let vhi: Vec<f64> = lo.iter().zip(zeta).map(|(&b, &z)| 2.0 * st.value(b + z)).collect();
    (vlo, vhi)
}

/// Endpoint characteristics: every edge moves with `2H(θ)`.
pub fn endpoint_rhs(state: &MultiCornerState) -> Result<AngleRates> {
    state.validate()?;
    if state.collapsed() {
        return Err(Error::State("corner or gap collapsed below the collision threshold".into()));
    }
    let (vlo, vhi) = endpoint_speeds_raw(state.m, &state.zeta, &state.gamma, state.beta1);
    Ok(assemble(&vlo, &vhi))
}

fn assemble(vlo: &[f64], vhi: &[f64]) -> AngleRates {
    let k = vlo.len();
    AngleRates {
        zeta: (0..k).map(|j| vhi[j] - vlo[j]).collect(),
        gamma: (0..k.saturating_sub(1)).map(|j| vlo[j + 1] - vhi[j]).collect(),
        beta1: vlo[0],
    }
}

/// Closed-form sine/cosine sums with constant `C_m`; `β₁` is not evolved (rate 0).
pub fn closed_form_rhs(state: &MultiCornerState, cm: f64) -> AngleRates {
    let m4 = state.m as f64 / 4.0;
    let k = state.k();
    let b = state.betas();
    let z = &state.zeta;
    let mut dz = vec![0.0; k];
    let mut dg = vec![0.0; k.saturating_sub(1)];
    for j in 0..k {
        let mut acc = 0.0;
        for l in 0..k {
            if l == j {
                continue;
            }
            let term = (m4 * z[l]).sin() * (m4 * (2.0 * (b[j] - b[l]) + (z[j] - z[l]))).cos();
            acc += if l < j { term } else { -term };
        }
        dz[j] = cm * (m4 * z[j]).sin() * acc;
    }
    for j in 0..k.saturating_sub(1) {
        let g = state.gamma[j];
        let mut acc = 0.0;
        for l in 0..k {
            let term = (m4 * z[l]).sin() * (m4 * ((b[j + 1] - b[l]) + (b[j] - b[l]) + (z[j] - z[l]))).cos();
            acc += if l <= j { term } else { -term };
        }
        dg[j] = cm * (m4 * g).sin() * acc;
    }
    AngleRates { zeta: dz, gamma: dg, beta1: 0.0 }
}

/// Least-squares `C_m` matching the closed form to the endpoint route at one state.
pub fn fit_cm(probe: &MultiCornerState) -> Result<f64> {
    let e = endpoint_rhs(probe)?;
    let f = closed_form_rhs(probe, 1.0);
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in e.zeta.iter().chain(&e.gamma).zip(f.zeta.iter().chain(&f.gamma)) {
        num += x * y;
        den += y * y;
    }
    if den == 0.0 {
        return Err(Error::Degenerate("probe has vanishing closed-form rates (k = 1?)".into()));
    }
    Ok(num / den)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rhs {
    Endpoint,
    ClosedForm { cm: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngleTrajectory {
    pub states: Vec<MultiCornerState>,
    pub collided: bool,
}

impl AngleTrajectory {
    pub fn last(&self) -> &MultiCornerState {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// CSV rows `t, zeta_1..zeta_k, gamma_*, beta1, sum_zeta`.
    pub fn to_csv(&self) -> String {
        let s0 = &self.states[0];
        let mut out = String::from("t");
        for j in 1..=s0.k() {
            out += &format!(",zeta_{j}");
        }
        for j in 1..s0.k() {
            out += &format!(",gamma_{j}_5");
        }
        out += ",beta1,sum_zeta\n";
        for s in &self.states {
            out += &format!("{:.12e}", s.t);
            for v in s.zeta.iter().chain(&s.gamma) {
                out += &format!(",{v:.15e}");
            }
            out += &format!(",{:.15e},{:.15e}\n", s.beta1, s.sum_zeta());
        }
        out
    }
}

fn rhs_vec(state0: &MultiCornerState, rhs: Rhs, y: &[f64], out: &mut [f64]) -> Result<()> {
    let s = state0.from_vec(y, 0.0);
    if s.collapsed() {
        return Err(Error::State("collision".into()));
    }
    let r = match rhs {
        Rhs::Endpoint => {
            let (vlo, vhi) = endpoint_speeds_raw(s.m, &s.zeta, &s.gamma, s.beta1);
            assemble(&vlo, &vhi)
        }
        Rhs::ClosedForm { cm } => closed_form_rhs(&s, cm),
    };
    let k = s.k();
    out[..k].copy_from_slice(&r.zeta);
    out[k..2 * k - 1].copy_from_slice(&r.gamma);
    out[2 * k - 1] = r.beta1;
    Ok(())
}

/// Fixed-step RK4 from `state.t` to `state.t + T` (negative `T` runs backwards).
///
/// On a collision the step is retried once with half the step; if that also fails the
/// trajectory stops with `collided = true`.
pub fn integrate(state: &MultiCornerState, dt: f64, t_span: f64, rhs: Rhs) -> Result<AngleTrajectory> {
    state.validate()?;
    if !(dt > 0.0) {
        return Err(Error::State("dt must be positive".into()));
    }
    let n = ode::step_count(t_span, dt);
    let h = t_span / n as f64;
    let mut f = |_t: f64, y: &[f64], out: &mut [f64]| rhs_vec(state, rhs, y, out);
    let mut y = state.to_vec();
    let mut t = state.t;
    let mut states = vec![state.clone()];
    for _ in 0..n {
        let next = match ode::rk4_step(&mut f, t, &y, h) {
            Ok(v) => Some(v),
            Err(_) => ode::rk4_step(&mut f, t, &y, 0.5 * h)
                .and_then(|v| ode::rk4_step(&mut f, t + 0.5 * h, &v, 0.5 * h))
                .ok(),
        };
        match next {
            Some(v) if !state.from_vec(&v, 0.0).collapsed() => {
                y = v;
                t += h;
                states.push(state.from_vec(&y, t));
            }
            _ => return Ok(AngleTrajectory { states, collided: true }),
        }
    }
    Ok(AngleTrajectory { states, collided: false })
}

/// Constant angular speed `dβ₁/dt = 2H(β₁)` of a single corner of width `ζ₀`.
pub fn rotation_speed(zeta0: f64, m: usize) -> Result<f64> {
    if m < 3 {
        return Err(Error::SymmetryTooLow(m));
    }
    if !(zeta0 > 0.0 && zeta0 < TAU / m as f64) {
        return Err(Error::State(format!("corner width must lie in (0, 2π/m), got {zeta0}")));
    }
    Ok(endpoint_rhs(&MultiCornerState::single(m, zeta0)?)?.beta1)
}

/// Closed form of the single-corner speed, `(sin(2ζ - 2π/m) + sin(2π/m)) / (4 sin(2π/m))`.
pub fn rotation_speed_closed(zeta0: f64, m: usize) -> f64 {
    let p = TAU / m as f64;
    ((2.0 * zeta0 - p).sin() + p.sin()) / (4.0 * p.sin())
}
