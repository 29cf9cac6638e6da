//! One-dimensional transport `∂ₜh + 2H ∂θh = 0` on the circle.
//!
//! `H` comes either from the sector operator `4H + H'' = h` (m-fold symmetric data with
//! m ≥ 3, so no 2-mode is present) or from the spiral operator
//! `4H - 4cH' + (1+c²)H'' = h`.
//!
//! Smooth data ride on a characteristic grid. Each particle carries its value and the
//! Jacobian `J = ∂θ/∂θ₀`, advanced by `J' = 2H'(θ) J`, so Fourier coefficients of the
//! current profile are label-space trapezoid sums `(Δ/π) Σ hᵢ Jᵢ cos kθᵢ`; these are
//! spectrally accurate because the integrand is smooth and periodic in the label.
//!
//! Piecewise-constant data are handled exactly: each particle carries the value of the
//! cell to its right, and `H` is integrated in closed form against the cells.

use crate::angular_profile::{fourier_of_intervals, wrap, FourierProfile, IntervalProfile, Piece};
use crate::error::{Error, Result};
use crate::ode;
use crate::polar_elliptic::{spiral_invert, spiral_symbol, Ks1Stream};
use std::f64::consts::{PI, TAU};

/// Which elliptic problem closes the transport.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Closure {
    /// Sector operator under m-fold symmetry, `m ≥ 3`.
    Sector { m: usize },
    /// Spiral operator with pitch `c > 0`.
    Spiral { c: f64 },
}

impl Closure {
    fn check(&self) -> Result<()> {
        match *self {
            Closure::Sector { m } if m < 3 => Err(Error::SymmetryTooLow(m)),
            Closure::Spiral { c } if !(c > 0.0 && c.is_finite()) => {
                Err(Error::Degenerate(format!("spiral pitch must be positive, got {c}")))
            }
            _ => Ok(()),
        }
    }
}

/// How `H` is obtained from the particles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reconstruction {
    /// Label-space spectral quadrature with `modes` Fourier modes.
    Spectral { modes: usize },
    /// Each particle's value holds on the cell up to the next particle.
    PiecewiseConstant { modes: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicGrid {
    pub theta: Vec<f64>,
    pub values: Vec<f64>,
    pub jac: Vec<f64>,
    /// Label spacing `2π/N` of the initial uniform grid (spectral mode).
    pub dlabel: f64,
    pub t: f64,
}

impl CharacteristicGrid {
    /// `n` uniform particles carrying `f(θ)`.
    pub fn from_fn<F: Fn(f64) -> f64>(f: F, n: usize) -> Self {
        let theta: Vec<f64> = (0..n).map(|i| -PI + TAU * i as f64 / n as f64).collect();
        let values = theta.iter().map(|&t| f(t)).collect();
        CharacteristicGrid { jac: vec![1.0; n], theta, values, dlabel: TAU / n as f64, t: 0.0 }
    }

    pub fn from_fourier(h: &FourierProfile, n: usize) -> Self {
        Self::from_fn(|t| h.eval(t), n)
    }

    /// Particles at every interval endpoint plus `extra` uniform fillers; each carries
    /// the profile value on the cell to its right.
    pub fn from_intervals(p: &IntervalProfile, extra: usize) -> Self {
        let mut pts: Vec<f64> = Vec::new();
        for q in p.full_pieces() {
            pts.push(wrap(q.start));
            pts.push(wrap(q.end));
        }
        for i in 0..extra {
            pts.push(-PI + TAU * (i as f64 + 0.5) / extra as f64);
        }
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        let n = pts.len();
        let values = (0..n)
            .map(|i| {
                let a = pts[i];
                let b = if i + 1 < n { pts[i + 1] } else { pts[0] + TAU };
                p.eval(0.5 * (a + b))
            })
            .collect();
        CharacteristicGrid { jac: vec![1.0; n], theta: pts, values, dlabel: TAU / n as f64, t: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `∫ h dθ` as a label-space trapezoid sum (spectral mode).
    pub fn integral_spectral(&self) -> f64 {
        self.dlabel * self.values.iter().zip(&self.jac).map(|(h, j)| h * j).sum::<f64>()
    }

    /// `∫ h dθ` from the cell picture (piecewise-constant mode).
    pub fn integral_cells(&self) -> f64 {
        cells(&self.theta, &self.values).iter().map(|q| q.value * q.len()).sum()
    }

    /// Whether consecutive particles remain strictly ordered around the circle.
    pub fn ordered(&self) -> bool {
        let n = self.len();
        let total: f64 = (0..n)
            .map(|i| {
                let d = if i + 1 < n { self.theta[i + 1] - self.theta[i] } else { self.theta[0] + TAU - self.theta[n - 1] };
                d
            })
            .sum();
        (0..n.saturating_sub(1)).all(|i| self.theta[i + 1] > self.theta[i])
            && self.theta[0] + TAU > self.theta[n - 1]
            && (total - TAU).abs() < 1e-9
    }
}

fn cells(theta: &[f64], values: &[f64]) -> Vec<Piece> {
    let n = theta.len();
    let mut out: Vec<Piece> = Vec::new();
    let mut i = 0;
    while i < n {
        let v = values[i];
        let start = theta[i];
        let mut j = i + 1;
        while j < n && values[j] == v {
            j += 1;
        }
        let end = if j < n { theta[j] } else { theta[0] + TAU };
        if v != 0.0 {
            out.push(Piece::new(start, end, v));
        }
        i = j;
    }
    // merge a wrap-around run split at index 0
    if out.len() >= 2 && values[0] == values[n - 1] && values[0] != 0.0 {
        let last = out.pop().expect("len checked");
        if (last.end - (out[0].start + TAU)).abs() < 1e-15 {
            out[0] = Piece::new(last.start - TAU, out[0].end, last.value);
        } else {
            out.push(last);
        }
    }
    out
}

/// `(sin kθ, cos kθ)` over an arithmetic mode set `k = d, 2d, ...` by rotation recurrence,
/// resynchronised with a direct evaluation every 64 modes.
struct ModeWalk {
    th: f64,
    d: usize,
    step: (f64, f64),
    cur: (f64, f64),
    n: usize,
}

impl ModeWalk {
    fn new(ks: &[usize], th: f64) -> Self {
        let d = ks.first().copied().unwrap_or(1);
        let step = (d as f64 * th).sin_cos();
        ModeWalk { th, d, step, cur: (0.0, 1.0), n: 0 }
    }

    fn next_mode(&mut self) -> (f64, f64) {
        self.n += 1;
        self.cur = if self.n % 64 == 0 {
            ((self.n * self.d) as f64 * self.th).sin_cos()
        } else {
            let (s, c) = self.cur;
            (s * self.step.1 + c * self.step.0, c * self.step.1 - s * self.step.0)
        };
        self.cur
    }
}

/// Cosine/sine coefficients of a mode set at the particles.
fn modes_from_particles(g: &CharacteristicGrid, ks: &[usize]) -> (f64, Vec<f64>, Vec<f64>) {
    let w = g.dlabel / PI;
    let mut a = vec![0.0; ks.len()];
    let mut b = vec![0.0; ks.len()];
    let mut a0 = 0.0;
    for i in 0..g.len() {
        let hw = g.values[i] * g.jac[i] * w;
        if hw == 0.0 {
            continue;
        }
        a0 += hw;
        let mut it = ModeWalk::new(ks, g.theta[i]);
        for n in 0..ks.len() {
            let (s, c) = it.next_mode();
            a[n] += hw * c;
            b[n] += hw * s;
        }
    }
    (a0, a, b)
}

fn mode_set(closure: Closure, modes: usize) -> Vec<usize> {
    match closure {
        Closure::Sector { m } => (1..=modes / m).map(|j| j * m).collect(),
        Closure::Spiral { .. } => (1..=modes).collect(),
    }
}

/// Solve the closure mode by mode; returns `(H₀, A_k, B_k)` so that `H = H₀ + Σ A_k cos kθ + B_k sin kθ`.
fn solve_modes(closure: Closure, ks: &[usize], a0: f64, a: &[f64], b: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
    let mut ha = vec![0.0; ks.len()];
    let mut hb = vec![0.0; ks.len()];
    for (n, &k) in ks.iter().enumerate() {
        let kf = k as f64;
        match closure {
            Closure::Sector { .. } => {
                let d = 4.0 - kf * kf;
                ha[n] = a[n] / d;
                hb[n] = b[n] / d;
            }
            Closure::Spiral { c } => {
                let (p, q) = spiral_symbol(c, kf);
                let d2 = p * p + q * q;
                ha[n] = (a[n] * p - b[n] * q) / d2;
                hb[n] = (a[n] * q + b[n] * p) / d2;
            }
        }
    }
    (a0 / 8.0, ha, hb)
}

/// `(2H, 2H')` at the given angles from modal data.
fn speeds_at(ks: &[usize], h0: f64, ha: &[f64], hb: &[f64], at: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; at.len()];
    let mut dv = vec![0.0; at.len()];
    for (i, &th) in at.iter().enumerate() {
        let (mut s, mut d) = (h0, 0.0);
        let mut it = ModeWalk::new(ks, th);
        for (n, &k) in ks.iter().enumerate() {
            let kf = k as f64;
            let (sn, cs) = it.next_mode();
            s += ha[n] * cs + hb[n] * sn;
            d += kf * (hb[n] * cs - ha[n] * sn);
        }
        v[i] = 2.0 * s;
        dv[i] = 2.0 * d;
    }
    (v, dv)
}

/// `(2H, 2H')` at `at` for the piecewise-constant profile `pieces`.
fn speeds_cells(closure: Closure, pieces: Vec<Piece>, modes: usize, at: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    match closure {
        Closure::Sector { .. } => {
            let st = Ks1Stream::from_pieces_unchecked(pieces);
            Ok((at.iter().map(|&t| 2.0 * st.value(t)).collect(), at.iter().map(|&t| 2.0 * st.d1(t)).collect()))
        }
        Closure::Spiral { c } => {
            let prof = IntervalProfile { pieces, symmetry: 1 };
            let f = fourier_of_intervals(&prof, modes);
            let hs = spiral_invert(&f, c)?;
            Ok((
                at.iter().map(|&t| 2.0 * hs.fourier.eval_deriv(t, 0)).collect(),
                at.iter().map(|&t| 2.0 * hs.fourier.eval_deriv(t, 1)).collect(),
            ))
        }
    }
}

/// Speed `2H` and its derivative at every particle.
pub fn grid_speeds(g: &CharacteristicGrid, closure: Closure, recon: Reconstruction) -> Result<(Vec<f64>, Vec<f64>)> {
    closure.check()?;
    match recon {
        Reconstruction::Spectral { modes } => {
            let ks = mode_set(closure, modes);
            let (a0, a, b) = modes_from_particles(g, &ks);
            let (h0, ha, hb) = solve_modes(closure, &ks, a0, &a, &b);
            Ok(speeds_at(&ks, h0, &ha, &hb, &g.theta))
        }
        Reconstruction::PiecewiseConstant { modes } => speeds_cells(closure, cells(&g.theta, &g.values), modes, &g.theta),
    }
}

/// Snapshot sequence of a transport run.
#[derive(Clone, Debug, PartialEq)]
pub struct GridTrajectory {
    pub grids: Vec<CharacteristicGrid>,
}

impl GridTrajectory {
    pub fn last(&self) -> &CharacteristicGrid {
        self.grids.last().expect("trajectory holds the initial grid")
    }

    /// CSV rows `t, theta_1..theta_N`.
    pub fn to_csv(&self) -> String {
        let n = self.grids[0].len();
        let mut out = String::from("t");
        for i in 1..=n {
            out += &format!(",theta_{i}");
        }
        out.push('\n');
        for g in &self.grids {
            out += &format!("{:.12e}", g.t);
            for t in &g.theta {
                out += &format!(",{t:.15e}");
            }
            out.push('\n');
        }
        out
    }
}

/// Advance a characteristic grid with fixed-step RK4, recomputing `H` at every stage.
/// Snapshots are kept every `keep_every` steps (and at the end).
pub fn evolve_grid(
    g0: &CharacteristicGrid,
    closure: Closure,
    recon: Reconstruction,
    t_span: f64,
    dt: f64,
    keep_every: usize,
) -> Result<GridTrajectory> {
    closure.check()?;
    let n = g0.len();
    let steps = ode::step_count(t_span, dt);
    let h = t_span / steps as f64;
    let mut work = g0.clone();
    let mut rhs = |_t: f64, y: &[f64], out: &mut [f64]| -> Result<()> {
        work.theta.copy_from_slice(&y[..n]);
        work.jac.copy_from_slice(&y[n..]);
        let (v, dv) = grid_speeds(&work, closure, recon)?;
        for i in 0..n {
            out[i] = v[i];
            out[n + i] = dv[i] * y[n + i];
        }
        Ok(())
    };
    let mut y: Vec<f64> = g0.theta.iter().chain(&g0.jac).copied().collect();
    let mut grids = vec![g0.clone()];
    let mut t = g0.t;
    for s in 0..steps {
        y = ode::rk4_step(&mut rhs, t, &y, h)?;
        t += h;
        let mut g = g0.clone();
        g.theta.copy_from_slice(&y[..n]);
        g.jac.copy_from_slice(&y[n..]);
        g.t = t;
        if !g.ordered() {
            return Err(Error::Numerical(format!("characteristics crossed at t = {t:.6}")));
        }
        if (s + 1) % keep_every.max(1) == 0 || s + 1 == steps {
            grids.push(g);
        }
    }
    Ok(GridTrajectory { grids })
}

/// Transport an interval profile by moving its endpoints (fundamental pieces only for
/// the sector closure; the rotated copies follow by symmetry).
pub fn evolve_intervals(
    p0: &IntervalProfile,
    closure: Closure,
    modes: usize,
    t_span: f64,
    dt: f64,
) -> Result<Vec<(f64, IntervalProfile)>> {
    closure.check()?;
    if let Closure::Sector { m } = closure {
        if p0.symmetry != m {
            return Err(Error::Profile(format!(
                "profile symmetry {} does not match the closure's m = {m}",
                p0.symmetry
            )));
        }
    }
    let k = p0.pieces.len();
    let sym = p0.symmetry;
    let vals: Vec<f64> = p0.pieces.iter().map(|q| q.value).collect();
    let build = |y: &[f64]| -> Vec<Piece> {
        let mut out = Vec::with_capacity(k * sym);
        for j in 0..sym {
            let rot = TAU * j as f64 / sym as f64;
            for i in 0..k {
                out.push(Piece::new(y[2 * i] + rot, y[2 * i + 1] + rot, vals[i]));
            }
        }
        out
    };
    let mut rhs = |_t: f64, y: &[f64], out: &mut [f64]| -> Result<()> {
        let (v, _) = speeds_cells(closure, build(y), modes, y)?;
        out.copy_from_slice(&v);
        Ok(())
    };
    let mut y: Vec<f64> = p0.pieces.iter().flat_map(|q| [q.start, q.end]).collect();
    let steps = ode::step_count(t_span, dt);
    let h = t_span / steps as f64;
    let mut t = 0.0;
    let mut out = vec![(0.0, p0.clone())];
    for _ in 0..steps {
        y = ode::rk4_step(&mut rhs, t, &y, h)?;
        t += h;
        let pieces = (0..k).map(|i| Piece::new(y[2 * i], y[2 * i + 1], vals[i])).collect();
        let prof = IntervalProfile::new(pieces, sym)
            .map_err(|e| Error::Numerical(format!("profile degenerated at t = {t:.6}: {e}")))?;
        out.push((t, prof));
    }
    Ok(out)
}

/// Input to [`evolve_profile`].
#[derive(Clone, Debug)]
pub enum ProfileData {
    Intervals(IntervalProfile),
    Fourier { h: FourierProfile, m: usize },
}

/// Outcome of [`evolve_profile`]: interval snapshots or a characteristic-grid trajectory.
#[derive(Clone, Debug)]
pub enum ProfileRun {
    Intervals(Vec<(f64, IntervalProfile)>),
    Grid(GridTrajectory),
}

/// Default particle count for smooth data.
pub const DEFAULT_PARTICLES: usize = 1024;

/// Sector-closure transport of m-fold symmetric data (m ≥ 3).
pub fn evolve_profile(h0: &ProfileData, t_span: f64, dt: f64) -> Result<ProfileRun> {
    match h0 {
        ProfileData::Intervals(p) => {
            if p.symmetry < 3 {
                return Err(Error::SymmetryTooLow(p.symmetry));
            }
            Ok(ProfileRun::Intervals(evolve_intervals(p, Closure::Sector { m: p.symmetry }, 0, t_span, dt)?))
        }
        ProfileData::Fourier { h, m } => {
            if *m < 3 {
                return Err(Error::SymmetryTooLow(*m));
            }
            let off = h.off_symmetry_max(*m);
            if off > 1e-12 {
                return Err(Error::Profile(format!("data is not {m}-fold symmetric (off-mode {off:.2e})")));
            }
            let g = CharacteristicGrid::from_fourier(h, DEFAULT_PARTICLES);
            let modes = DEFAULT_PARTICLES / 4;
            Ok(ProfileRun::Grid(evolve_grid(
                &g,
                Closure::Sector { m: *m },
                Reconstruction::Spectral { modes },
                t_span,
                dt,
                (0.1 / dt).round().max(1.0) as usize,
            )?))
        }
    }
}

/// Spiral-closure transport; no symmetry needed.
pub fn evolve_spiral(h0: &ProfileData, c: f64, t_span: f64, dt: f64) -> Result<ProfileRun> {
    let closure = Closure::Spiral { c };
    closure.check()?;
    match h0 {
        ProfileData::Intervals(p) => Ok(ProfileRun::Intervals(evolve_intervals(&p.unrolled(), closure, 2048, t_span, dt)?)),
        ProfileData::Fourier { h, .. } => {
            let g = CharacteristicGrid::from_fourier(h, DEFAULT_PARTICLES);
            Ok(ProfileRun::Grid(evolve_grid(
                &g,
                closure,
                Reconstruction::Spectral { modes: DEFAULT_PARTICLES / 4 },
                t_span,
                dt,
                (0.1 / dt).round().max(1.0) as usize,
            )?))
        }
    }
}

/// `∫ H'² dθ` for the spiral stream of an interval profile; the profile measure obeys
/// `d|supp h|/dt = -8c ∫H'²` for unit-valued pieces.
pub fn spiral_dissipation(p: &IntervalProfile, c: f64, modes: usize) -> Result<f64> {
    let f = fourier_of_intervals(p, modes);
    let hs = spiral_invert(&f, c)?;
    let mut acc = 0.0;
    for k in 1..=modes {
        let kf = k as f64;
        acc += kf * kf * (hs.fourier.a[k].powi(2) + hs.fourier.b[k].powi(2));
    }
    Ok(PI * acc)
}

/// Spread `max(2H) - min(2H)` of the spiral speed on a uniform grid.
pub fn spiral_speed_variation(h: &FourierProfile, c: f64, samples: usize) -> Result<f64> {
    let hs = spiral_invert(h, c)?;
    let v: Vec<f64> = (0..samples).map(|j| 2.0 * hs.fourier.eval(-PI + TAU * j as f64 / samples as f64)).collect();
    Ok(v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlexanderState {
    pub theta: Vec<f64>,
    pub weights: Vec<f64>,
    pub c: f64,
    pub t: f64,
}

/// Default number of modes in the point-mass speed series.
pub const ALEXANDER_MODES: usize = 512;

impl AlexanderState {
    pub fn new(theta: Vec<f64>, weights: Vec<f64>, c: f64) -> Result<Self> {
        if theta.len() != weights.len() || theta.is_empty() {
            return Err(Error::State("need matching, nonempty positions and weights".into()));
        }
        if !(c > 0.0) {
            return Err(Error::Degenerate(format!("spiral pitch must be positive, got {c}")));
        }
        let s = AlexanderState { theta, weights, c, t: 0.0 };
        if let Some(d) = s.min_gap() {
            if d <= 1e-10 {
                return Err(Error::State("point masses must be distinct".into()));
            }
        }
        Ok(s)
    }

    /// `n` equal masses equally spaced from angle 0.
    pub fn equally_spaced(n: usize, w: f64, c: f64) -> Result<Self> {
        Self::new((0..n).map(|i| wrap(TAU * i as f64 / n as f64)).collect(), vec![w; n], c)
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Smallest circular distance between two masses.
    pub fn min_gap(&self) -> Option<f64> {
        let n = self.theta.len();
        if n < 2 {
            return None;
        }
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                let d = (self.theta[i] - self.theta[j]).rem_euclid(TAU);
                best = best.min(d.min(TAU - d));
            }
        }
        Some(best)
    }

    /// Counterclockwise gaps between consecutive masses, sorted by angle.
    pub fn gaps(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.theta.iter().map(|&x| x.rem_euclid(TAU)).collect();
        t.sort_by(|a, b| a.total_cmp(b));
        let n = t.len();
        (0..n).map(|i| if i + 1 < n { t[i + 1] - t[i] } else { t[0] + TAU - t[n - 1] }).collect()
    }
}

/// Speeds `2H(θᵢ)` with `H = Σ_k ĥ_k e^{ikθ} / D_k`, `ĥ_k = (1/2π) Σ wⱼ e^{-ikθⱼ}`.
pub fn alexander_speeds(s: &AlexanderState, modes: usize) -> Vec<f64> {
    let n = s.theta.len();
    let mut v = vec![s.total_weight() / (TAU * 4.0) * 2.0; n];
    for k in 1..=modes {
        let kf = k as f64;
        let (mut a, mut b) = (0.0, 0.0);
        for j in 0..n {
            let (sn, cs) = (kf * s.theta[j]).sin_cos();
            a += s.weights[j] * cs / PI;
            b += s.weights[j] * sn / PI;
        }
        let (p, q) = spiral_symbol(s.c, kf);
        let d2 = p * p + q * q;
        let ha = (a * p - b * q) / d2;
        let hb = (a * q + b * p) / d2;
        for i in 0..n {
            let (sn, cs) = (kf * s.theta[i]).sin_cos();
            v[i] += 2.0 * (ha * cs + hb * sn);
        }
    }
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlexanderRun {
    pub states: Vec<AlexanderState>,
    pub collided: bool,
}

impl AlexanderRun {
    /// CSV rows `t, i, theta_i, w_i`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,i,theta,w\n");
        for s in &self.states {
            for (i, (t, w)) in s.theta.iter().zip(&s.weights).enumerate() {
                out += &format!("{:.12e},{i},{t:.15e},{w:.15e}\n", s.t);
            }
        }
        out
    }
}

pub fn evolve_alexander(s0: &AlexanderState, t_span: f64, dt: f64) -> Result<AlexanderRun> {
    let steps = ode::step_count(t_span, dt);
    let h = t_span / steps as f64;
    let mut work = s0.clone();
    let mut rhs = |_t: f64, y: &[f64], out: &mut [f64]| -> Result<()> {
        work.theta.copy_from_slice(y);
        out.copy_from_slice(&alexander_speeds(&work, ALEXANDER_MODES));
        Ok(())
    };
    let mut y = s0.theta.clone();
    let mut t = s0.t;
    let mut states = vec![s0.clone()];
    for _ in 0..steps {
        y = ode::rk4_step(&mut rhs, t, &y, h)?;
        t += h;
        let mut s = s0.clone();
        s.theta = y.clone();
        s.t = t;
        let hit = s.min_gap().map(|d| d <= 1e-10).unwrap_or(false);
        states.push(s);
        if hit {
            return Ok(AlexanderRun { states, collided: true });
        }
    }
    Ok(AlexanderRun { states, collided: false })
}
