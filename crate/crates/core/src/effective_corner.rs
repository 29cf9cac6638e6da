//! Reduced models for a corner in the rescaled time `τ = t ln(1/r)`.
//!
//! All systems carry `1/τ` prefactors multiplying history integrals. Each is augmented
//! with the integral as an extra state component and integrated by RK4; at `τ = 0`
//! the average `(1/τ)∫₀^τ f` is replaced by its limit `f(0)`.
//!
//! Sign convention for the odd corner: `sign = +1` is the expanding case (vorticity
//! negative on the first quadrant), `sign = -1` the contracting one.

use crate::error::{Error, Result};
use crate::ode;
use std::f64::consts::{FRAC_PI_2, PI};

/// Average `J/τ`, continuous at `τ = 0`.
fn avg(j: f64, tau: f64, at_zero: f64) -> f64 {
    if tau == 0.0 {
        at_zero
    } else {
        j / tau
    }
}

fn run<F>(y0: Vec<f64>, t_span: f64, dtau: f64, mut f: F, mut stop: impl FnMut(&[f64]) -> bool) -> Result<(Vec<(f64, Vec<f64>)>, bool)>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    if !(dtau > 0.0) || !(t_span > 0.0) {
        return Err(Error::State("need dτ > 0 and T > 0".into()));
    }
    let n = ode::step_count(t_span, dtau);
    let h = t_span / n as f64;
    let mut y = y0;
    let mut out = vec![(0.0, y.clone())];
    for i in 0..n {
        let t = i as f64 * h;
        y = ode::rk4_step(&mut f, t, &y, h)?;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite state at τ = {:.6}", t + h)));
        }
        out.push(((i + 1) as f64 * h, y.clone()));
        if stop(&y) {
            return Ok((out, true));
        }
    }
    Ok((out, false))
}

// ---------------------------------------------------------------- odd Fourier system

/// Coefficients `g_k` of `sin(2kθ)`, `k = 1..N` (stored from index 0), and `J = ∫₀^τ g₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct OddFourierState {
    pub g: Vec<f64>,
    pub j: f64,
    pub tau: f64,
}

/// Default truncation.
pub const ODD_FOURIER_MODES: usize = 128;

impl OddFourierState {
    pub fn new(g: Vec<f64>) -> Self {
        OddFourierState { g, j: 0.0, tau: 0.0 }
    }

    /// `g_k = C/k` on odd `k`: the stationary Bahouri–Chemin profile `(πC/4) sgn(sin 2θ)`.
    pub fn bahouri_chemin(c: f64, n: usize) -> Self {
        Self::new((1..=n).map(|k| if k % 2 == 1 { c / k as f64 } else { 0.0 }).collect())
    }

    /// Corner data `∓(1 on (0,A₀)∪(π,π+A₀), -1 on (-A₀,0)∪(π-A₀,π))`; `sign = +1` gives the
    /// expanding case (negative on the first quadrant).
    pub fn corner(a0: f64, sign: f64, n: usize) -> Self {
        let s = -sign;
        Self::new((1..=n).map(|k| s * 2.0 / (PI * k as f64) * (1.0 - (2.0 * k as f64 * a0).cos())).collect())
    }

    pub fn eval(&self, theta: f64) -> f64 {
        // sin(2kθ) by rotation recurrence
        let (s1, c1) = (2.0 * theta).sin_cos();
        let (mut s, mut c) = (0.0, 1.0);
        let mut acc = 0.0;
        for gk in &self.g {
            let ns = s * c1 + c * s1;
            c = c * c1 - s * s1;
            s = ns;
            acc += gk * s;
        }
        acc
    }

    /// The half-level crossing `g = level` on `(0, π/2)` nearest `guess`.
    pub fn edge(&self, level: f64, guess: f64) -> Option<f64> {
        let n = 4096;
        let f = |t: f64| self.eval(t) - level;
        let grid: Vec<f64> = (0..=n).map(|i| FRAC_PI_2 * i as f64 / n as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
        let mut best: Option<f64> = None;
        for i in 0..n {
            if vals[i] == 0.0 || vals[i].signum() != vals[i + 1].signum() {
                let (mut a, mut b, mut fa) = (grid[i], grid[i + 1], vals[i]);
                for _ in 0..60 {
                    let mid = 0.5 * (a + b);
                    let fm = f(mid);
                    if fm.signum() == fa.signum() {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                let r = 0.5 * (a + b);
                if best.map(|x| (r - guess).abs() < (x - guess).abs()).unwrap_or(true) {
                    best = Some(r);
                }
            }
        }
        best
    }

    fn to_vec(&self) -> Vec<f64> {
        let mut v = self.g.clone();
        v.push(self.j);
        v
    }
}

/// `ġ_k = (1/(2τ)) J ((k-1)g_{k-1} - (k+1)g_{k+1})`, `J' = g₁`, with `g₀ = g_{N+1} = 0`.
///
/// The prefactor is the one the formal transport model implies for the normalization
/// `g = Σ g_k sin 2kθ` (`∫ sin2θ g = π g₁`).
pub fn odd_fourier_rhs(tau: f64, y: &[f64], out: &mut [f64]) {
    let n = y.len() - 1;
    let pre = 0.5 * avg(y[n], tau, y[0]);
    for i in 0..n {
        let k = (i + 1) as f64;
        let lo = if i > 0 { (k - 1.0) * y[i - 1] } else { 0.0 };
        let hi = if i + 1 < n { (k + 1.0) * y[i + 1] } else { 0.0 };
        out[i] = pre * (lo - hi);
    }
    out[n] = y[0];
}

pub fn odd_fourier_step(state: &OddFourierState, dtau: f64) -> OddFourierState {
    let mut f = |t: f64, y: &[f64], o: &mut [f64]| -> std::result::Result<(), std::convert::Infallible> {
        odd_fourier_rhs(t, y, o);
        Ok(())
    };
    let Ok(y) = ode::rk4_step(&mut f, state.tau, &state.to_vec(), dtau);
    let n = state.g.len();
    OddFourierState { g: y[..n].to_vec(), j: y[n], tau: state.tau + dtau }
}

/// Integrate to `τ = T`; keeps every `keep_every`-th state.
pub fn odd_fourier_integrate(s0: &OddFourierState, t_span: f64, dtau: f64, keep_every: usize) -> Vec<OddFourierState> {
    let n = ode::step_count(t_span, dtau);
    let h = t_span / n as f64;
    let mut s = s0.clone();
    let mut out = vec![s.clone()];
    for i in 0..n {
        s = odd_fourier_step(&s, h);
        if (i + 1) % keep_every.max(1) == 0 || i + 1 == n {
            out.push(s.clone());
        }
    }
    out
}

/// Edge angle of a corner-data run, tracked by the half-level crossing nearest the
/// previous edge.
pub fn odd_fourier_edges(run: &[OddFourierState], a0: f64, sign: f64) -> Vec<(f64, Option<f64>)> {
    let level = -sign * 0.5;
    let mut prev = a0;
    run.iter()
        .map(|s| {
            let e = s.edge(level, prev);
            if let Some(x) = e {
                prev = x;
            }
            (s.tau, e)
        })
        .collect()
}

// ---------------------------------------------------------------- odd corner

#[derive(Clone, Debug, PartialEq)]
pub struct OddCornerState {
    pub a: f64,
    /// `π/2 - A`, carried separately so the expanding case keeps relative precision.
    pub rest: f64,
    pub j: f64,
    pub tau: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OddCornerRun {
    pub sign: f64,
    pub states: Vec<OddCornerState>,
}

fn check_sign(sign: f64) -> Result<()> {
    if sign == 1.0 || sign == -1.0 {
        Ok(())
    } else {
        Err(Error::State(format!("sign must be ±1, got {sign}")))
    }
}

/// `Ȧ = ±(sin 2A / πτ) J`, `J' = 1 - cos 2A`.
pub fn odd_corner_integrate(a0: f64, sign: f64, t_span: f64, dtau: f64) -> Result<OddCornerRun> {
    check_sign(sign)?;
    if !(a0 > 0.0 && a0 < FRAC_PI_2) {
        return Err(Error::State(format!("A0 must lie in (0, π/2), got {a0}")));
    }
    // The state variable is the distance to the attracting end: A itself when
    // contracting, δ = π/2 - A when expanding (δ' = -sin2δ J/(πτ), 1 - cos2A = 1 + cos2δ).
    let s = sign;
    let f = |t: f64, y: &[f64], o: &mut [f64]| -> Result<()> {
        let w = 1.0 + s * (2.0 * y[0]).cos();
        o[0] = -(2.0 * y[0]).sin() / PI * avg(y[1], t, w);
        o[1] = w;
        Ok(())
    };
    let x0 = if s > 0.0 { FRAC_PI_2 - a0 } else { a0 };
    let (rows, _) = run(vec![x0, 0.0], t_span, dtau, f, |_| false)?;
    let states = rows
        .into_iter()
        .map(|(tau, y)| {
            let (a, rest) = if s > 0.0 { (FRAC_PI_2 - y[0], y[0]) } else { (y[0], FRAC_PI_2 - y[0]) };
            OddCornerState { a, rest, j: y[1], tau }
        })
        .collect();
    Ok(OddCornerRun { sign, states })
}

impl OddCornerRun {
    pub fn at(&self, tau: f64) -> &OddCornerState {
        let i = self.states.partition_point(|s| s.tau < tau - 1e-9);
        &self.states[i.min(self.states.len() - 1)]
    }

    /// Largest `c` and smallest `C` with `c/(1+τ) ≤ A ≤ C/(1+√τ)` on the window.
    pub fn decay_bounds(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut c = f64::INFINITY;
        let mut cc = 0.0f64;
        for s in self.states.iter().filter(|s| s.tau >= lo && s.tau <= hi) {
            c = c.min(s.a * (1.0 + s.tau));
            cc = cc.max(s.a * (1.0 + s.tau.sqrt()));
        }
        (c, cc)
    }

    /// Least-squares slope of `ln A` against `ln τ` on the window.
    pub fn loglog_slope(&self, lo: f64, hi: f64) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .states
            .iter()
            .filter(|s| s.tau >= lo && s.tau <= hi && s.tau > 0.0)
            .map(|s| (s.tau.ln(), s.a.ln()))
            .collect();
        slope(&pts)
    }

    /// Largest `c` with `π/2 - A ≤ e^{-cτ}` on the window.
    pub fn expansion_rate(&self, lo: f64, hi: f64) -> f64 {
        self.states
            .iter()
            .filter(|s| s.tau >= lo && s.tau <= hi && s.tau > 0.0)
            .map(|s| -s.rest.ln() / s.tau)
            .fold(f64::INFINITY, f64::min)
    }

    /// Least-squares fit `ln(π/2 - A) ≈ α - κτ` on the window: returns `κ` and the RMS
    /// residual divided by the spread of `ln(π/2 - A)` over the window.
    pub fn exponential_fit(&self, lo: f64, hi: f64) -> (f64, f64) {
        let pts: Vec<(f64, f64)> =
            self.states.iter().filter(|s| s.tau >= lo && s.tau <= hi).map(|s| (s.tau, s.rest.ln())).collect();
        let k = slope(&pts);
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let rms = (pts.iter().map(|p| (p.1 - my - k * (p.0 - mx)).powi(2)).sum::<f64>() / n).sqrt();
        let lo_v = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let hi_v = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        (-k, rms / (hi_v - lo_v))
    }

    /// Largest unit-τ increment `J(τ+1) - J(τ)` for `τ ≥ from`.
    pub fn tail_increment(&self, from: f64) -> f64 {
        let mut worst = 0.0f64;
        for s in self.states.iter().filter(|s| s.tau >= from) {
            let next = self.at(s.tau + 1.0);
            if next.tau > s.tau + 0.5 {
                worst = worst.max(next.j - s.j);
            }
        }
        worst
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,A,J\n");
        for s in &self.states {
            out += &format!("{:.10e},{:.15e},{:.15e}\n", s.tau, s.a, s.j);
        }
        out
    }
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Outcome of a second-order run: rows `(τ, x, ẋ)` and a halt note if the printed
/// denominator became too small.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondOrderRun {
    pub rows: Vec<(f64, Vec<f64>)>,
    pub halted: Option<String>,
}

/// Smallest admissible `|sin a|` (or `|sin 2B cos 2B|`) in the second-order forms.
pub const DENOMINATOR_FLOOR: f64 = 1e-6;

/// `ä = cot a ȧ² - (ȧ ∓ (2/π) sin a (1 - cos a))/τ` for `a = 2A`; rows hold `(a, ȧ)`.
pub fn odd_corner_second_order(a0: f64, sign: f64, t_span: f64, dtau: f64) -> Result<SecondOrderRun> {
    check_sign(sign)?;
    if !(a0 > 0.0 && a0 < FRAC_PI_2) {
        return Err(Error::State(format!("A0 must lie in (0, π/2), got {a0}")));
    }
    let src = move |a: f64| sign * 2.0 / PI * a.sin() * (1.0 - a.cos());
    let dsrc = move |a: f64| sign * 2.0 / PI * (a.cos() * (1.0 - a.cos()) + a.sin().powi(2));
    let f = |t: f64, y: &[f64], o: &mut [f64]| -> Result<()> {
        let (a, ad) = (y[0], y[1]);
        if a.sin().abs() < DENOMINATOR_FLOOR {
            return Err(Error::Numerical("sin a vanished".into()));
        }
        let quad = a.cos() / a.sin() * ad * ad;
        o[0] = ad;
        // at τ = 0, (ȧ - S(a))/τ → ä - S'(a)ȧ
        o[1] = if t == 0.0 { 0.5 * (quad + dsrc(a) * ad) } else { quad - (ad - src(a)) / t };
        Ok(())
    };
    let a = 2.0 * a0;
    match run(vec![a, src(a)], t_span, dtau, f, |y| y[0].sin().abs() < DENOMINATOR_FLOOR) {
        Ok((rows, hit)) => Ok(SecondOrderRun {
            rows,
            halted: hit.then(|| "sin a fell below 1e-6; use the integro-differential form".to_string()),
        }),
        Err(Error::Numerical(msg)) => Err(Error::Numerical(format!("{msg}; use the integro-differential form"))),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------- single corner

#[derive(Clone, Debug, PartialEq)]
pub struct SingleCornerState {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub q: f64,
    pub tau: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingleCornerRun {
    pub states: Vec<SingleCornerState>,
    /// Set when `B` reached the floor and the run was truncated.
    pub asymptote: Option<f64>,
}

/// Width floor at which single-corner runs stop.
pub const WIDTH_FLOOR: f64 = 1e-8;

/// `(A', B', P', Q')` of the augmented single-corner system.
pub fn single_corner_rhs(tau: f64, y: &[f64]) -> [f64; 4] {
    let (a, b) = (y[0], y[1]);
    let (s2a, c2a) = (2.0 * a).sin_cos();
    let (s2b, c2b) = (2.0 * b).sin_cos();
    let p = avg(y[2], tau, s2b * s2a);
    let q = avg(y[3], tau, s2b * c2a);
    let db = -(s2b * c2a * p - s2b * s2a * q) / PI;
    let da = -(c2b * s2a * p + c2b * c2a * q) / PI;
    [da, db, s2b * s2a, s2b * c2a]
}

pub fn single_corner_integrate(a0: f64, b0: f64, t_span: f64, dtau: f64) -> Result<SingleCornerRun> {
    if !(b0 > 0.0 && b0 < PI / 4.0) {
        return Err(Error::State(format!("B0 must lie in (0, π/4), got {b0}")));
    }
    let f = |t: f64, y: &[f64], o: &mut [f64]| -> Result<()> {
        o.copy_from_slice(&single_corner_rhs(t, y));
        Ok(())
    };
    let (rows, hit) = run(vec![a0, b0, 0.0, 0.0], t_span, dtau, f, |y| y[1] <= WIDTH_FLOOR)?;
    let states: Vec<SingleCornerState> =
        rows.into_iter().map(|(tau, y)| SingleCornerState { a: y[0], b: y[1], p: y[2], q: y[3], tau }).collect();
    let asymptote = hit.then(|| states.last().map(|s| s.tau).unwrap_or(0.0));
    Ok(SingleCornerRun { states, asymptote })
}

impl SingleCornerRun {
    pub fn last(&self) -> &SingleCornerState {
        self.states.last().expect("run holds the initial state")
    }

    /// First time `B` drops below `b_tol` and `A` stays within `a_tol` of its final value
    /// afterwards; the final `A` serves as `A∞`.
    pub fn settle_time(&self, a_tol: f64, b_tol: f64) -> Option<f64> {
        let a_inf = self.last().a;
        let mut t = None;
        for s in self.states.iter().rev() {
            if s.b < b_tol && (s.a - a_inf).abs() < a_tol {
                t = Some(s.tau);
            } else {
                break;
            }
        }
        t
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,A,B,P,Q\n");
        for s in &self.states {
            out += &format!("{:.10e},{:.15e},{:.15e},{:.15e},{:.15e}\n", s.tau, s.a, s.b, s.p, s.q);
        }
        out
    }
}

/// Second-order single-corner system; rows hold `(B, A, B', A')`.
pub fn single_corner_second_order(a0: f64, b0: f64, t_span: f64, dtau: f64) -> Result<SecondOrderRun> {
    if !(b0 > 0.0 && b0 < PI / 4.0) {
        return Err(Error::State(format!("B0 must lie in (0, π/4), got {b0}")));
    }
    // F₀ = -(1/π)(0, cos2B sin2B); G = (2/(sin2B cos2B)) (cos²2B B'² - sin²2B A'², (cos²2B - sin²2B) B'A')
    let f0 = |b: f64| -(2.0 * b).sin() * (2.0 * b).cos() / PI;
    let g = |b: f64, db: f64, da: f64| -> [f64; 2] {
        let (s, c) = (2.0 * b).sin_cos();
        let w = 2.0 / (s * c);
        [w * (c * c * db * db - s * s * da * da), w * (c * c - s * s) * db * da]
    };
    let f = |t: f64, y: &[f64], o: &mut [f64]| -> Result<()> {
        let (b, db, da) = (y[0], y[2], y[3]);
        let den = ((2.0 * b).sin() * (2.0 * b).cos()).abs();
        if den < DENOMINATOR_FLOOR {
            return Err(Error::Numerical("sin2B cos2B vanished".into()));
        }
        let gg = g(b, db, da);
        o[0] = db;
        o[1] = da;
        if t == 0.0 {
            // (F₀ - X')/τ → ∂_B F₀ B' - X''
            let dfb = -2.0 * (4.0 * b).cos() / PI;
            o[2] = 0.5 * gg[0];
            o[3] = 0.5 * (dfb * db + gg[1]);
        } else {
            o[2] = -db / t + gg[0];
            o[3] = (f0(b) - da) / t + gg[1];
        }
        Ok(())
    };
    let y0 = vec![b0, a0, 0.0, f0(b0)];
    match run(y0, t_span, dtau, f, |y| ((2.0 * y[0]).sin() * (2.0 * y[0]).cos()).abs() < DENOMINATOR_FLOOR) {
        Ok((rows, hit)) => Ok(SecondOrderRun {
            rows,
            halted: hit.then(|| "sin2B cos2B fell below 1e-6; use the integro-differential form".to_string()),
        }),
        Err(Error::Numerical(msg)) => Err(Error::Numerical(format!("{msg}; use the integro-differential form"))),
        Err(e) => Err(e),
    }
}
