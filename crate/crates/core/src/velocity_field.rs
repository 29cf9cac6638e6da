//! Velocities and velocity gradients of patch vorticities.
//!
//! Three routes are provided: closed-form homogeneous formulas (`u = 2H x^⊥ - H' x`),
//! direct Biot–Savart quadrature, and the small-`r` radial expansion around the origin.
//!
//! The quadrature works in polar coordinates centred at the evaluation point `x`. Along
//! each ray `x + ρe(ψ)` the patch is a finite union of intervals `[ρ_a, ρ_b]`, so
//!
//! ```text
//! u(x)  = -(1/2π) ∫ e(ψ)^⊥ Σ (ρ_b - ρ_a) dψ
//! ∇u(x) = (1/2π) ∫ σ(e(ψ)) Σ ln(ρ_b/ρ_a) dψ + ½ [[0,-1],[1,0]] ω(x)
//! σ(e)  = [[2e₁e₂, e₂² - e₁²], [e₂² - e₁², -2e₁e₂]]
//! ```
//!
//! When `x` is interior every ray starts inside (`ρ_a = 0`); `σ` has zero mean on the
//! circle, so the divergent `ln ε` of a symmetric exclusion disc integrates to zero and the
//! principal value is obtained exactly by replacing `ln(ρ_b/ε)` with `ln ρ_b`.
//! The radial integrals are then done in closed form and only the angle is quadratured,
//! with breakpoints at every direction where the ray hits a vertex or grazes an arc.

use crate::angular_profile::IntervalProfile;
use crate::error::{Error, Result};
use crate::polar_elliptic::{SpiralStream, StreamProfile};
use crate::quad;
use std::f64::consts::{PI, TAU};

pub type Vec2 = [f64; 2];
pub type Mat2 = [[f64; 2]; 2];

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Disc { center: Vec2, radius: f64 },
    /// `{r0 < |y| < r1, a < arg y < b}`; `r0 = 0` gives a truncated sector with its corner at 0.
    Sector { r0: f64, r1: f64, a: f64, b: f64 },
    /// Simple polygon, either orientation.
    Polygon(Vec<Vec2>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub shape: Shape,
    pub amplitude: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PatchGeometry {
    pub components: Vec<Component>,
}

impl PatchGeometry {
    pub fn new(components: Vec<Component>) -> Self {
        PatchGeometry { components }
    }

    pub fn disc(center: Vec2, radius: f64, amplitude: f64) -> Self {
        Self::new(vec![Component { shape: Shape::Disc { center, radius }, amplitude }])
    }

    /// Stack of truncated sectors `r0 < |y| < r1` carrying the full interval profile.
    pub fn sector_stack(h: &IntervalProfile, r0: f64, r1: f64) -> Result<Self> {
        if !(r0 >= 0.0 && r1 > r0) {
            return Err(Error::Degenerate(format!("sector radii must satisfy 0 <= r0 < r1, got {r0}, {r1}")));
        }
        Ok(Self::new(
            h.full_pieces()
                .into_iter()
                .map(|q| Component { shape: Shape::Sector { r0, r1, a: q.start, b: q.end }, amplitude: q.value })
                .collect(),
        ))
    }

    pub fn polygon(vertices: Vec<Vec2>, amplitude: f64) -> Self {
        Self::new(vec![Component { shape: Shape::Polygon(vertices), amplitude }])
    }

    pub fn push(&mut self, shape: Shape, amplitude: f64) {
        self.components.push(Component { shape, amplitude });
    }

    /// Vorticity `ω(x)` (sum of amplitudes of the components containing `x`).
    pub fn vorticity(&self, x: Vec2) -> f64 {
        self.components.iter().filter(|c| inside(&c.shape, x)).map(|c| c.amplitude).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.components.iter().map(|c| c.amplitude.abs()).fold(0.0, f64::max)
    }

    /// Total circulation `∫ω`.
    pub fn circulation(&self) -> f64 {
        self.components
            .iter()
            .map(|c| {
                c.amplitude
                    * match &c.shape {
                        Shape::Disc { radius, .. } => PI * radius * radius,
                        Shape::Sector { r0, r1, a, b } => 0.5 * (b - a) * (r1 * r1 - r0 * r0),
                        Shape::Polygon(v) => crate::geometry::polygon_area(v).abs(),
                    }
            })
            .sum()
    }
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn in_arc(theta: f64, a: f64, b: f64) -> bool {
    (theta - a).rem_euclid(TAU) < b - a || b - a >= TAU
}

fn inside(shape: &Shape, p: Vec2) -> bool {
    match shape {
        Shape::Disc { center, radius } => (p[0] - center[0]).hypot(p[1] - center[1]) < *radius,
        Shape::Sector { r0, r1, a, b } => {
            let r = p[0].hypot(p[1]);
            r > *r0 && r < *r1 && in_arc(p[1].atan2(p[0]), *a, *b)
        }
        Shape::Polygon(v) => point_in_polygon(v, p),
    }
}

/// Even-odd point-in-polygon test.
pub fn point_in_polygon(v: &[Vec2], p: Vec2) -> bool {
    let n = v.len();
    let mut c = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (v[i], v[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let xint = b[0] + (p[1] - b[1]) * (a[0] - b[0]) / (a[1] - b[1]);
            if p[0] < xint {
                c = !c;
            }
        }
        j = i;
    }
    c
}

/// Roots `ρ` of `|x + ρe - c|² = R²`.
fn circle_hits(x: Vec2, e: Vec2, c: Vec2, r: f64, out: &mut Vec<f64>) {
    let d = [x[0] - c[0], x[1] - c[1]];
    let bq = d[0] * e[0] + d[1] * e[1];
    let cq = d[0] * d[0] + d[1] * d[1] - r * r;
    let disc = bq * bq - cq;
    if disc <= 0.0 {
        return;
    }
    let sq = disc.sqrt();
    let q = if bq > 0.0 { -(bq + sq) } else { -bq + sq };
    let r1 = q;
    let r2 = if q != 0.0 { cq / q } else { -bq - sq };
    for rho in [r1, r2] {
        if rho > 0.0 {
            out.push(rho);
        }
    }
}

/// Ray parameter where `x + ρe` crosses the segment `p → q` (half-open at `q`).
fn segment_hit(x: Vec2, e: Vec2, p: Vec2, q: Vec2) -> Option<f64> {
    let s = [q[0] - p[0], q[1] - p[1]];
    let den = cross(e, s);
    if den == 0.0 {
        return None;
    }
    let w = [p[0] - x[0], p[1] - x[1]];
    let rho = cross(w, s) / den;
    let lam = cross(w, e) / den;
    if rho > 0.0 && (0.0..1.0).contains(&lam) {
        Some(rho)
    } else {
        None
    }
}

/// Intervals of `ρ ≥ 0` with `x + ρe` inside the shape; appended as `(ρ_a, ρ_b)`.
fn ray_intervals(shape: &Shape, x: Vec2, e: Vec2, cand: &mut Vec<f64>, out: &mut Vec<(f64, f64)>) {
    cand.clear();
    match shape {
        Shape::Disc { center, radius } => {
            circle_hits(x, e, *center, *radius, cand);
            let start_in = inside(shape, x);
            cand.sort_by(|a, b| a.total_cmp(b));
            toggle(start_in, cand, out);
        }
        Shape::Polygon(v) => {
            let n = v.len();
            for i in 0..n {
                if let Some(r) = segment_hit(x, e, v[i], v[(i + 1) % n]) {
                    cand.push(r);
                }
            }
            let start_in = point_in_polygon(v, x);
            cand.sort_by(|a, b| a.total_cmp(b));
            toggle(start_in, cand, out);
        }
        Shape::Sector { r0, r1, a, b } => {
            if *r0 > 0.0 {
                circle_hits(x, e, [0.0, 0.0], *r0, cand);
            }
            circle_hits(x, e, [0.0, 0.0], *r1, cand);
            if b - a < TAU {
                for ang in [*a, *b] {
                    let d = [ang.cos(), ang.sin()];
                    let p = [r0 * d[0], r0 * d[1]];
                    let q = [r1 * d[0], r1 * d[1]];
                    if let Some(r) = segment_hit(x, e, p, q) {
                        cand.push(r);
                    }
                }
            }
            cand.sort_by(|a, b| a.total_cmp(b));
            let mut prev = 0.0;
            let mut open: Option<f64> = None;
            for k in 0..=cand.len() {
                let next = if k < cand.len() { cand[k] } else { prev + 2.0 * r1 + 1.0 };
                if next - prev > 0.0 {
                    let mid = 0.5 * (prev + next);
                    let pin = inside(shape, [x[0] + mid * e[0], x[1] + mid * e[1]]);
                    match (pin, open) {
                        (true, None) => open = Some(prev),
                        (false, Some(s)) => {
                            out.push((s, prev));
                            open = None;
                        }
                        _ => {}
                    }
                }
                prev = next;
            }
            if let Some(s) = open {
                out.push((s, prev));
            }
        }
    }
}

fn toggle(start_in: bool, cand: &[f64], out: &mut Vec<(f64, f64)>) {
    let mut inside = start_in;
    let mut s = 0.0;
    for &r in cand {
        if inside {
            out.push((s, r));
        } else {
            s = r;
        }
        inside = !inside;
    }
}

fn tangent_dirs(x: Vec2, c: Vec2, r: f64, out: &mut Vec<f64>) {
    let d = [c[0] - x[0], c[1] - x[1]];
    let dist = d[0].hypot(d[1]);
    let base = d[1].atan2(d[0]);
    out.push(base);
    if dist > r && r > 0.0 {
        let w = (r / dist).asin();
        out.push(base + w);
        out.push(base - w);
    }
}

fn dir_to(x: Vec2, p: Vec2, out: &mut Vec<f64>) {
    let d = [p[0] - x[0], p[1] - x[1]];
    if d[0] != 0.0 || d[1] != 0.0 {
        out.push(d[1].atan2(d[0]));
    }
}

/// Directions (seen from `x`) at which the ray integrands lose smoothness.
fn breakpoints(g: &PatchGeometry, x: Vec2) -> Vec<f64> {
    let mut out = Vec::new();
    for c in &g.components {
        match &c.shape {
            Shape::Disc { center, radius } => tangent_dirs(x, *center, *radius, &mut out),
            Shape::Polygon(v) => v.iter().for_each(|p| dir_to(x, *p, &mut out)),
            Shape::Sector { r0, r1, a, b } => {
                tangent_dirs(x, [0.0, 0.0], *r1, &mut out);
                if *r0 > 0.0 {
                    tangent_dirs(x, [0.0, 0.0], *r0, &mut out);
                }
                if b - a < TAU {
                    for ang in [*a, *b] {
                        let (s, co) = ang.sin_cos();
                        dir_to(x, [r1 * co, r1 * s], &mut out);
                        if *r0 > 0.0 {
                            dir_to(x, [r0 * co, r0 * s], &mut out);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Map breakpoints into `[ψ0, ψ0 + 2π)`.
fn fold_breaks(raw: &[f64], psi0: f64) -> Vec<f64> {
    let mut v: Vec<f64> = raw.iter().map(|b| psi0 + (b - psi0).rem_euclid(TAU)).collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Quadrature controls.
#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub tol: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { tol: 1e-11 }
    }
}

/// Velocity and velocity gradient at a point, with the achieved quadrature error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSample {
    pub u: Vec2,
    pub grad: Mat2,
    pub error: f64,
    pub converged: bool,
}

impl FieldSample {
    pub fn divergence(&self) -> f64 {
        self.grad[0][0] + self.grad[1][1]
    }
    pub fn curl(&self) -> f64 {
        self.grad[1][0] - self.grad[0][1]
    }
}

/// Velocity and gradient by ray quadrature around `x`.
///
/// `grad[i][j] = ∂_j u_i`. On a boundary the gradient is meaningless; the velocity is still valid.
pub fn field_sample(g: &PatchGeometry, x: Vec2, opt: QuadOptions) -> FieldSample {
    let raw = breakpoints(g, x);
    let psi0 = raw.first().copied().unwrap_or(0.0);
    let br = fold_breaks(&raw, psi0);
    let mut cand = Vec::new();
    let mut iv = Vec::new();
    let res = quad::integrate(
        |psi| {
            let (s, c) = psi.sin_cos();
            let e = [c, s];
            let (mut lin, mut lg) = (0.0, 0.0);
            for comp in &g.components {
                iv.clear();
                ray_intervals(&comp.shape, x, e, &mut cand, &mut iv);
                for &(a, b) in iv.iter() {
                    lin += comp.amplitude * (b - a);
                    lg += comp.amplitude * if a > 0.0 { (b / a).ln() } else { b.ln() };
                }
            }
            let s2 = 2.0 * c * s;
            let c2 = s * s - c * c;
            [s * lin, -c * lin, s2 * lg, c2 * lg]
        },
        psi0,
        psi0 + TAU,
        &br,
        opt.tol,
    );
    let v = res.value;
    let w = g.vorticity(x);
    let k = 1.0 / TAU;
    FieldSample {
        u: [k * v[0], k * v[1]],
        grad: [[k * v[2], k * v[3] - 0.5 * w], [k * v[3] + 0.5 * w, -k * v[2]]],
        error: res.error * k,
        converged: res.converged,
    }
}

/// Biot–Savart velocity by quadrature; flags non-convergence.
pub fn biot_savart_velocity(g: &PatchGeometry, x: Vec2) -> Result<Vec2> {
    let f = field_sample(g, x, QuadOptions::default());
    if !f.converged {
        return Err(Error::Quadrature { achieved: f.error });
    }
    Ok(f.u)
}

/// Velocity gradient `∂_j u_i` by principal-value quadrature plus the exact skew part.
pub fn velocity_gradient(g: &PatchGeometry, x: Vec2) -> Result<Mat2> {
    let f = field_sample(g, x, QuadOptions::default());
    if !f.converged {
        return Err(Error::Quadrature { achieved: f.error });
    }
    Ok(f.grad)
}

/// Angular stream factor with first derivative.
pub trait AngularStream {
    fn h(&self, theta: f64) -> f64;
    fn dh(&self, theta: f64) -> f64;
}

impl AngularStream for StreamProfile {
    fn h(&self, theta: f64) -> f64 {
        self.value(theta)
    }
    fn dh(&self, theta: f64) -> f64 {
        self.d1(theta)
    }
}

impl AngularStream for crate::polar_elliptic::Ks1Stream {
    fn h(&self, theta: f64) -> f64 {
        self.value(theta)
    }
    fn dh(&self, theta: f64) -> f64 {
        self.d1(theta)
    }
}

/// `u = 2H(θ) x^⊥ - H'(θ) x` for `Ψ = r² H(θ)`; zero at the origin.
pub fn homogeneous_velocity<S: AngularStream + ?Sized>(hs: &S, x: Vec2) -> Vec2 {
    if x[0] == 0.0 && x[1] == 0.0 {
        return [0.0, 0.0];
    }
    let th = x[1].atan2(x[0]);
    let (h, dh) = (hs.h(th), hs.dh(th));
    [-2.0 * h * x[1] - dh * x[0], 2.0 * h * x[0] - dh * x[1]]
}

/// Velocity of `Ψ = r² H(c ln(1/r) + θ)`: `u_r = -rH'`, `u_θ = 2rH - crH'`, both at `ξ = c ln(1/r) + θ`.
pub fn spiral_velocity(hs: &SpiralStream, x: Vec2) -> Vec2 {
    let r = x[0].hypot(x[1]);
    if r == 0.0 {
        return [0.0, 0.0];
    }
    let th = x[1].atan2(x[0]);
    let xi = hs.c * (1.0 / r).ln() + th;
    let h = hs.fourier.eval_deriv(xi, 0);
    let dh = hs.fourier.eval_deriv(xi, 1);
    let ur = -r * dh;
    let ut = 2.0 * r * h - hs.c * r * dh;
    let (s, c) = th.sin_cos();
    [ur * c - ut * s, ur * s + ut * c]
}

/// Velocity of `Ψ = r²H(θ) + r² ln(1/r) G(θ)`: `u_r = -r(H' + LG')`, `u_θ = r(2H + 2LG - G)`, `L = ln(1/r)`.
pub fn sector_velocity(sp: &StreamProfile, x: Vec2) -> Vec2 {
    let r = x[0].hypot(x[1]);
    if r == 0.0 {
        return [0.0, 0.0];
    }
    let th = x[1].atan2(x[0]);
    let l = (1.0 / r).ln();
    let (s2, c2) = (2.0 * th).sin_cos();
    let g = sp.c * c2 + sp.s * s2;
    let dg = 2.0 * (sp.s * c2 - sp.c * s2);
    let ur = -r * (sp.d1(th) + l * dg);
    let ut = r * (2.0 * sp.value(th) + 2.0 * l * g - g);
    let (s, c) = th.sin_cos();
    [ur * c - ut * s, ur * s + ut * c]
}

/// Largest spectral norm of the finite-difference gradient of `f` over `n` points of the
/// circle `|x| = r`.
pub fn sup_gradient_on_circle<F: Fn(Vec2) -> Vec2>(f: F, r: f64, n: usize, rel: f64) -> f64 {
    (0..n)
        .map(|j| {
            let (s, c) = (TAU * (j as f64 + 0.5) / n as f64).sin_cos();
            spectral_norm(&fd_gradient(&f, [r * c, r * s], rel))
        })
        .fold(0.0, f64::max)
}

/// Least-squares slope of each `∂_j u_i(r e)` against `ln(1/r)` over the given radii:
/// the observed coefficient of `ln(1/|x|)` along direction `e`.
pub fn log_gradient_fit(g: &PatchGeometry, e: Vec2, radii: &[f64]) -> Result<Mat2> {
    if radii.len() < 2 {
        return Err(Error::Degenerate("a decade fit needs at least two radii".into()));
    }
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        rows.push(((1.0 / r).ln(), velocity_gradient(g, [r * e[0], r * e[1]])?));
    }
    let n = rows.len() as f64;
    let mx = rows.iter().map(|p| p.0).sum::<f64>() / n;
    let sxx: f64 = rows.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let my = rows.iter().map(|p| p.1[i][j]).sum::<f64>() / n;
            out[i][j] = rows.iter().map(|p| (p.0 - mx) * (p.1[i][j] - my)).sum::<f64>() / sxx;
        }
    }
    Ok(out)
}

/// Central-difference gradient `∂_j u_i` of a velocity field with relative step `rel`.
pub fn fd_gradient<F: Fn(Vec2) -> Vec2>(f: F, x: Vec2, rel: f64) -> Mat2 {
    let h = rel * x[0].hypot(x[1]).max(1e-300);
    let mut g = [[0.0; 2]; 2];
    for j in 0..2 {
        let mut p = x;
        let mut m = x;
        p[j] += h;
        m[j] -= h;
        let (up, um) = (f(p), f(m));
        for i in 0..2 {
            g[i][j] = (up[i] - um[i]) / (2.0 * h);
        }
    }
    g
}

/// Spectral norm of a 2×2 matrix.
pub fn spectral_norm(m: &Mat2) -> f64 {
    let a = m[0][0] * m[0][0] + m[1][0] * m[1][0];
    let d = m[0][1] * m[0][1] + m[1][1] * m[1][1];
    let b = m[0][0] * m[0][1] + m[1][0] * m[1][1];
    let tr = a + d;
    let det = a * d - b * b;
    (0.5 * (tr + (tr * tr - 4.0 * det).max(0.0).sqrt())).sqrt()
}

/// Coefficient of `ln(1/|x|)` in `∇u` for log mode `(c, s)`.
pub fn sector_log_gradient(c: f64, s: f64) -> Mat2 {
    [[-2.0 * s, 2.0 * c], [2.0 * c, 2.0 * s]]
}

/// Unit eigenvectors of the log-gradient matrix, `(c, s + √(s²+c²))` for eigenvalue
/// `+2√(s²+c²)` and `(s + √(s²+c²), -c)` for `-2√(s²+c²)`.
pub fn separatrices(c: f64, s: f64) -> Result<(Vec2, Vec2)> {
    let r = c.hypot(s);
    if r == 0.0 {
        return Err(Error::Degenerate("no separatrices: (c, s) = (0, 0)".into()));
    }
    let w = s + r;
    if w.abs() <= 1e-14 * r {
        return Ok(([0.0, 1.0], [1.0, 0.0]));
    }
    let n = c.hypot(w);
    Ok(([c / n, w / n], [w / n, -c / n]))
}

/// The small-`r` expansion around the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialExpansion {
    pub u0: Vec2,
    pub is: f64,
    pub ic: f64,
    pub measured: Vec2,
    pub predicted: Vec2,
    pub residual: Vec2,
    /// `|residual| / (r ‖ω‖_∞)`.
    pub scaled_residual: f64,
}

/// `I^s(r), I^c(r) = ∫_{|y|>r} (sin 2φ, cos 2φ) ω(y) / |y|² dy` by rays from the origin.
pub fn key_integrals(g: &PatchGeometry, r: f64, opt: QuadOptions) -> (f64, f64, f64) {
    let o = [0.0, 0.0];
    let raw = breakpoints(g, o);
    let psi0 = raw.first().copied().unwrap_or(0.0);
    let br = fold_breaks(&raw, psi0);
    let mut cand = Vec::new();
    let mut iv = Vec::new();
    let res = quad::integrate(
        |phi| {
            let (s, c) = phi.sin_cos();
            let mut lg = 0.0;
            for comp in &g.components {
                iv.clear();
                ray_intervals(&comp.shape, o, [c, s], &mut cand, &mut iv);
                for &(a, b) in iv.iter() {
                    let a = a.max(r);
                    if b > a {
                        lg += comp.amplitude * (b / a).ln();
                    }
                }
            }
            [(2.0 * phi).sin() * lg, (2.0 * phi).cos() * lg]
        },
        psi0,
        psi0 + TAU,
        &br,
        opt.tol,
    );
    (res.value[0], res.value[1], res.error)
}

/// Velocity at the origin, `u(0) = (1/2π)(∫∫ sin φ ω dρ dφ, -∫∫ cos φ ω dρ dφ)`.
pub fn origin_velocity(g: &PatchGeometry) -> Result<Vec2> {
    biot_savart_velocity(g, [0.0, 0.0])
}

pub fn radial_expansion(g: &PatchGeometry, x: Vec2) -> Result<RadialExpansion> {
    let r = x[0].hypot(x[1]);
    if r == 0.0 {
        return Err(Error::Degenerate("radial expansion needs x != 0".into()));
    }
    let opt = QuadOptions::default();
    let u0 = origin_velocity(g)?;
    let (is, ic, err) = key_integrals(g, r, opt);
    if !err.is_finite() {
        return Err(Error::Quadrature { achieved: err });
    }
    let measured = biot_savart_velocity(g, x)?;
    let (s, c) = (x[1] / r, x[0] / r);
    let k = r / TAU;
    let predicted = [u0[0] + k * (c * is - s * ic), u0[1] + k * (-s * is - c * ic)];
    let residual = [measured[0] - predicted[0], measured[1] - predicted[1]];
    let sup = g.sup_norm().max(1e-300);
    Ok(RadialExpansion {
        u0,
        is,
        ic,
        measured,
        predicted,
        residual,
        scaled_residual: residual[0].hypot(residual[1]) / (r * sup),
    })
}

/// `I = (4/π) ∫_{[2x₁,1]×[2x₂,1]} y₁y₂ ω(y) / |y|⁴ dy`, integrating `y₂` in closed form.
pub fn quadrant_integral(g: &PatchGeometry, x: Vec2) -> Result<f64> {
    if !(x[0] > 0.0 && x[0] <= 0.5 && x[1] > 0.0 && x[1] <= 0.5) {
        return Err(Error::Degenerate(format!("quadrant point must lie in (0, 1/2]², got {x:?}")));
    }
    let (lo1, lo2) = (2.0 * x[0], 2.0 * x[1]);
    let mut br = Vec::new();
    for c in &g.components {
        match &c.shape {
            Shape::Disc { center, radius } => br.extend([center[0] - radius, center[0] + radius]),
            Shape::Polygon(v) => br.extend(v.iter().map(|p| p[0])),
            Shape::Sector { r0, r1, a, b } => {
                for ang in [*a, *b] {
                    br.extend([r0 * ang.cos(), r1 * ang.cos()]);
                }
                for ang in [0.0, PI] {
                    if in_arc(ang, *a, *b) {
                        br.extend([r0 * ang.cos(), r1 * ang.cos()]);
                    }
                }
            }
        }
    }
    let mut cand = Vec::new();
    let mut iv = Vec::new();
    let res = quad::integrate(
        |y1| {
            let mut acc = 0.0;
            let prim = |y2: f64| -y1 / (2.0 * (y1 * y1 + y2 * y2));
            for comp in &g.components {
                iv.clear();
                ray_intervals(&comp.shape, [y1, lo2], [0.0, 1.0], &mut cand, &mut iv);
                for &(a, b) in iv.iter() {
                    let ya = lo2 + a;
                    let yb = (lo2 + b).min(1.0);
                    if yb > ya {
                        acc += comp.amplitude * (prim(yb) - prim(ya));
                    }
                }
            }
            [acc]
        },
        lo1,
        1.0,
        &br,
        1e-12,
    );
    if !res.converged {
        return Err(Error::Quadrature { achieved: res.error });
    }
    Ok(4.0 / PI * res.value[0])
}
