//! Contour dynamics for piecewise-constant vorticity.
//!
//! For a counterclockwise loop `∂Ω` carrying vorticity `ω`, the divergence theorem turns
//! the Biot–Savart integral into `u(x) = -(ω/2π) ∮ ln|x - y| dy`. Along a straight segment
//! the integral has the closed form `F(L-w) - F(-w)` with
//! `F(z) = ½ z ln(z² + d²) - z + d atan(z/d)`, where `w` and `d` are the along- and
//! cross-segment coordinates of `x`. Nothing is quadrature, so there is no near-singular
//! regime to subdivide.
//!
//! Symmetric patches store only one fundamental set of loops. Rotational images give
//! `u(x) = Σ_j R_j u₀(R_j⁻¹x)`; odd-odd images (reflections `S` carrying vorticity
//! `det S · ω`) give `u(x) = Σ_S S u₀(Sx)`.

use crate::error::{Error, Result};
use crate::geometry::{clip_convex, polygon_area, self_intersection};
use crate::ode;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

pub type Vec2 = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    None,
    Rotation(usize),
    OddOdd,
}

impl Symmetry {
    fn images(&self) -> Vec<[[f64; 2]; 2]> {
        match *self {
            Symmetry::None => vec![[[1.0, 0.0], [0.0, 1.0]]],
            Symmetry::Rotation(m) => (0..m.max(1))
                .map(|j| {
                    let (s, c) = (TAU * j as f64 / m as f64).sin_cos();
                    [[c, -s], [s, c]]
                })
                .collect(),
            Symmetry::OddOdd => vec![
                [[1.0, 0.0], [0.0, 1.0]],
                [[-1.0, 0.0], [0.0, 1.0]],
                [[1.0, 0.0], [0.0, -1.0]],
                [[-1.0, 0.0], [0.0, -1.0]],
            ],
        }
    }

    fn count(&self) -> usize {
        self.images().len()
    }

    /// Whether `u(0) = 0` is forced, so corner nodes at the origin may be pinned.
    pub fn pins_origin(&self) -> bool {
        matches!(self, Symmetry::Rotation(m) if *m >= 2) || matches!(self, Symmetry::OddOdd)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub p: Vec2,
    pub corner: bool,
    /// Marked particle; never removed by remeshing.
    pub tag: Option<u32>,
}

impl Node {
    pub fn plain(p: Vec2) -> Self {
        Node { p, corner: false, tag: None }
    }
}

/// Spacing targets: `h₀` next to a corner, growing geometrically by `ratio` up to `h_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grading {
    pub h0: f64,
    pub ratio: f64,
    pub h_max: f64,
}

impl Grading {
    pub fn uniform(h: f64) -> Self {
        Grading { h0: h, ratio: 1.0, h_max: h }
    }

    /// Target spacing at distance `d` from the nearest corner.
    pub fn target(&self, d: f64) -> f64 {
        (self.h0 + (self.ratio - 1.0) * d).clamp(self.h0, self.h_max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatchContour {
    pub loops: Vec<Vec<Node>>,
    pub symmetry: Symmetry,
    pub amplitude: f64,
    pub grading: Grading,
    pub t: f64,
}

fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

fn apply(m: &[[f64; 2]; 2], x: Vec2) -> Vec2 {
    [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
}

fn apply_t(m: &[[f64; 2]; 2], x: Vec2) -> Vec2 {
    [m[0][0] * x[0] + m[1][0] * x[1], m[0][1] * x[0] + m[1][1] * x[1]]
}

fn prim(z: f64, d: f64) -> f64 {
    let r2 = z * z + d * d;
    let log_part = if r2 == 0.0 { 0.0 } else { 0.5 * z * r2.ln() };
    let atan_part = if d == 0.0 { 0.0 } else { d * (z / d).atan() };
    log_part - z + atan_part
}

/// `∫_{[a,b]} ln|x - y| dy` (a vector along the segment).
pub fn segment_log_integral(x: Vec2, a: Vec2, b: Vec2) -> Vec2 {
    let e = sub(b, a);
    let l = norm(e);
    if l == 0.0 {
        return [0.0, 0.0];
    }
    let e = [e[0] / l, e[1] / l];
    let r = sub(x, a);
    let w = r[0] * e[0] + r[1] * e[1];
    let d = (e[0] * r[1] - e[1] * r[0]).abs();
    let s = prim(l - w, d) - prim(-w, d);
    [e[0] * s, e[1] * s]
}

impl PatchContour {
    pub fn new(loops: Vec<Vec<Node>>, symmetry: Symmetry, amplitude: f64, grading: Grading) -> Result<Self> {
        let c = PatchContour { loops, symmetry, amplitude, grading, t: 0.0 };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if let Symmetry::Rotation(0) = self.symmetry {
            return Err(Error::Degenerate("rotation order must be at least 1".into()));
        }
        if !(self.grading.h0 > 0.0 && self.grading.h0 <= self.grading.h_max && self.grading.ratio >= 1.0) {
            return Err(Error::Degenerate("grading needs 0 < h0 ≤ h_max and ratio ≥ 1".into()));
        }
        for (k, lp) in self.loops.iter().enumerate() {
            if lp.len() < 3 {
                return Err(Error::Degenerate(format!("loop {k} has fewer than 3 nodes")));
            }
            let pts: Vec<Vec2> = lp.iter().map(|n| n.p).collect();
            if let Some((i, j)) = self_intersection(&pts) {
                return Err(Error::Degenerate(format!("loop {k} self-intersects at segments {i} and {j}")));
            }
            if self.symmetry.pins_origin() {
                if let Some(n) = lp.iter().find(|n| n.corner && norm(n.p) > 1e-14) {
                    return Err(Error::Degenerate(format!(
                        "corner node at ({}, {}) is off the symmetry centre",
                        n.p[0], n.p[1]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.loops.iter().map(|l| l.len()).sum()
    }

    pub fn loop_points(&self, k: usize) -> Vec<Vec2> {
        self.loops[k].iter().map(|n| n.p).collect()
    }

    /// Signed area of each stored loop.
    pub fn loop_areas(&self) -> Vec<f64> {
        (0..self.loops.len()).map(|k| polygon_area(&self.loop_points(k))).collect()
    }

    /// Area of the whole patch, images included.
    pub fn total_area(&self) -> f64 {
        self.loop_areas().iter().sum::<f64>() * self.symmetry.count() as f64
    }

    /// The full contour with images written out explicitly (`Symmetry::None`).
    pub fn unrolled(&self) -> PatchContour {
        let mut loops = Vec::new();
        for (j, m) in self.symmetry.images().iter().enumerate() {
            for lp in &self.loops {
                // a reflected loop comes out clockwise, which is exactly its sign flip
                let l: Vec<Node> = lp
                    .iter()
                    .map(|n| Node { p: apply(m, n.p), corner: n.corner, tag: n.tag.map(|t| t + 1000 * j as u32) })
                    .collect();
                loops.push(l);
            }
        }
        PatchContour { loops, symmetry: Symmetry::None, amplitude: self.amplitude, grading: self.grading, t: self.t }
    }

    fn segments(&self) -> Vec<(Vec2, Vec2)> {
        let mut out = Vec::with_capacity(self.node_count());
        for lp in &self.loops {
            let n = lp.len();
            for i in 0..n {
                out.push((lp[i].p, lp[(i + 1) % n].p));
            }
        }
        out
    }

    fn base_velocity(&self, segs: &[(Vec2, Vec2)], x: Vec2) -> Vec2 {
        let mut acc = [0.0, 0.0];
        for &(a, b) in segs {
            let v = segment_log_integral(x, a, b);
            acc[0] += v[0];
            acc[1] += v[1];
        }
        let k = -self.amplitude / TAU;
        [k * acc[0], k * acc[1]]
    }

    fn velocity_with(&self, segs: &[(Vec2, Vec2)], images: &[[[f64; 2]; 2]], x: Vec2) -> Vec2 {
        let mut u = [0.0, 0.0];
        for m in images {
            let v = match self.symmetry {
                Symmetry::OddOdd => apply(m, self.base_velocity(segs, apply(m, x))),
                _ => apply(m, self.base_velocity(segs, apply_t(m, x))),
            };
            u[0] += v[0];
            u[1] += v[1];
        }
        u
    }

    /// Velocity at arbitrary points.
    pub fn velocity(&self, at: &[Vec2]) -> Vec<Vec2> {
        let segs = self.segments();
        let images = self.symmetry.images();
        at.iter().map(|&x| self.velocity_with(&segs, &images, x)).collect()
    }

    /// Node velocities, with pinned corners held at zero.
    pub fn node_velocities(&self) -> Vec<Vec<Vec2>> {
        let segs = self.segments();
        let images = self.symmetry.images();
        let pin = self.symmetry.pins_origin();
        self.loops
            .iter()
            .map(|lp| {
                lp.iter()
                    .map(|n| if pin && n.corner { [0.0, 0.0] } else { self.velocity_with(&segs, &images, n.p) })
                    .collect()
            })
            .collect()
    }

    fn corner_points(&self) -> Vec<Vec2> {
        self.loops.iter().flatten().filter(|n| n.corner).map(|n| n.p).collect()
    }

    fn target_at(&self, corners: &[Vec2], p: Vec2) -> f64 {
        if corners.is_empty() {
            return self.grading.h_max;
        }
        let d = corners.iter().map(|&c| norm(sub(p, c))).fold(f64::INFINITY, f64::min);
        self.grading.target(d)
    }

    /// Split segments that outgrew their target (at chord midpoints, which leaves the
    /// polygon area untouched) and drop nodes whose removal is both justified by
    /// crowding and area-neutral to `1e-12`. Corner and tagged nodes are kept.
    pub fn remesh(&self) -> PatchContour {
        let corners = self.corner_points();
        let mut out = self.clone();
        for lp in out.loops.iter_mut() {
            for _pass in 0..8 {
                let mut changed = false;
                let n = lp.len();
                let mut next: Vec<Node> = Vec::with_capacity(n * 2);
                for i in 0..n {
                    let a = lp[i];
                    let b = lp[(i + 1) % n];
                    next.push(a);
                    let mid = [0.5 * (a.p[0] + b.p[0]), 0.5 * (a.p[1] + b.p[1])];
                    let len = norm(sub(b.p, a.p));
                    let tgt = self.target_at(&corners, mid);
                    if len > 1.5 * tgt {
                        let k = (len / tgt).ceil() as usize;
                        for j in 1..k {
                            let s = j as f64 / k as f64;
                            next.push(Node::plain([a.p[0] + s * (b.p[0] - a.p[0]), a.p[1] + s * (b.p[1] - a.p[1])]));
                        }
                        changed = true;
                    }
                }
                // merges
                let mut i = 0;
                while next.len() > 3 && i < next.len() {
                    let n = next.len();
                    let (p, c, q) = (next[(i + n - 1) % n], next[i], next[(i + 1) % n]);
                    if !c.corner && c.tag.is_none() {
                        let tgt = self.target_at(&corners, c.p);
                        let l1 = norm(sub(c.p, p.p));
                        let l2 = norm(sub(q.p, c.p));
                        let tri = 0.5 * ((c.p[0] - p.p[0]) * (q.p[1] - p.p[1]) - (c.p[1] - p.p[1]) * (q.p[0] - p.p[0])).abs();
                        if l1 < 0.4 * tgt && l2 < 0.4 * tgt && l1 + l2 < 1.2 * tgt && tri < 1e-12 {
                            next.remove(i);
                            changed = true;
                            continue;
                        }
                    }
                    i += 1;
                }
                *lp = next;
                if !changed {
                    break;
                }
            }
        }
        out
    }

    fn spacing_ok(&self) -> bool {
        let corners = self.corner_points();
        self.loops.iter().all(|lp| {
            let n = lp.len();
            (0..n).all(|i| {
                let (a, b) = (lp[i].p, lp[(i + 1) % n].p);
                let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                norm(sub(b, a)) <= 1.5 * self.target_at(&corners, mid)
            })
        })
    }

    /// Largest stable step: `0.25 · min_i h_i/|u_i|` over moving nodes, `h_i` the shorter
    /// adjacent segment.
    pub fn cfl_step(&self, vel: &[Vec<Vec2>]) -> f64 {
        let mut best = f64::INFINITY;
        for (lp, vl) in self.loops.iter().zip(vel) {
            let n = lp.len();
            for i in 0..n {
                let sp = norm(vl[i]);
                if sp == 0.0 {
                    continue;
                }
                let h = norm(sub(lp[(i + 1) % n].p, lp[i].p)).min(norm(sub(lp[i].p, lp[(i + n - 1) % n].p)));
                best = best.min(0.25 * h / sp);
            }
        }
        best
    }

    fn flat(&self) -> Vec<f64> {
        self.loops.iter().flatten().flat_map(|n| n.p).collect()
    }

    fn with_flat(&self, y: &[f64]) -> PatchContour {
        let mut c = self.clone();
        let mut k = 0;
        for lp in c.loops.iter_mut() {
            for n in lp.iter_mut() {
                n.p = [y[k], y[k + 1]];
                k += 2;
            }
        }
        c
    }

    /// One RK4 step of size `dt` (negative runs backwards). No remeshing.
    pub fn step(&self, dt: f64) -> Result<PatchContour> {
        let mut f = |_t: f64, y: &[f64], out: &mut [f64]| -> Result<()> {
            let v = self.with_flat(y).node_velocities();
            for (o, u) in out.chunks_mut(2).zip(v.iter().flatten()) {
                o[0] = u[0];
                o[1] = u[1];
            }
            Ok(())
        };
        let y = ode::rk4_step(&mut f, self.t, &self.flat(), dt)?;
        let mut c = self.with_flat(&y);
        c.t = self.t + dt;
        for (k, lp) in c.loops.iter().enumerate() {
            let pts: Vec<Vec2> = lp.iter().map(|n| n.p).collect();
            if let Some((i, j)) = self_intersection(&pts) {
                return Err(Error::Numerical(format!(
                    "loop {k} self-intersects at segments {i} and {j} at t = {:.6}",
                    c.t
                )));
            }
        }
        Ok(c)
    }
}

/// Options for [`evolve`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveOptions {
    pub dt_max: f64,
    pub remesh: bool,
    /// Keep a snapshot whenever this much time has passed.
    pub snapshot_every: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { dt_max: 0.02, remesh: true, snapshot_every: f64::INFINITY }
    }
}

/// Advance by `t_span` (either sign) with CFL-limited steps; returns the snapshots
/// (initial and final always included).
pub fn evolve(c0: &PatchContour, t_span: f64, opt: EvolveOptions) -> Result<Vec<PatchContour>> {
    let dir = t_span.signum();
    let end = c0.t + t_span;
    let mut c = c0.clone();
    let mut snaps = vec![c.clone()];
    let mut last_snap = c.t;
    let mut guard = 0usize;
    while dir * (end - c.t) > 1e-14 * (1.0 + end.abs()) {
        let v = c.node_velocities();
        let mut dt = c.cfl_step(&v).min(opt.dt_max);
        let left = (end - c.t).abs();
        if dt >= left {
            dt = left;
        } else if dt > 0.5 * left {
            dt = 0.5 * left;
        }
        c = c.step(dir * dt)?;
        if opt.remesh && !c.spacing_ok() {
            c = c.remesh();
        }
        if (c.t - last_snap).abs() >= opt.snapshot_every - 1e-12 {
            snaps.push(c.clone());
            last_snap = c.t;
        }
        guard += 1;
        if guard > 10_000_000 {
            return Err(Error::Numerical("step budget exhausted".into()));
        }
    }
    if snaps.last().map(|s| s.t) != Some(c.t) {
        snaps.push(c);
    }
    Ok(snaps)
}

// ---------------------------------------------------------------- construction

/// Nodes along `curve(s)`, `s ∈ [s0, s1]`, spaced by `target(point)`. Both ends included;
/// closed curves (`curve(s0) = curve(s1)`) are fine.
pub fn sample_curve<C, T>(curve: C, s0: f64, s1: f64, target: T) -> Vec<Vec2>
where
    C: Fn(f64) -> Vec2,
    T: Fn(Vec2) -> f64,
{
    // march in u = |s - s0| so that decreasing parameter ranges work too
    let (dir, span) = ((s1 - s0).signum(), (s1 - s0).abs());
    let at = |u: f64| curve(s0 + dir * u);
    let mut pts = vec![at(0.0)];
    let end = at(span);
    let mut u = 0.0;
    loop {
        let p = *pts.last().expect("nonempty");
        let h = target(p);
        if u > 0.5 * span && norm(sub(end, p)) <= 1.2 * h {
            break;
        }
        // march forward geometrically until the chord reaches h, then bisect
        let mut lo = u;
        let mut du = span * 1e-9;
        let mut hi = None;
        while u + du < span {
            if norm(sub(at(u + du), p)) >= h {
                hi = Some(u + du);
                break;
            }
            lo = u + du;
            du *= 2.0;
        }
        let Some(mut hi) = hi else { break };
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if norm(sub(at(mid), p)) < h {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        u = 0.5 * (lo + hi);
        pts.push(at(u));
    }
    pts.push(end);
    pts
}

fn graded_target(g: Grading) -> impl Fn(Vec2) -> f64 {
    move |p: Vec2| g.target(norm(p))
}

/// Regular `n`-gon inscribed in the circle of radius `r` about `center`.
pub fn disc_contour(center: Vec2, r: f64, n: usize, amplitude: f64) -> Result<PatchContour> {
    let nodes = (0..n)
        .map(|i| {
            let t = TAU * i as f64 / n as f64;
            Node::plain([center[0] + r * t.cos(), center[1] + r * t.sin()])
        })
        .collect();
    PatchContour::new(vec![nodes], Symmetry::None, amplitude, Grading::uniform(TAU * r / n as f64))
}

/// Closed loop from the origin out along the ray at angle `lo`, around the curve
/// `r = R(θ)`, and back along the ray at `hi`, with graded nodes. `radius(θ)` must
/// vanish at both ends (`lo`, `hi`) for rose-type petals, or be positive for a sector.
fn corner_loop<R: Fn(f64) -> f64>(lo: f64, hi: f64, radius: R, g: Grading, straight: bool) -> Vec<Node> {
    let tgt = graded_target(g);
    let mut nodes = vec![Node { p: [0.0, 0.0], corner: true, tag: None }];
    if straight {
        let r0 = radius(lo);
        let r1 = radius(hi);
        let e0 = [lo.cos(), lo.sin()];
        let e1 = [hi.cos(), hi.sin()];
        let edge0 = sample_curve(|s| [s * e0[0], s * e0[1]], 0.0, r0, &tgt);
        let arc = sample_curve(|t| [radius(t) * t.cos(), radius(t) * t.sin()], lo, hi, &tgt);
        let edge1 = sample_curve(|s| [s * e1[0], s * e1[1]], r1, 0.0, &tgt);
        for p in edge0.iter().skip(1) {
            nodes.push(Node::plain(*p));
        }
        for p in arc.iter().skip(1) {
            nodes.push(Node::plain(*p));
        }
        for p in edge1.iter().skip(1).take(edge1.len().saturating_sub(2)) {
            nodes.push(Node::plain(*p));
        }
    } else {
        // r = R(θ) vanishing at both ends: parametrise by θ
        let arc = sample_curve(|t| [radius(t) * t.cos(), radius(t) * t.sin()], lo, hi, &tgt);
        for p in arc.iter().skip(1).take(arc.len().saturating_sub(2)) {
            nodes.push(Node::plain(*p));
        }
    }
    nodes
}

/// m-fold rose petal `r = R₀ sin(m'(θ - β))` on `(β, β + ζ)` with `m' = π/ζ`: a corner of
/// opening `ζ` at the origin, smooth elsewhere.
pub fn petal_contour(m: usize, zeta: f64, beta: f64, r0: f64, amplitude: f64, g: Grading) -> Result<PatchContour> {
    if m >= 2 && zeta >= TAU / m as f64 {
        return Err(Error::Degenerate(format!("petal opening {zeta} does not fit {m}-fold symmetry")));
    }
    let k = PI / zeta;
    let nodes = corner_loop(beta, beta + zeta, |t| (r0 * (k * (t - beta)).sin()).max(0.0), g, false);
    PatchContour::new(vec![nodes], Symmetry::Rotation(m.max(1)), amplitude, g)
}

/// Truncated sector `{0 < r < R, lo < θ < hi}` with graded nodes.
pub fn sector_contour(lo: f64, hi: f64, r: f64, symmetry: Symmetry, amplitude: f64, g: Grading) -> Result<PatchContour> {
    let nodes = corner_loop(lo, hi, |_| r, g, true);
    PatchContour::new(vec![nodes], symmetry, amplitude, g)
}

// ---------------------------------------------------------------- angles

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleEstimate {
    pub r: f64,
    pub nodes_in_ball: usize,
    pub skipped: bool,
    /// Estimator (i): widest angular spread of nodes in `B_r`.
    pub spread_angle: f64,
    pub spread_center: f64,
    /// Estimator (ii): best-fit sector minimizing the symmetric-difference fraction.
    pub fit_angle: f64,
    pub fit_center: f64,
    pub fit_fraction: f64,
}

fn wrap(a: f64) -> f64 {
    (a + PI).rem_euclid(TAU) - PI
}

fn ball_polygon(r: f64, n: usize) -> Vec<Vec2> {
    (0..n).map(|i| {
        let t = TAU * i as f64 / n as f64;
        [r * t.cos(), r * t.sin()]
    })
    .collect()
}

fn wedge(a: f64, b: f64, r: f64) -> Vec<Vec2> {
    let big = 4.0 * r;
    let mid = 0.5 * (a + b);
    let reach = big / (0.5 * (b - a)).cos().max(1e-3);
    vec![[0.0, 0.0], [big * a.cos(), big * a.sin()], [reach * mid.cos(), reach * mid.sin()], [big * b.cos(), big * b.sin()]]
}

/// Symmetric-difference fraction `|(Ω Δ S_{a,b}) ∩ B_r| / |B_r|` against a polygonal ball.
pub fn sector_mismatch(omega_ball: &[Vec2], omega_area: f64, ball: &[Vec2], r: f64, a: f64, b: f64) -> f64 {
    let ball_area = polygon_area(ball);
    if !(b > a) || b - a >= PI {
        return f64::INFINITY;
    }
    let s = clip_convex(ball, &wedge(a, b, r));
    let s_area = polygon_area(&s);
    let both = polygon_area(&clip_convex(omega_ball, &s)).abs();
    (omega_area + s_area - 2.0 * both) / ball_area
}

/// Per-scale corner angle estimates for the loop carrying the first corner node.
pub fn measure_corner_angle(c: &PatchContour, scales: &[f64]) -> Result<Vec<AngleEstimate>> {
    let k = c
        .loops
        .iter()
        .position(|l| l.iter().any(|n| n.corner))
        .ok_or_else(|| Error::Degenerate("contour has no corner node".into()))?;
    let lp = &c.loops[k];
    let origin = lp.iter().find(|n| n.corner).expect("found above").p;
    let pts: Vec<Vec2> = lp.iter().map(|n| sub(n.p, origin)).collect();
    let mut out = Vec::new();
    for &r in scales {
        let inside: Vec<Vec2> = pts.iter().copied().filter(|p| norm(*p) > 0.0 && norm(*p) < r).collect();
        let mut est = AngleEstimate {
            r,
            nodes_in_ball: inside.len(),
            skipped: inside.len() < 4,
            spread_angle: f64::NAN,
            spread_center: f64::NAN,
            fit_angle: f64::NAN,
            fit_center: f64::NAN,
            fit_fraction: f64::NAN,
        };
        if est.skipped {
            out.push(est);
            continue;
        }
        let (sx, sy) = inside.iter().fold((0.0, 0.0), |(x, y), p| (x + p[0] / norm(*p), y + p[1] / norm(*p)));
        let c0 = sy.atan2(sx);
        let rel: Vec<f64> = inside.iter().map(|p| wrap(p[1].atan2(p[0]) - c0)).collect();
        let lo = rel.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = rel.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        est.spread_angle = hi - lo;
        est.spread_center = wrap(c0 + 0.5 * (lo + hi));

        let ball = ball_polygon(r, 2048);
        let omega_ball = clip_convex(&pts, &ball);
        let omega_area = polygon_area(&omega_ball).abs();
        let f = |a: f64, b: f64| sector_mismatch(&omega_ball, omega_area, &ball, r, a, b);
        let (mut a, mut b) = (c0 + lo, c0 + hi);
        let mut best = f(a, b);
        let mut step = 0.05 * (b - a).max(0.05);
        while step > 1e-10 {
            let mut improved = false;
            for (da, db) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step), (step, step), (-step, -step), (step, -step), (-step, step)] {
                let v = f(a + da, b + db);
                if v < best - 1e-15 {
                    best = v;
                    a += da;
                    b += db;
                    improved = true;
                    break;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        est.fit_angle = b - a;
        est.fit_center = wrap(0.5 * (a + b));
        est.fit_fraction = best;
        out.push(est);
    }
    Ok(out)
}

// ---------------------------------------------------------------- experiments

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CornerSample {
    pub t: f64,
    pub area: f64,
    pub estimates: Vec<AngleEstimate>,
}

/// Evolve a corner contour and record angle estimates at the given scales every
/// `every` time units.
pub fn corner_history(
    c0: &PatchContour,
    t_span: f64,
    every: f64,
    scales: &[f64],
    opt: EvolveOptions,
) -> Result<(Vec<CornerSample>, PatchContour)> {
    let mut c = c0.clone();
    let mut out = vec![CornerSample { t: c.t, area: c.total_area(), estimates: measure_corner_angle(&c, scales)? }];
    let n = ode::step_count(t_span.abs(), every);
    let seg = t_span / n as f64;
    for _ in 0..n {
        let snaps = evolve(&c, seg, opt)?;
        c = snaps.last().expect("evolve returns at least one snapshot").clone();
        out.push(CornerSample { t: c.t, area: c.total_area(), estimates: measure_corner_angle(&c, scales)? });
    }
    Ok((out, c))
}

/// Tracked diagonal particle of the odd-odd experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalTrack {
    pub x: f64,
    pub t: Vec<f64>,
    pub z: Vec<Vec2>,
    /// `ln z₂ / ln z₁`.
    pub alpha: Vec<f64>,
    pub truncated: bool,
}

/// The odd-odd patch whose first-quadrant part is the sector `{π/4 < θ < π/2, r < 1}`, so
/// that inside `[0, 1/2]²` it is exactly `{0 ≤ x₁ ≤ x₂}`. Tagged nodes sit on the diagonal
/// at distances `x·√2` (`x` ∈ `tracked`).
pub fn oddodd_contour(tracked: &[f64], amplitude: f64, g: Grading) -> Result<PatchContour> {
    let mut c = sector_contour(PI / 4.0, PI / 2.0, 1.0, Symmetry::OddOdd, amplitude, g)?;
    let lp = &mut c.loops[0];
    // the diagonal edge is the run of nodes leaving the origin
    for (id, &x) in tracked.iter().enumerate() {
        let d = x * 2f64.sqrt();
        let pos = lp.iter().position(|n| !n.corner && norm(n.p) > d).unwrap_or(1);
        lp.insert(pos, Node { p: [x, x], corner: false, tag: Some(id as u32) });
    }
    c.validate()?;
    Ok(c)
}

/// Run the odd-odd experiment: returns one track per tagged particle.
pub fn oddodd_experiment(c0: &PatchContour, t_span: f64, samples: usize, window: f64, opt: EvolveOptions) -> Result<Vec<DiagonalTrack>> {
    let mut tags: Vec<(u32, f64)> = c0.loops[0].iter().filter_map(|n| n.tag.map(|t| (t, n.p[0]))).collect();
    tags.sort_by_key(|t| t.0);
    let mut tracks: Vec<DiagonalTrack> =
        tags.iter().map(|&(_, x)| DiagonalTrack { x, t: vec![], z: vec![], alpha: vec![], truncated: false }).collect();
    let record = |c: &PatchContour, tracks: &mut Vec<DiagonalTrack>| {
        for (k, &(tag, _)) in tags.iter().enumerate() {
            if tracks[k].truncated {
                continue;
            }
            let z = c.loops[0].iter().find(|n| n.tag == Some(tag)).map(|n| n.p).expect("tagged nodes are kept");
            if !(z[0] > 0.0 && z[1] > 0.0 && z[0] < window && z[1] < window) {
                tracks[k].truncated = true;
                continue;
            }
            tracks[k].t.push(c.t);
            tracks[k].z.push(z);
            tracks[k].alpha.push(z[1].ln() / z[0].ln());
        }
    };
    let mut c = c0.clone();
    record(&c, &mut tracks);
    let seg = t_span / samples.max(1) as f64;
    for _ in 0..samples.max(1) {
        c = evolve(&c, seg, opt)?.pop().expect("nonempty");
        record(&c, &mut tracks);
    }
    Ok(tracks)
}

/// CSV rows `t, loop, node, x1, x2, is_corner`.
pub fn contour_csv(snaps: &[PatchContour]) -> String {
    let mut out = String::from("t,loop,node,x1,x2,is_corner\n");
    for c in snaps {
        for (k, lp) in c.loops.iter().enumerate() {
            for (i, n) in lp.iter().enumerate() {
                out += &format!("{:.12e},{k},{i},{:.15e},{:.15e},{}\n", c.t, n.p[0], n.p[1], n.corner as u8);
            }
        }
    }
    out
}
