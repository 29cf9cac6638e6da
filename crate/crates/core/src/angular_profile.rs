//! Angular vorticity profiles on the circle, as value intervals and as truncated Fourier series.
//!
//! Fourier normalization: `a_k = (1/π)∫h cos kθ`, `b_k = (1/π)∫h sin kθ` (including `k = 0`),
//! reconstructed as `a_0/2 + Σ a_k cos kθ + b_k sin kθ`.
//!
//! Log-mode sign: `(c, s) = -(1/4π) ∫ h (cos 2θ, sin 2θ) dθ`. With this choice the
//! `ln(1/|x|)` part of the velocity gradient of a sector stack is
//! `[[-2s, 2c], [2c, 2s]]`, which is what direct Biot–Savart quadrature measures.
//! A single sector `[-θ₀, θ₀]` therefore has `c = -sin(2θ₀)/(4π) < 0`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Gap below which two intervals count as touching.
pub const TOUCH_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub value: f64,
}

impl Piece {
    pub fn new(start: f64, end: f64, value: f64) -> Self {
        Piece { start, end, value }
    }

    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    fn rotated(&self, phi: f64) -> Piece {
        let s = wrap(self.start + phi);
        Piece { start: s, end: s + self.len(), value: self.value }
    }

    /// Whether `θ` lies in the piece modulo 2π.
    pub fn contains(&self, theta: f64) -> bool {
        let d = (theta - self.start).rem_euclid(TAU);
        d < self.len() || self.len() >= TAU
    }
}

/// Reduce an angle to `[-π, π)`.
pub fn wrap(theta: f64) -> f64 {
    let t = (theta + PI).rem_euclid(TAU) - PI;
    if t >= PI {
        t - TAU
    } else {
        t
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalProfile {
    pub pieces: Vec<Piece>,
    #[serde(default = "one")]
    pub symmetry: usize,
}

fn one() -> usize {
    1
}

impl IntervalProfile {
    pub fn new(pieces: Vec<Piece>, symmetry: usize) -> Result<Self> {
        let p = IntervalProfile {
            pieces: pieces
                .into_iter()
                .map(|q| {
                    let s = wrap(q.start);
                    Piece { start: s, end: s + (q.end - q.start), value: q.value }
                })
                .collect(),
            symmetry,
        };
        p.validate()?;
        Ok(p)
    }

    /// Characteristic function of `[a, b]`.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![Piece::new(a, b, 1.0)], 1)
    }

    /// The constant profile `value` on the whole circle.
    pub fn constant(value: f64) -> Self {
        IntervalProfile { pieces: vec![Piece::new(-PI, PI, value)], symmetry: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.symmetry == 0 {
            return Err(Error::Profile("symmetry order must be positive".into()));
        }
        for (i, q) in self.pieces.iter().enumerate() {
            if !(q.start.is_finite() && q.end.is_finite() && q.value.is_finite()) {
                return Err(Error::Profile(format!("piece {i} is not finite")));
            }
            if q.end <= q.start {
                return Err(Error::Profile(format!("piece {i} has end <= start")));
            }
        }
        let full = self.tagged_pieces();
        let whole = full.len() == 1 && (full[0].2.len() - TAU).abs() <= TOUCH_TOL;
        for (i, j, q) in &full {
            if q.len() > TAU + TOUCH_TOL || (q.len() >= TAU - TOUCH_TOL && !whole) {
                return Err(Error::Profile(format!("piece {i} (copy {j}) spans the full circle")));
            }
        }
        for x in 0..full.len() {
            for y in x + 1..full.len() {
                let (pi, ri, p) = full[x];
                let (qi, rj, q) = full[y];
                if !disjoint(&p, &q) {
                    return Err(Error::Overlap {
                        a: pi,
                        b: qi,
                        detail: format!(
                            "piece {pi} rotated by {ri}·2π/m = [{:.6}, {:.6}] meets piece {qi} rotated by {rj}·2π/m = [{:.6}, {:.6}]",
                            p.start, p.end, q.start, q.end
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    fn tagged_pieces(&self) -> Vec<(usize, usize, Piece)> {
        let m = self.symmetry;
        let mut out = Vec::with_capacity(self.pieces.len() * m);
        for j in 0..m {
            for (i, q) in self.pieces.iter().enumerate() {
                out.push((i, j, q.rotated(TAU * j as f64 / m as f64)));
            }
        }
        out
    }

    /// The full profile with all rotated copies made explicit.
    pub fn full_pieces(&self) -> Vec<Piece> {
        self.tagged_pieces().into_iter().map(|t| t.2).collect()
    }

    /// The same profile with symmetry order 1.
    pub fn unrolled(&self) -> IntervalProfile {
        IntervalProfile { pieces: self.full_pieces(), symmetry: 1 }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.full_pieces().iter().filter(|q| q.contains(theta)).map(|q| q.value).sum()
    }

    /// Measure of the support of the full profile.
    pub fn measure(&self) -> f64 {
        self.full_pieces().iter().map(|q| q.len()).sum()
    }

    /// `∫ h dθ` over the circle.
    pub fn integral(&self) -> f64 {
        self.full_pieces().iter().map(|q| q.len() * q.value).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.pieces.iter().map(|q| q.value.abs()).fold(0.0, f64::max)
    }
}

fn disjoint(p: &Piece, q: &Piece) -> bool {
    let d = (q.start - p.start).rem_euclid(TAU);
    d >= p.len() + TOUCH_TOL && d + q.len() <= TAU - TOUCH_TOL
}

/// Rotate-and-union a symmetry-free profile into an m-fold symmetric one.
pub fn symmetrize(p: &IntervalProfile, m: usize) -> Result<IntervalProfile> {
    if p.symmetry != 1 {
        return Err(Error::Profile(format!("input already carries symmetry order {}", p.symmetry)));
    }
    if m == 0 {
        return Err(Error::Profile("symmetry order must be positive".into()));
    }
    IntervalProfile::new(p.pieces.clone(), m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierProfile {
    /// `a_0..a_N`.
    pub a: Vec<f64>,
    /// `b_0..b_N` with `b_0 = 0`.
    pub b: Vec<f64>,
}

impl FourierProfile {
    pub fn zeros(n: usize) -> Self {
        FourierProfile { a: vec![0.0; n + 1], b: vec![0.0; n + 1] }
    }

    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    /// Single cosine or sine mode with unit amplitude.
    pub fn mode(n: usize, k: usize, sine: bool) -> Self {
        let mut f = Self::zeros(n);
        if sine {
            f.b[k] = 1.0;
        } else if k == 0 {
            f.a[0] = 2.0;
        } else {
            f.a[k] = 1.0;
        }
        f
    }

    /// Project a function sampled at `samples` uniform points onto degree `n`.
    pub fn from_fn<F: Fn(f64) -> f64>(f: F, n: usize, samples: usize) -> Self {
        let vals: Vec<(f64, f64)> = (0..samples)
            .map(|j| {
                let t = -PI + TAU * j as f64 / samples as f64;
                (t, f(t))
            })
            .collect();
        let mut out = Self::zeros(n);
        let w = 2.0 / samples as f64;
        for &(t, v) in &vals {
            let (s1, c1) = t.sin_cos();
            let (mut ck, mut sk) = (1.0, 0.0);
            for k in 0..=n {
                out.a[k] += w * v * ck;
                out.b[k] += w * v * sk;
                let nc = ck * c1 - sk * s1;
                sk = sk * c1 + ck * s1;
                ck = nc;
            }
        }
        out.b[0] = 0.0;
        out
    }

    /// Evaluate the `order`-th derivative (0, 1 or 2) at `θ`.
    pub fn eval_deriv(&self, theta: f64, order: u32) -> f64 {
        let (s1, c1) = theta.sin_cos();
        let (mut ck, mut sk) = (c1, s1);
        let mut acc = if order == 0 { 0.5 * self.a[0] } else { 0.0 };
        for k in 1..self.a.len() {
            let kf = k as f64;
            acc += match order {
                0 => self.a[k] * ck + self.b[k] * sk,
                1 => kf * (self.b[k] * ck - self.a[k] * sk),
                _ => -kf * kf * (self.a[k] * ck + self.b[k] * sk),
            };
            let nc = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = nc;
        }
        acc
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.eval_deriv(theta, 0)
    }

    /// Term-wise derivative as a new profile.
    pub fn derivative(&self) -> Self {
        let mut d = Self::zeros(self.degree());
        for k in 1..self.a.len() {
            let kf = k as f64;
            d.a[k] = kf * self.b[k];
            d.b[k] = -kf * self.a[k];
        }
        d
    }

    /// `∫ h dθ` over the circle.
    pub fn integral(&self) -> f64 {
        PI * self.a[0]
    }

    /// Largest coefficient magnitude over indices not divisible by `m`.
    pub fn off_symmetry_max(&self, m: usize) -> f64 {
        (0..self.a.len())
            .filter(|k| k % m != 0)
            .map(|k| self.a[k].abs().max(self.b[k].abs()))
            .fold(0.0, f64::max)
    }
}

/// Closed-form Fourier coefficients of an interval profile up to degree `n`.
pub fn fourier_of_intervals(p: &IntervalProfile, n: usize) -> FourierProfile {
    let mut f = FourierProfile::zeros(n);
    for q in p.full_pieces() {
        f.a[0] += q.value * q.len() / PI;
        for k in 1..=n {
            let kf = k as f64;
            let (ss, cs) = (kf * q.start).sin_cos();
            let (se, ce) = (kf * q.end).sin_cos();
            f.a[k] += q.value * (se - ss) / (PI * kf);
            f.b[k] += q.value * (cs - ce) / (PI * kf);
        }
    }
    f
}

/// Either representation of an angular profile.
#[derive(Clone, Copy, Debug)]
pub enum ProfileRef<'a> {
    Intervals(&'a IntervalProfile),
    Fourier(&'a FourierProfile),
}

/// Log-mode pair `(c, s) = -(1/4π) ∫ h (cos 2θ, sin 2θ) dθ`.
pub fn second_mode_coefficients(p: ProfileRef<'_>) -> (f64, f64) {
    match p {
        ProfileRef::Fourier(f) => {
            if f.degree() < 2 {
                (0.0, 0.0)
            } else {
                (-0.25 * f.a[2], -0.25 * f.b[2])
            }
        }
        ProfileRef::Intervals(p) => {
            let (mut ic, mut is) = (0.0, 0.0);
            for q in p.full_pieces() {
                let (ss, cs) = (2.0 * q.start).sin_cos();
                let (se, ce) = (2.0 * q.end).sin_cos();
                ic += q.value * 0.5 * (se - ss);
                is += q.value * 0.5 * (cs - ce);
            }
            (-ic / (4.0 * PI), -is / (4.0 * PI))
        }
    }
}
