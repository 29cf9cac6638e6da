//! Angular elliptic problems behind `Δ⁻¹` for radially homogeneous data.
//!
//! Sector ansatz: `Δ⁻¹h = r²H(θ) + r² ln(1/r) G(θ)` with `G = c cos 2θ + s sin 2θ`.
//! Since `Δ(r² ln(1/r) G) = (4G + G'') ln(1/r) - 4G` and `4G + G'' = 0`, the angular
//! equation is `4H + H'' - 4G = h`; the 2-modes of `h` are carried entirely by `G`.
//!
//! Spiral ansatz: `Ψ = r² H(c ln(1/r) + θ)` gives `4H - 4cH' + (1+c²)H'' = h`.

use crate::angular_profile::{second_mode_coefficients, FourierProfile, IntervalProfile, ProfileRef};
use crate::error::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Default truncation degree.
pub const DEFAULT_DEGREE: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct StreamProfile {
    pub fourier: FourierProfile,
    pub c: f64,
    pub s: f64,
}

impl StreamProfile {
    pub fn value(&self, theta: f64) -> f64 {
        self.fourier.eval_deriv(theta, 0)
    }
    pub fn d1(&self, theta: f64) -> f64 {
        self.fourier.eval_deriv(theta, 1)
    }
    pub fn d2(&self, theta: f64) -> f64 {
        self.fourier.eval_deriv(theta, 2)
    }
    /// Log-mode factor `G(θ)`.
    pub fn g(&self, theta: f64) -> f64 {
        self.c * (2.0 * theta).cos() + self.s * (2.0 * theta).sin()
    }

    /// Coefficients of `4H + H'' - 4G`.
    pub fn forward(&self) -> FourierProfile {
        let mut out = FourierProfile::zeros(self.fourier.degree());
        for k in 0..out.a.len() {
            let f = 4.0 - (k * k) as f64;
            out.a[k] = f * self.fourier.a[k];
            out.b[k] = f * self.fourier.b[k];
        }
        if out.a.len() > 2 {
            out.a[2] -= 4.0 * self.c;
            out.b[2] -= 4.0 * self.s;
        }
        out
    }
}

/// Solve `4H + H'' - 4G = h` mode by mode.
pub fn invert_angular_laplacian(h: &FourierProfile) -> StreamProfile {
    let mut out = FourierProfile::zeros(h.degree());
    for k in 0..h.a.len() {
        if k == 2 {
            continue;
        }
        let d = 4.0 - (k * k) as f64;
        out.a[k] = h.a[k] / d;
        out.b[k] = h.b[k] / d;
    }
    let (c, s) = second_mode_coefficients(ProfileRef::Fourier(h));
    StreamProfile { fourier: out, c, s }
}

/// Largest coefficient mismatch of a solve relative to the largest coefficient of `h`.
pub fn residual(h: &FourierProfile, sol: &StreamProfile) -> f64 {
    let f = sol.forward();
    let scale = h.a.iter().chain(h.b.iter()).fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    let mut r = 0.0f64;
    for k in 0..h.a.len() {
        r = r.max((f.a[k] - h.a[k]).abs()).max((f.b[k] - h.b[k]).abs());
    }
    r / scale
}

/// The circle kernel `K(θ) = (π/2) sin 2θ sgn θ - θ sin 2θ / 2 - cos 2θ / 8` on `[-π, π)`,
/// extended periodically. Its Fourier multipliers are `1/(4 - k²)` for `k ≠ ±2`.
pub fn ks1_kernel(theta: f64) -> f64 {
    let t = crate::angular_profile::wrap(theta);
    let s2 = (2.0 * t).sin();
    0.5 * PI * s2 * t.signum() - 0.5 * t * s2 - 0.125 * (2.0 * t).cos()
}

/// Antiderivative of `K` vanishing at 0 and continued across periods
/// (each period adds `∫K = π/2`).
pub fn ks1_antiderivative(phi: f64) -> f64 {
    let n = ((phi + PI) / TAU).floor();
    let t = phi - n * TAU;
    let (s2, c2) = (2.0 * t).sin_cos();
    let sg = if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    };
    0.25 * PI * sg * (1.0 - c2) + 0.25 * t * c2 - 0.1875 * s2 + n * FRAC_PI_2
}

fn require_symmetry(h: &IntervalProfile) -> Result<()> {
    if h.symmetry < 3 && !is_constant(h) {
        return Err(Error::SymmetryTooLow(h.symmetry));
    }
    Ok(())
}

fn is_constant(h: &IntervalProfile) -> bool {
    let full = h.full_pieces();
    full.len() == 1 && (full[0].len() - TAU).abs() < 1e-12
}

/// Stream factor of an m-fold symmetric (m ≥ 3) interval profile, evaluated by exact
/// piecewise integration of `K` against the pieces.
#[derive(Clone, Debug)]
pub struct Ks1Stream {
    pieces: Vec<crate::angular_profile::Piece>,
}

impl Ks1Stream {
    pub fn new(h: &IntervalProfile) -> Result<Self> {
        require_symmetry(h)?;
        Ok(Ks1Stream { pieces: h.full_pieces() })
    }

    /// Build without the symmetry check; only meaningful when the 2-modes vanish.
    pub(crate) fn from_pieces_unchecked(pieces: Vec<crate::angular_profile::Piece>) -> Self {
        Ks1Stream { pieces }
    }

    pub fn value(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for q in &self.pieces {
            acc += q.value * (ks1_antiderivative(theta - q.start) - ks1_antiderivative(theta - q.end));
        }
        acc / TAU
    }

    pub fn d1(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for q in &self.pieces {
            acc += q.value * (ks1_kernel(theta - q.start) - ks1_kernel(theta - q.end));
        }
        acc / TAU
    }

    /// `H'' = h - 4H` (no log mode under the symmetry hypothesis).
    pub fn d2(&self, theta: f64) -> f64 {
        let h: f64 = self.pieces.iter().filter(|q| q.contains(theta)).map(|q| q.value).sum();
        h - 4.0 * self.value(theta)
    }
}

/// Samples of `H` on `n` uniform points of `[-π, π)`.
pub fn convolve_ks1(h: &IntervalProfile, n: usize) -> Result<Vec<(f64, f64)>> {
    let st = Ks1Stream::new(h)?;
    Ok((0..n)
        .map(|j| {
            let t = -PI + TAU * j as f64 / n as f64;
            (t, st.value(t))
        })
        .collect())
}

/// `K^(m)(θ) = (1/m) Σ_j K(θ + 2πj/m)`, summed directly.
pub fn symmetrized_kernel(m: usize, theta: f64) -> f64 {
    let mf = m as f64;
    (0..m).map(|j| ks1_kernel(theta + TAU * j as f64 / mf)).sum::<f64>() / mf
}

/// Closed form of the symmetrized kernel for `m ≥ 3`:
/// `K^(m)(φ) = π cos(2|φ| - 2π/m) / (2m sin(2π/m))` with `φ` reduced to `[-π/m, π/m]`.
pub fn symmetrized_kernel_closed(m: usize, theta: f64) -> f64 {
    let mf = m as f64;
    let p = TAU / mf;
    let mut phi = (theta + 0.5 * p).rem_euclid(p) - 0.5 * p;
    phi = phi.abs();
    PI * (2.0 * phi - p).cos() / (2.0 * mf * p.sin())
}

/// Least-squares fit of `c₁|sin(mθ/2)| + c₂` to the direct sum on `n` grid points.
/// Returns `(c₁, c₂, max residual)`.
pub fn fit_symmetrized_kernel(m: usize, n: usize) -> (f64, f64, f64) {
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let t = -PI + TAU * (j as f64 + 0.5) / n as f64;
            ((0.5 * m as f64 * t).sin().abs(), symmetrized_kernel(m, t))
        })
        .collect();
    let (mut sxx, mut sx, mut sxy, mut sy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in &pts {
        sxx += x * x;
        sx += x;
        sxy += x * y;
        sy += y;
    }
    let nf = n as f64;
    let det = sxx * nf - sx * sx;
    let c1 = (sxy * nf - sx * sy) / det;
    let c2 = (sxx * sy - sx * sxy) / det;
    let res = pts.iter().map(|&(x, y)| (c1 * x + c2 - y).abs()).fold(0.0, f64::max);
    (c1, c2, res)
}

/// Denominator `4 - 4c(ik) - (1+c²)k²` of the spiral operator on `e^{ikθ}`, as `(re, im)`.
pub fn spiral_symbol(c: f64, k: f64) -> (f64, f64) {
    (4.0 - (1.0 + c * c) * k * k, -4.0 * c * k)
}

/// Stream factor of a logarithmic-spiral profile.
#[derive(Clone, Debug, PartialEq)]
pub struct SpiralStream {
    pub fourier: FourierProfile,
    pub c: f64,
}

impl SpiralStream {
    /// Complex mode `Ĥ_k` of `H = Σ Ĥ_k e^{ikθ}` for `k ≥ 0`.
    pub fn complex_mode(&self, k: usize) -> (f64, f64) {
        if k == 0 {
            (0.5 * self.fourier.a[0], 0.0)
        } else {
            (0.5 * self.fourier.a[k], -0.5 * self.fourier.b[k])
        }
    }

    /// Coefficients of `4H - 4cH' + (1+c²)H''`.
    pub fn forward(&self) -> FourierProfile {
        let f = &self.fourier;
        let mut out = FourierProfile::zeros(f.degree());
        out.a[0] = 4.0 * f.a[0];
        let c = self.c;
        for k in 1..f.a.len() {
            let kf = k as f64;
            let diag = 4.0 - (1.0 + c * c) * kf * kf;
            // H' has a_k' = k b_k, b_k' = -k a_k
            out.a[k] = diag * f.a[k] - 4.0 * c * kf * f.b[k];
            out.b[k] = diag * f.b[k] + 4.0 * c * kf * f.a[k];
        }
        out
    }
}

/// Solve `4H - 4cH' + (1+c²)H'' = h` mode by mode.
pub fn spiral_invert(h: &FourierProfile, c: f64) -> Result<SpiralStream> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Degenerate(format!("spiral pitch must be a finite c >= 0, got {c}")));
    }
    if c == 0.0 && h.degree() >= 2 && (h.a[2].abs() > 1e-14 || h.b[2].abs() > 1e-14) {
        return Err(Error::Degenerate(
            "c = 0 with a nonzero 2-mode is the logarithmic sector case; use invert_angular_laplacian".into(),
        ));
    }
    let mut out = FourierProfile::zeros(h.degree());
    out.a[0] = h.a[0] / 4.0;
    for k in 1..h.a.len() {
        let (p, q) = spiral_symbol(c, k as f64);
        let d2 = p * p + q * q;
        if d2 == 0.0 {
            continue;
        }
        out.a[k] = (h.a[k] * p - h.b[k] * q) / d2;
        out.b[k] = (h.a[k] * q + h.b[k] * p) / d2;
    }
    Ok(SpiralStream { fourier: out, c })
}

/// Smallest `|symbol|` over `k = 0..=n`.
pub fn spiral_min_symbol(c: f64, n: usize) -> f64 {
    (0..=n)
        .map(|k| {
            let (p, q) = spiral_symbol(c, k as f64);
            p.hypot(q)
        })
        .fold(f64::INFINITY, f64::min)
}
