//! Adaptive Gauss–Kronrod (7/15) quadrature for scalar and small vector integrands.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Outcome of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult<const D: usize> {
    pub value: [f64; D],
    pub error: f64,
    pub evals: usize,
    pub converged: bool,
}

fn gk15<const D: usize, F: FnMut(f64) -> [f64; D]>(f: &mut F, a: f64, b: f64) -> ([f64; D], f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = [0.0; D];
    let mut g = [0.0; D];
    let fc = f(c);
    for d in 0..D {
        k[d] = WGK[7] * fc[d];
        g[d] = WG[3] * fc[d];
    }
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        for d in 0..D {
            let s = f1[d] + f2[d];
            k[d] += WGK[j] * s;
            if j % 2 == 1 {
                g[d] += WG[j / 2] * s;
            }
        }
    }
    let mut err = 0.0f64;
    for d in 0..D {
        k[d] *= h;
        g[d] *= h;
        err = err.max((k[d] - g[d]).abs());
    }
    (k, err)
}

/// Integrate `f` over `[a, b]` split at the sorted `breaks` lying strictly inside.
///
/// Subintervals are bisected until each local error estimate falls under
/// `tol` scaled by the interval fraction. Summation order is fixed by the
/// recursion, so results are deterministic.
pub fn integrate<const D: usize, F: FnMut(f64) -> [f64; D]>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> QuadResult<D> {
    let mut pts = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(|x, y| x.total_cmp(y));
    inner.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (b - a).abs().max(1.0));
    pts.extend(inner);
    pts.push(b);
    let total = (b - a).abs().max(f64::MIN_POSITIVE);
    let mut res = QuadResult { value: [0.0; D], error: 0.0, evals: 0, converged: true };
    for w in pts.windows(2) {
        if w[1] - w[0] <= 0.0 {
            continue;
        }
        adapt(&mut f, w[0], w[1], tol, total, 0, &mut res);
    }
    res
}

fn adapt<const D: usize, F: FnMut(f64) -> [f64; D]>(
    f: &mut F,
    a: f64,
    b: f64,
    tol: f64,
    total: f64,
    depth: usize,
    res: &mut QuadResult<D>,
) {
    let (v, e) = gk15(f, a, b);
    res.evals += 15;
    let local = tol * ((b - a) / total).max(1e-3);
    if e <= local || depth >= 48 || (b - a) < 1e-15 * total {
        if e > local {
            res.converged = false;
        }
        for d in 0..D {
            res.value[d] += v[d];
        }
        res.error += e;
        return;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, tol, total, depth + 1, res);
    adapt(f, m, b, tol, total, depth + 1, res);
}

/// Scalar convenience wrapper.
pub fn integrate1<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> (f64, f64, bool) {
    let r = integrate(|x| [f(x)], a, b, breaks, tol);
    (r.value[0], r.error, r.converged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let (v, _, ok) = integrate1(|x| x.powi(5) - 3.0 * x, -1.0, 2.0, &[], 1e-14);
        assert!(ok);
        assert!((v - (64.0 / 6.0 - 1.0 / 6.0 - 4.5)).abs() < 1e-13);
    }

    #[test]
    fn sqrt_endpoint_singularity() {
        let (v, _, ok) = integrate1(|x| x.sqrt(), 0.0, 1.0, &[], 1e-12);
        assert!(ok);
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn kink_at_break() {
        let (v, r, _) = integrate1(|x| x.abs(), -1.0, 3.0, &[0.0], 1e-14);
        assert!((v - 5.0).abs() < 1e-13, "{v} {r}");
    }
}
