//! Classical fixed-step fourth-order Runge–Kutta on flat state vectors.

/// One RK4 step of `y' = f(t, y)`. The right-hand side writes into its output slice
/// and may fail, in which case the error is passed through untouched.
pub fn rk4_step<E, F>(f: &mut F, t: f64, y: &[f64], dt: f64) -> Result<Vec<f64>, E>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<(), E> + ?Sized,
{
    let n = y.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    f(t, y, &mut k1)?;
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * dt * k1[i];
    }
    f(t + 0.5 * dt, &tmp, &mut k2)?;
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * dt * k2[i];
    }
    f(t + 0.5 * dt, &tmp, &mut k3)?;
    for i in 0..n {
        tmp[i] = y[i] + dt * k3[i];
    }
    f(t + dt, &tmp, &mut k4)?;
    Ok((0..n)
        .map(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Integrate from `t0` to `t1` with `steps` equal steps, calling `obs` after each accepted step.
pub fn rk4_integrate<E, F, O>(f: &mut F, t0: f64, y0: &[f64], t1: f64, steps: usize, mut obs: O) -> Result<Vec<f64>, E>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<(), E> + ?Sized,
    O: FnMut(f64, &[f64]),
{
    let dt = (t1 - t0) / steps as f64;
    let mut y = y0.to_vec();
    for i in 0..steps {
        let t = t0 + i as f64 * dt;
        y = rk4_step(f, t, &y, dt)?;
        obs(t0 + (i + 1) as f64 * dt, &y);
    }
    Ok(y)
}

/// Number of equal steps covering `span` with step at most `dt`.
pub fn step_count(span: f64, dt: f64) -> usize {
    let n = span.abs() / dt;
    let k = if (n - n.round()).abs() <= 1e-9 * n.max(1.0) { n.round() } else { n.ceil() };
    (k as usize).max(1)
}
