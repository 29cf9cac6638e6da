//! Executes a validated [`Scenario`] and writes its artifacts.

use crate::report::{Check, RunReport};
use crate::scenario::*;
use crate::svg;
use patchlab::angle_odes::{self, fit_cm, rotation_speed, MultiCornerState, Rhs};
use patchlab::angular_profile::IntervalProfile;
use patchlab::contour_dynamics::{self as cd, EvolveOptions, PatchContour, Symmetry};
use patchlab::effective_corner as ec;
use patchlab::homogeneous_transport::{self as ht, AlexanderState, ProfileData, ProfileRun};
use patchlab::velocity_field::{field_sample, PatchGeometry, QuadOptions};
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
/// `regress` only: nothing failed but some golden files are missing.
pub const EXIT_NEW: i32 = 4;

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    /// Module failure (non-convergence, collision with no way forward, bad geometry).
    Numerical(String),
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Numerical(_) | RunError::Io(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "config error: {e}"),
            RunError::Numerical(e) => write!(f, "numerical failure: {e}"),
            RunError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<patchlab::Error> for RunError {
    fn from(e: patchlab::Error) -> Self {
        RunError::Numerical(e.to_string())
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

type Res<T> = std::result::Result<T, RunError>;

/// Output directory with a record of what was written.
pub struct Artifacts {
    pub dir: PathBuf,
    pub files: Vec<String>,
    plot: bool,
}

impl Artifacts {
    pub fn new(dir: &Path, plot: bool) -> Res<Self> {
        std::fs::create_dir_all(dir)?;
        let marker = dir.join(".failed");
        if marker.exists() {
            std::fs::remove_file(marker)?;
        }
        Ok(Artifacts { dir: dir.to_path_buf(), files: vec![], plot })
    }

    pub fn write(&mut self, name: &str, content: &str) -> Res<()> {
        std::fs::write(self.dir.join(name), content)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn svg(&mut self, name: &str, content: impl FnOnce() -> String) -> Res<()> {
        if self.plot {
            self.write(name, &content())?;
        }
        Ok(())
    }

    fn fail(&self, msg: &str) {
        let _ = std::fs::write(self.dir.join(".failed"), format!("{msg}\n"));
    }
}

/// Run a scenario into `out` (or the scenario's own `out`, or `./out/<name>`).
pub fn run(s: &Scenario, out: Option<&Path>) -> Res<RunReport> {
    let dir = out.map(Path::to_path_buf).or_else(|| s.out.clone()).unwrap_or_else(|| PathBuf::from("out").join(&s.name));
    let mut art = Artifacts::new(&dir, s.plot)?;
    let start = Instant::now();
    let mut rep = RunReport::new(&s.name, s.kind.name());
    let res = match &s.params {
        Params::FieldProbe(p) => field_probe(s, p, &mut rep, &mut art),
        Params::AngleOde(p) => angle_ode(s, p, &mut rep, &mut art),
        Params::Transport1d(p) => transport(s, &p.profile, None, p.t_span, p.dt, &mut rep, &mut art),
        Params::Spiral1d(p) => transport(s, &p.profile, Some(p.c), p.t_span, p.dt, &mut rep, &mut art),
        Params::Alexander(p) => alexander(s, p, &mut rep, &mut art),
        Params::EffectiveOdd(p) => effective_odd(s, p, &mut rep, &mut art),
        Params::EffectiveSingle(p) => effective_single(s, p, &mut rep, &mut art),
        Params::Contour(p) => contour(s, p, &mut rep, &mut art),
        Params::Oddodd(p) => oddodd(s, p, &mut rep, &mut art),
    };
    if let Err(e) = res {
        art.fail(&e.to_string());
        return Err(e);
    }
    rep.finish(start.elapsed().as_secs_f64());
    rep.meta("artifacts", &art.files);
    art.write("report.json", &rep.to_json())?;
    Ok(rep)
}

fn csv_line(vals: &[f64]) -> String {
    let cells: Vec<String> = vals.iter().map(|v| format!("{v:.15e}")).collect();
    cells.join(",") + "\n"
}

fn max_drift(vals: impl Iterator<Item = f64>, v0: f64) -> f64 {
    vals.map(|v| (v - v0).abs()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------- kinds

fn field_probe(s: &Scenario, p: &FieldProbe, rep: &mut RunReport, art: &mut Artifacts) -> Res<()> {
    let g = match &p.geometry {
        GeometrySpec::Disc { center, radius, amplitude } => PatchGeometry::disc(*center, *radius, *amplitude),
        GeometrySpec::SectorStack { pieces, symmetry, r0, r1 } => {
            PatchGeometry::sector_stack(&ProfileSpec::intervals(pieces, *symmetry)?, *r0, *r1)?
        }
        GeometrySpec::Polygon { vertices, amplitude } => PatchGeometry::polygon(vertices.clone(), *amplitude),
    };
    let mut csv = String::from(if p.gradient { "x1,x2,u1,u2,d11,d12,d21,d22\n" } else { "x1,x2,u1,u2\n" });
    let mut worst_disc = 0.0f64;
    let mut worst_div = 0.0f64;
    for &x in &p.points {
        let f = field_sample(&g, x, QuadOptions::default());
        if !f.converged {
            return Err(patchlab::Error::Quadrature { achieved: f.error }.into());
        }
        let mut row = vec![x[0], x[1], f.u[0], f.u[1]];
        if p.gradient {
            row.extend([f.grad[0][0], f.grad[0][1], f.grad[1][0], f.grad[1][1]]);
            worst_div = worst_div.max(f.divergence().abs());
        }
        csv += &csv_line(&row);
        if let GeometrySpec::Disc { center, radius, amplitude } = p.geometry {
            let d = [x[0] - center[0], x[1] - center[1]];
            let r2 = d[0] * d[0] + d[1] * d[1];
            let k = if r2 <= radius * radius { 0.5 * amplitude } else { 0.5 * amplitude * radius * radius / r2 };
            let want = [-k * d[1], k * d[0]];
            worst_disc = worst_disc.max((f.u[0] - want[0]).hypot(f.u[1] - want[1]));
        }
    }
    art.write("field.csv", &csv)?;
    if matches!(p.geometry, GeometrySpec::Disc { .. }) {
        rep.push(Check::below("disc_closed_form", worst_disc, s.tol("disc_closed_form")));
    }
    if p.gradient {
        rep.push(Check::below("divergence", worst_div, s.tol("divergence")));
    }
    rep.meta("points", p.points.len());
    rep.meta("quadrature_tol", QuadOptions::default().tol);
    Ok(())
}

fn angle_ode(s: &Scenario, p: &AngleOde, rep: &mut RunReport, art: &mut Artifacts) -> Res<()> {
    let st = MultiCornerState::new(p.m, p.zeta.clone(), p.gamma.clone(), p.beta1)?;
    let rhs = match p.rhs {
        RhsSpec::Endpoint => Rhs::Endpoint,
        RhsSpec::ClosedForm => {
            let cm = match p.cm {
                Some(c) => c,
                None => fit_cm(&st)?,
            };
            rep.meta("cm", cm);
            Rhs::ClosedForm { cm }
        }
    };
    let run = angle_odes::integrate(&st, p.dt, p.t_span, rhs)?;
    art.write("angles.csv", &run.to_csv())?;
    let z0 = st.sum_zeta();
    rep.push(Check::below("sum_zeta_drift", max_drift(run.states.iter().map(|x| x.sum_zeta()), z0), s.tol("sum_zeta_drift")));
    rep.meta("collided", run.collided);
    rep.meta("steps", run.states.len() - 1);
    rep.meta("dt", p.dt);
    rep.meta("final_zeta", &run.last().zeta);
    rep.meta("final_gamma", &run.last().gamma);
    if st.k() == 1 {
        rep.meta("rotation_speed", rotation_speed(st.zeta[0], st.m)?);
    }
    art.svg("angles.svg", || {
        let series: Vec<(String, Vec<[f64; 2]>)> = (0..st.k())
            .map(|j| (format!("zeta_{}", j + 1), run.states.iter().map(|x| [x.t, x.zeta[j]]).collect()))
            .collect();
        svg::line_plot(&s.name, "t", "corner width", &series, false, false)
    })
}

fn interval_csv(run: &[(f64, IntervalProfile)]) -> String {
    let mut out = String::from("t,piece,start,end,value\n");
    for (t, p) in run {
        for (i, q) in p.pieces.iter().enumerate() {
            out += &format!("{t:.12e},{i},{:.15e},{:.15e},{:.15e}\n", q.start, q.end, q.value);
        }
    }
    out
}

fn transport(s: &Scenario, spec: &ProfileSpec, spiral: Option<f64>, t_span: f64, dt: f64, rep: &mut RunReport, art: &mut Artifacts) -> Res<()> {
    let data = match spec {
        ProfileSpec::Intervals { pieces, symmetry } => ProfileData::Intervals(ProfileSpec::intervals(pieces, *symmetry)?),
        ProfileSpec::Fourier { a, b, m } => {
            ProfileData::Fourier { h: ProfileSpec::fourier(a, b).map_err(RunError::Numerical)?, m: *m }
        }
    };
    let run = match spiral {
        None => ht::evolve_profile(&data, t_span, dt)?,
        Some(c) => ht::evolve_spiral(&data, c, t_span, dt)?,
    };
    rep.meta("dt", dt);
    if let Some(c) = spiral {
        rep.meta("c", c);
    }
    match run {
        ProfileRun::Intervals(v) => {
            art.write("transport.csv", &interval_csv(&v))?;
            let (sup0, int0, meas0) = (v[0].1.sup_norm(), v[0].1.integral(), v[0].1.measure());
            rep.push(Check::below("sup_norm_drift", max_drift(v.iter().map(|x| x.1.sup_norm()), sup0), s.tol("sup_norm_drift")));
            if spiral.is_none() {
                let d = max_drift(v.iter().map(|x| x.1.integral()), int0);
                rep.push(Check::below("integral_drift", d, s.tol("integral_drift")));
            }
            let last = &v.last().expect("nonempty").1;
            rep.meta("measure_initial", meas0);
            rep.meta("measure_final", last.measure());
            art.svg("transport.svg", || {
                let k = v[0].1.pieces.len();
                let mut series = Vec::new();
                for i in 0..k {
                    series.push((format!("start_{i}"), v.iter().map(|(t, p)| [*t, p.pieces[i].start]).collect()));
                    series.push((format!("end_{i}"), v.iter().map(|(t, p)| [*t, p.pieces[i].end]).collect()));
                }
                svg::line_plot(&s.name, "t", "edge angle", &series, false, false)
            })?;
        }
        ProfileRun::Grid(g) => {
            art.write("transport.csv", &g.to_csv())?;
            let g0 = &g.grids[0];
            rep.push(Check::below("sup_norm_drift", max_drift(g.grids.iter().map(|x| x.sup_norm()), g0.sup_norm()), s.tol("sup_norm_drift")));
            if spiral.is_none() {
                let d = max_drift(g.grids.iter().map(|x| x.integral_spectral()), g0.integral_spectral());
                rep.push(Check::below("integral_drift", d, s.tol("integral_drift")));
            }
            rep.meta("particles", g0.len());
            art.svg("transport.svg", || {
                let stride = (g0.len() / 8).max(1);
                let series: Vec<(String, Vec<[f64; 2]>)> = (0..g0.len())
                    .step_by(stride)
                    .map(|i| (format!("particle {i}"), g.grids.iter().map(|x| [x.t, x.theta[i]]).collect()))
                    .collect();
                svg::line_plot(&s.name, "t", "theta", &series, false, false)
            })?;
        }
    }
    Ok(())
}

fn alexander(s: &Scenario, p: &Alexander, rep: &mut RunReport, art: &mut Artifacts) -> Res<()> {
    let st = AlexanderState::new(p.theta.clone(), p.weights.clone(), p.c)?;
    let run = ht::evolve_alexander(&st, p.t_span, p.dt)?;
    art.write("alexander.csv", &run.to_csv())?;
    let w0 = st.total_weight();
    rep.push(Check::below("weight_drift", max_drift(run.states.iter().map(|x| x.total_weight()), w0), s.tol("weight_drift")));
    rep.meta("collided", run.collided);
    rep.meta("final_theta", &run.states.last().expect("nonempty").theta);
    art.svg("alexander.svg", || {
        let series: Vec<(String, Vec<[f64; 2]>)> = (0..st.theta.len())
            .map(|i| (format!("mass {i}"), run.states.iter().map(|x| [x.t, x.theta[i]]).collect()))
            .collect();
        svg::line_plot(&s.name, "t", "theta", &series, false, false)
    })
}

fn effective_odd(s: &Scenario, p: &EffectiveOdd, rep: &mut RunReport, art: &mut Artifacts) -> Res<()> {
    let expanding = p.direction == Direction::Expanding;
    let sign = if expanding { 1.0 } else { -1.0 };
    let t_span = p.t_span.unwrap_or(if expanding { 50.0 } else { 2000.0 });
    let [lo, hi] = p.fit.unwrap_or(if expanding { [5.0, 50.0] } else { [100.0, 1000.0] });
    if hi > t_span {
        return Err(RunError::Config(ConfigError { path: "params.fit".into(), message: format!("fit window ends after t_span = {t_span}") }));
    }
    let run = ec::odd_corner_integrate(p.a0, sign, t_span, p.dtau)?;
    art.write("odd_corner.csv", &run.to_csv())?;
    let last = run.states.last().expect("nonempty");
    rep.meta("a_final", last.a);
    rep.meta("j_final", last.j);
    rep.meta("dtau", p.dtau);
    rep.meta("fit_window", [lo, hi]);
    if expanding {
        let (k, res) = run.exponential_fit(lo, hi);
        rep.meta("fitted_exponential_rate", k);
        rep.push(Check::above("expansion_rate", run.expansion_rate(lo, hi), 0.0));
        rep.push(Check::below("exp_fit_residual", res, s.tol("exp_fit_residual")));
    } else {
        let (c, cc) = run.decay_bounds(0.0, hi);
        let slope = run.loglog_slope(lo, hi);
        rep.meta("decay_lower_constant", c);
        rep.meta("decay_upper_constant", cc);
        rep.meta("slope", slope);
        rep.push(Check::above("decay_lower_constant", c, 0.0));
        rep.push(Check::flag("decay_upper_constant_finite", cc.is_finite()));
        rep.push(Check::within("loglog_slope", slope, -1.0, s.tol("loglog_slope")));
        rep.push(Check::within("slope_vs_j", slope, -2.0 * last.j / std::f64::consts::PI, s.tol("slope_vs_j")));
        rep.push(Check::below("tail_increment", run.tail_increment(hi), s.tol("tail_increment")));
    }
    art.svg("odd_corner.svg", || {
        let pts: Vec<[f64; 2]> = run.states.iter().filter(|x| x.tau > 0.0).map(|x| [x.tau, x.a]).collect();
        svg::line_plot(&s.name, "tau", "A", &[("A".to_string(), pts)], true, !expanding)
    })
}

fn effective_single(s: &Scenario, p: &EffectiveSingle, rep: &mut RunReport, art: &mut Artifacts) -> Res<()> {
    let a = ec::single_corner_integrate(p.a0, p.b0, p.t_span, p.dtau)?;
    let b = ec::single_corner_second_order(p.a0, p.b0, p.t_span, p.dtau)?;
    art.write("single_corner.csv", &a.to_csv())?;
    let mut so = String::from("tau,B,A,dB,dA\n");
    for (t, y) in &b.rows {
        so += &format!("{t:.10e},{}", csv_line(y));
    }
    art.write("second_order.csv", &so)?;
    let gap = a
        .states
        .iter()
        .zip(&b.rows)
        .map(|(x, (_, y))| (x.b - y[0]).abs().max((x.a - y[1]).abs()))
        .fold(0.0, f64::max);
    rep.push(Check::below("forms_agree", gap, s.tol("forms_agree")));
    let printed = -(2.0 * p.b0).cos() * (2.0 * p.b0).sin() / std::f64::consts::PI;
    let d = ec::single_corner_rhs(0.0, &[p.a0, p.b0, 0.0, 0.0]);
    rep.push(Check::within("initial_slope", d[0], printed, s.tol("initial_slope")));
    rep.push(Check::within("initial_slope_second_order", b.rows[0].1[3], printed, s.tol("initial_slope")));
    rep.push(Check::within("initial_width_slope", d[1], 0.0, s.tol("initial_slope")));
    let last = a.last();
    rep.meta("a_final", last.a);
    rep.meta("b_final", last.b);
    rep.meta("shared_window", b.rows.last().map(|r| r.0));
    rep.meta("second_order_halted", &b.halted);
    rep.meta("asymptote", a.asymptote);
    art.svg("single_corner.svg", || {
        let pa: Vec<[f64; 2]> = a.states.iter().map(|x| [x.tau, x.a]).collect();
        let pb: Vec<[f64; 2]> = a.states.iter().map(|x| [x.tau, x.b]).collect();
        svg::line_plot(&s.name, "tau", "angle", &[("A".into(), pa), ("B".into(), pb)], false, false)
    })
}

fn build_contour(p: &Contour) -> Res<(PatchContour, Option<(f64, usize)>)> {
    Ok(match p.shape {
        ShapeSpec::Petal { m, zeta, beta, r0 } => (cd::petal_contour(m, zeta, beta, r0, p.amplitude, p.grading)?, Some((zeta, m))),
        ShapeSpec::Sector { lo, hi, r, m } => {
            (cd::sector_contour(lo, hi, r, Symmetry::Rotation(m), p.amplitude, p.grading)?, Some((hi - lo, m)))
        }
        ShapeSpec::Disc { center, r, n } => (cd::disc_contour(center, r, n, p.amplitude)?, None),
    })
}

fn angles_csv(hist: &[cd::CornerSample]) -> String {
    let mut out = String::from("t,r,nodes_in_ball,skipped,spread_angle,spread_center,fit_angle,fit_center,fit_fraction\n");
    for h in hist {
        for e in &h.estimates {
            out += &format!(
                "{:.12e},{:.6e},{},{},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}\n",
                h.t, e.r, e.nodes_in_ball, e.skipped as u8, e.spread_angle, e.spread_center, e.fit_angle, e.fit_center, e.fit_fraction
            );
        }
    }
    out
}

fn full_loops(c: &PatchContour) -> Vec<Vec<[f64; 2]>> {
    let u = c.unrolled();
    (0..u.loops.len()).map(|k| u.loop_points(k)).collect()
}

fn contour(s: &Scenario, p: &Contour, rep: &mut RunReport, art: &mut Artifacts) -> Res<()> {
    let (c0, corner) = build_contour(p)?;
    let opt = EvolveOptions { dt_max: p.dt_max, ..Default::default() };
    let a0 = c0.total_area();
    rep.meta("nodes_initial", c0.node_count());
    rep.meta("grading", p.grading);
    rep.meta("dt_max", p.dt_max);
    let end = match corner {
        None => {
            let snaps = cd::evolve(&c0, p.t_span, EvolveOptions { snapshot_every: p.every, ..opt })?;
            art.write("contour.csv", &cd::contour_csv(&snaps))?;
            let drift = max_drift(snaps.iter().map(|c| c.total_area()), a0);
            rep.push(Check::below("area_drift", drift, s.tol("area_drift")));
            snaps.last().expect("nonempty").clone()
        }
        Some((zeta, m)) => {
            let (hist, end) = cd::corner_history(&c0, p.t_span, p.every, &p.scales, opt)?;
            art.write("contour.csv", &cd::contour_csv(&[c0.clone(), end.clone()]))?;
            art.write("angles.csv", &angles_csv(&hist))?;
            let drift = max_drift(hist.iter().map(|h| h.area), a0);
            rep.push(Check::below("area_drift", drift, s.tol("area_drift")));
            if m >= 3 {
                let v = rotation_speed(zeta, m)?;
                rep.meta("rotation_speed_expected", v);
                let (first, last) = (&hist[0], hist.last().expect("nonempty"));
                for (e0, e1) in first.estimates.iter().zip(&last.estimates) {
                    if e0.skipped || e1.skipped {
                        rep.push(Check::flag(format!("scale_{:.0e}_resolved", e0.r), false));
                        continue;
                    }
                    rep.push(Check::relative(format!("angle_drift@{:.0e}", e0.r), e1.spread_angle, zeta, s.tol("angle_drift")));
                    let speed = (e1.spread_center - e0.spread_center) / (last.t - first.t);
                    rep.push(Check::relative(format!("rotation_speed@{:.0e}", e0.r), speed, v, s.tol("rotation_speed")));
                }
            }
            art.svg("angles.svg", || {
                let series: Vec<(String, Vec<[f64; 2]>)> = p
                    .scales
                    .iter()
                    .enumerate()
                    .map(|(k, r)| (format!("r = {r:.0e}"), hist.iter().map(|h| [h.t, h.estimates[k].spread_angle]).collect()))
                    .collect();
                svg::line_plot(&s.name, "t", "corner angle", &series, false, false)
            })?;
            end
        }
    };
    rep.meta("nodes_final", end.node_count());
    art.svg("contour.svg", || {
        svg::outlines(&s.name, &[("t = 0".to_string(), full_loops(&c0)), (format!("t = {}", end.t), full_loops(&end))])
    })
}

fn oddodd(s: &Scenario, p: &Oddodd, rep: &mut RunReport, art: &mut Artifacts) -> Res<()> {
    // the forward (angle-opening) run carries negative vorticity in the first quadrant
    let amp = if p.direction == TimeDirection::Forward { -1.0 } else { 1.0 };
    let c = cd::oddodd_contour(&p.tracked, amp, p.grading)?;
    let opt = EvolveOptions { dt_max: p.dt_max, ..Default::default() };
    let tracks = cd::oddodd_experiment(&c, p.t_span, p.samples, p.window, opt)?;
    let mut csv = String::from("x,t,z1,z2,alpha\n");
    for tr in &tracks {
        for ((t, z), a) in tr.t.iter().zip(&tr.z).zip(&tr.alpha) {
            csv += &format!("{:.6e},{t:.12e},{:.15e},{:.15e},{a:.15e}\n", tr.x, z[0], z[1]);
        }
    }
    art.write("tracks.csv", &csv)?;
    rep.meta("amplitude", amp);
    rep.meta("nodes", c.node_count());
    match p.direction {
        TimeDirection::Forward => {
            let bound = 1.0 - s.tol("alpha_margin");
            for tr in &tracks {
                let alpha = if tr.truncated { f64::NAN } else { *tr.alpha.last().expect("initial sample") };
                rep.push(Check::below(format!("alpha@{:.0e}", tr.x), alpha, bound));
            }
        }
        TimeDirection::Backward => {
            let tr = tracks
                .iter()
                .min_by(|a, b| a.x.total_cmp(&b.x))
                .ok_or_else(|| RunError::Numerical("no tracked particles".into()))?;
            let (z0, z1) = (tr.z[0], *tr.z.last().expect("initial sample"));
            let growth = if tr.truncated { f64::NAN } else { (z1[0] / z1[1]) / (z0[0] / z0[1]) };
            rep.push(Check::above(format!("ratio_growth@{:.0e}", tr.x), growth, s.tol("ratio_growth")));
        }
    }
    art.svg("tracks.svg", || {
        let series: Vec<(String, Vec<[f64; 2]>)> = tracks
            .iter()
            .map(|tr| (format!("x = {:.0e}", tr.x), tr.t.iter().zip(&tr.alpha).map(|(t, a)| [*t, *a]).collect()))
            .collect();
        svg::line_plot(&s.name, "t", "ln z2 / ln z1", &series, false, false)
    })
}
