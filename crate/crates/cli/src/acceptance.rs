//! The acceptance suite: thirteen named criteria, each producing a [`RunReport`].

use crate::report::{Check, RunReport};
use patchlab::angle_odes::{self, fit_cm, rotation_speed, MultiCornerState, Rhs};
use patchlab::angular_profile::*;
use patchlab::contour_dynamics::{self as cd, EvolveOptions, Grading, Node, PatchContour, Symmetry};
use patchlab::effective_corner as ec;
use patchlab::polar_elliptic::*;
use patchlab::velocity_field::*;
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};
use std::time::Instant;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub title: &'static str,
    run: fn(&mut RunReport) -> patchlab::Result<()>,
}

pub const CRITERIA: [Criterion; 13] = [
    Criterion { id: 1, name: "mode-inversion", title: "inverse of sin 3θ is -sin 3θ / 5", run: c01 },
    Criterion { id: 2, name: "sector-log-gradient", title: "single-sector gradient grows like 2c ln(1/r)", run: c02 },
    Criterion { id: 3, name: "symmetry-kills-log", title: "4-fold symmetric sector has bounded gradient", run: c03 },
    Criterion { id: 4, name: "symmetrized-kernel", title: "4-fold averaged kernel equals (π/8)|sin 2θ|", run: c04 },
    Criterion { id: 5, name: "angle-rigidity", title: "symmetric single corner keeps its angle and rotates", run: c05 },
    Criterion { id: 6, name: "multi-corner", title: "total angle conserved; closed form matches endpoint route", run: c06 },
    Criterion { id: 7, name: "spiral-lipschitz", title: "spiral gradient bounded, sector gradient logarithmic", run: c07 },
    Criterion { id: 8, name: "key-radial", title: "radial expansion residual O(r); sector key integral", run: c08 },
    Criterion { id: 9, name: "odd-model", title: "odd corner model: exponential opening, power-law closing", run: c09 },
    Criterion { id: 10, name: "single-corner-model", title: "single-corner forms agree; width collapses", run: c10 },
    Criterion { id: 11, name: "bahouri-chemin", title: "odd Fourier system keeps the sign pattern stationary", run: c11 },
    Criterion { id: 12, name: "ill-posedness", title: "corner direction jumps; odd-odd angle opens and closes", run: c12 },
    Criterion { id: 13, name: "velocity-consistency", title: "contour and area velocities agree", run: c13 },
];

pub fn find(key: &str) -> Option<&'static Criterion> {
    let k = key.trim_start_matches("acceptance:");
    CRITERIA.iter().find(|c| c.name == k || k.parse::<u32>().ok() == Some(c.id))
}

impl Criterion {
    pub fn scenario_name(&self) -> String {
        format!("acceptance-{:02}-{}", self.id, self.name)
    }

    /// Run the criterion; a module error is reported as a failed `completed` check.
    pub fn run(&self) -> RunReport {
        let start = Instant::now();
        let mut rep = RunReport::new(&self.scenario_name(), "acceptance");
        rep.meta("criterion", self.id);
        rep.meta("title", self.title);
        if let Err(e) = (self.run)(&mut rep) {
            rep.meta("error", e.to_string());
            rep.push(Check::flag("completed", false));
        }
        rep.finish(start.elapsed().as_secs_f64());
        rep
    }
}

fn worst<I: IntoIterator<Item = f64>>(v: I) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

fn decade_radii() -> Vec<f64> {
    (0..=4).map(|i| 10f64.powf(-4.0 + 0.5 * i as f64)).collect()
}

fn chi(a: f64, b: f64) -> patchlab::Result<IntervalProfile> {
    IntervalProfile::indicator(a, b)
}

fn c01(rep: &mut RunReport) -> patchlab::Result<()> {
    let sol = invert_angular_laplacian(&FourierProfile::mode(16, 3, true));
    rep.push(Check::within("sin3_coefficient", sol.fourier.b[3], -0.2, 1e-12));
    let others = (0..=16).filter(|&k| k != 3).map(|k| sol.fourier.b[k].abs().max(sol.fourier.a[k].abs()));
    rep.push(Check::within("other_modes", worst(others), 0.0, 1e-12));
    Ok(())
}

fn c02(rep: &mut RunReport) -> patchlab::Result<()> {
    let p = chi(-FRAC_PI_8, FRAC_PI_8)?;
    let g = PatchGeometry::sector_stack(&p, 0.0, 1.0)?;
    let fit = log_gradient_fit(&g, [1.0, 0.0], &decade_radii())?;
    let c = 2f64.sqrt() / (8.0 * PI);
    rep.push(Check::relative("d2u1_slope", fit[0][1].abs(), 2.0 * c, 0.02));
    rep.push(Check::relative("d1u2_slope", fit[1][0].abs(), 2.0 * c, 0.02));
    // the fitted sign fixes the (c, s) convention of the log-mode coefficients
    let (cm, _) = second_mode_coefficients(ProfileRef::Intervals(&p));
    rep.meta("fitted_c", 0.5 * fit[0][1]);
    rep.meta("module_c", cm);
    rep.push(Check::flag("sign_convention", (0.5 * fit[0][1]).signum() == cm.signum()));
    Ok(())
}

fn c03(rep: &mut RunReport) -> patchlab::Result<()> {
    let p = symmetrize(&chi(-FRAC_PI_8, FRAC_PI_8)?, 4)?;
    let g = PatchGeometry::sector_stack(&p, 0.0, 1.0)?;
    let fit = log_gradient_fit(&g, [1.0, 0.0], &decade_radii())?;
    rep.meta("fit", fit);
    rep.push(Check::below("log_coefficient_norm", spectral_norm(&fit), 1e-3));
    Ok(())
}

fn c04(rep: &mut RunReport) -> patchlab::Result<()> {
    let n = 10_000;
    let err = worst((0..n).map(|j| {
        let t = -PI + 2.0 * PI * j as f64 / n as f64;
        (symmetrized_kernel(4, t) - PI / 8.0 * (2.0 * t).sin().abs()).abs()
    }));
    rep.push(Check::below("max_pointwise_error", err, 1e-10));
    Ok(())
}

fn c05(rep: &mut RunReport) -> patchlab::Result<()> {
    let z0 = PI / 3.0;
    let s = MultiCornerState::single(3, z0)?;
    let run = angle_odes::integrate(&s, 0.01, 10.0, Rhs::Endpoint)?;
    rep.push(Check::within("ode_angle_drift", run.last().zeta[0], z0, 1e-10));

    let g = Grading { h0: 1e-4, ratio: 1.25, h_max: 0.05 };
    let c = cd::petal_contour(3, z0, 0.0, 1.0, 1.0, g)?;
    let (hist, end) = cd::corner_history(&c, 1.0, 0.25, &[1e-2, 1e-3], EvolveOptions::default())?;
    let v = rotation_speed(z0, 3)?;
    let (first, last) = (&hist[0], hist.last().expect("nonempty"));
    for (a, b) in first.estimates.iter().zip(&last.estimates) {
        rep.push(Check::relative(format!("contour_angle@{:.0e}", a.r), b.spread_angle, z0, 0.01));
        let speed = (b.spread_center - a.spread_center) / (last.t - first.t);
        rep.push(Check::relative(format!("rotation_speed@{:.0e}", a.r), speed, v, 0.02));
    }
    rep.push(Check::below("area_drift", worst(hist.iter().map(|h| (h.area - c.total_area()).abs())), 1e-6));
    rep.meta("nodes_final", end.node_count());
    Ok(())
}

fn c06(rep: &mut RunReport) -> patchlab::Result<()> {
    let s = MultiCornerState::new(3, vec![0.3, 0.2, 0.25], vec![0.3, 0.35], 0.0)?;
    let run = angle_odes::integrate(&s, 0.01, 10.0, Rhs::Endpoint)?;
    let z0 = s.sum_zeta();
    rep.push(Check::below("sum_zeta_drift", worst(run.states.iter().map(|x| (x.sum_zeta() - z0).abs())), 1e-8));

    let fit_probe = MultiCornerState::new(3, vec![0.5, 0.2], vec![0.3], 0.0)?;
    let cm = fit_cm(&fit_probe)?;
    rep.meta("c3", cm);
    let probe = MultiCornerState::new(3, vec![0.35, 0.25], vec![0.45], 0.1)?;
    let a = angle_odes::integrate(&probe, 0.01, 1.0, Rhs::Endpoint)?;
    let b = angle_odes::integrate(&probe, 0.01, 1.0, Rhs::ClosedForm { cm })?;
    let gap = worst(a.states.iter().zip(&b.states).flat_map(|(x, y)| {
        x.zeta.iter().chain(&x.gamma).zip(y.zeta.iter().chain(&y.gamma)).map(|(p, q)| (p - q).abs()).collect::<Vec<_>>()
    }));
    rep.push(Check::below("closed_form_vs_endpoint", gap, 1e-6));
    Ok(())
}

fn c07(rep: &mut RunReport) -> patchlab::Result<()> {
    let f = fourier_of_intervals(&chi(-FRAC_PI_8, FRAC_PI_8)?, 512);
    let radii: Vec<f64> = (1..=6).map(|i| 10f64.powi(-i)).collect();
    let hs = spiral_invert(&f, 5.0)?;
    let sp: Vec<f64> = radii.iter().map(|&r| sup_gradient_on_circle(|x| spiral_velocity(&hs, x), r, 720, 1e-6)).collect();
    let (lo, hi) = sp.iter().fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    rep.meta("spiral_sup_gradient", &sp);
    rep.push(Check::below("spiral_variation", (hi - lo) / hi, 0.1));

    let st = invert_angular_laplacian(&f);
    let sec: Vec<f64> = radii.iter().map(|&r| sup_gradient_on_circle(|x| sector_velocity(&st, x), r, 720, 1e-6)).collect();
    rep.meta("sector_sup_gradient", &sec);
    // least-squares slope against ln(1/r), and the worst departure from the line
    let xs: Vec<f64> = radii.iter().map(|r| (1.0 / r).ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, sec.iter().sum::<f64>() / n);
    let slope = xs.iter().zip(&sec).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let dev = worst(xs.iter().zip(&sec).map(|(x, y)| (y - my - slope * (x - mx)).abs()));
    rep.meta("sector_line_deviation", dev);
    let rate = spectral_norm(&sector_log_gradient(st.c, st.s));
    rep.push(Check::relative("sector_slope", slope, rate, 0.05));
    Ok(())
}

fn c08(rep: &mut RunReport) -> patchlab::Result<()> {
    let sector = |t: f64| chi(-t, t);
    let geoms = [
        ("radial", PatchGeometry::disc([0.0, 0.0], 0.5, 1.0)),
        ("two_fold_sector", PatchGeometry::sector_stack(&symmetrize(&sector(0.4)?, 2)?, 0.0, 1.0)?),
        (
            "three_interval",
            PatchGeometry::sector_stack(
                &IntervalProfile::new(
                    vec![Piece::new(-0.3, 0.5, 1.0), Piece::new(1.2, 2.0, -0.7), Piece::new(2.6, 3.9, 0.4)],
                    1,
                )?,
                0.0,
                1.0,
            )?,
        ),
    ];
    for (name, g) in &geoms {
        let mut v = Vec::new();
        for i in 1..=5 {
            let r = 10f64.powi(-i);
            v.push(radial_expansion(g, [r * 1f64.cos(), r * 1f64.sin()])?.scaled_residual);
        }
        rep.meta(&format!("{name}_scaled_residuals"), &v);
        let hi = v.iter().cloned().fold(0.0, f64::max);
        rep.push(Check::below(format!("{name}_bounded"), hi, 2.0));
        let settle = if hi < 1e-6 { 0.0 } else { (v[4] - v[3]).abs() / hi };
        rep.push(Check::below(format!("{name}_refinement"), settle, 0.05));
    }
    let t0 = 0.35;
    let g = PatchGeometry::sector_stack(&sector(t0)?, 0.0, 1.0)?;
    for r in [1e-5, 1e-3, 1e-1] {
        let (_, ic, _) = key_integrals(&g, r, QuadOptions::default());
        rep.push(Check::within(format!("sector_ic@{r:.0e}"), ic, (2.0 * t0).sin() * (1.0 / r).ln(), 1e-6));
    }
    Ok(())
}

fn c09(rep: &mut RunReport) -> patchlab::Result<()> {
    let up = ec::odd_corner_integrate(FRAC_PI_4, 1.0, 50.0, 0.01)?;
    let (k, res) = up.exponential_fit(5.0, 50.0);
    rep.meta("expanding_rate", k);
    rep.push(Check::above("expanding_rate", up.expansion_rate(5.0, 50.0), 0.0));
    rep.push(Check::below("expanding_fit_residual", res, 1e-2));

    let down = ec::odd_corner_integrate(FRAC_PI_4, -1.0, 2000.0, 0.01)?;
    let (c, cc) = down.decay_bounds(0.0, 1000.0);
    rep.meta("decay_constants", [c, cc]);
    rep.push(Check::above("decay_lower_constant", c, 0.0));
    rep.push(Check::flag("decay_upper_constant_finite", cc.is_finite() && cc > 0.0));
    let slope = down.loglog_slope(100.0, 1000.0);
    let j_inf = down.states.last().expect("nonempty").j;
    rep.meta("j_inf", j_inf);
    rep.meta("minus_2j_over_pi", -2.0 * j_inf / PI);
    rep.push(Check::within("loglog_slope", slope, -1.0, 0.1));
    rep.push(Check::below("tail_increment", down.tail_increment(1000.0), 1e-6));
    Ok(())
}

fn c10(rep: &mut RunReport) -> patchlab::Result<()> {
    let b0 = FRAC_PI_8;
    let a = ec::single_corner_integrate(0.0, b0, 10.0, 0.001)?;
    let b = ec::single_corner_second_order(0.0, b0, 10.0, 0.001)?;
    let gap = worst(a.states.iter().zip(&b.rows).map(|(x, (_, y))| (x.b - y[0]).abs().max((x.a - y[1]).abs())));
    rep.push(Check::below("forms_agree", gap, 1e-5));
    let y0 = &b.rows[0].1;
    rep.push(Check::within("initial_dB", y0[2], 0.0, 0.0));
    rep.push(Check::within("initial_dA", y0[3], -(2.0 * b0).cos() * (2.0 * b0).sin() / PI, 0.0));

    let long = ec::single_corner_integrate(0.0, b0, 10_000.0, 0.05)?;
    let last = long.last();
    rep.meta("a_inf", last.a);
    rep.meta("b_final", last.b);
    rep.push(Check::below("b_final", last.b, 1e-3));
    rep.push(Check::flag("a_settles", last.a.is_finite() && long.settle_time(1e-4, 1e-3).is_some()));
    Ok(())
}

fn c11(rep: &mut RunReport) -> patchlab::Result<()> {
    let n = ec::ODD_FOURIER_MODES;
    let s = ec::OddFourierState::bahouri_chemin(1.0, n);
    let mut y = s.g.clone();
    y.push(s.j);
    let mut d = vec![0.0; y.len()];
    ec::odd_fourier_rhs(0.0, &y, &mut d);
    rep.push(Check::below("interior_rates", worst(d[..n - 2].iter().map(|v| v.abs())), 1e-12));
    let run = ec::odd_fourier_integrate(&s, 1.0, 0.001, 10);
    let drift = worst(run.iter().flat_map(|x| x.g[..n - 2].iter().zip(&s.g).map(|(p, q)| (p - q).abs()).collect::<Vec<_>>()));
    rep.push(Check::below("interior_drift", drift, 1e-6));
    Ok(())
}

fn c12(rep: &mut RunReport) -> patchlab::Result<()> {
    let c_min = 0.05;
    let g = Grading { h0: 1e-4, ratio: 1.25, h_max: 0.02 };
    for eps in [1e-2f64, 1e-3] {
        let j = cd::petal_contour(2, FRAC_PI_4, -FRAC_PI_8, 1.0, 1.0, g)?;
        let t = 1.0 / (1.0 / eps).ln();
        let (h, _) = cd::corner_history(&j, t, t, &[eps], EvolveOptions::default())?;
        let advance = h[1].estimates[0].fit_center - h[0].estimates[0].fit_center;
        // the corner direction turns clockwise
        rep.push(Check::above(format!("jump@{eps:.0e}"), -advance, c_min));
    }
    let og = Grading { h0: 1e-6, ratio: 1.25, h_max: 0.01 };
    let tracked = [1e-2, 1e-3, 1e-4];
    let fwd = cd::oddodd_experiment(&cd::oddodd_contour(&tracked, -1.0, og)?, 0.2, 4, 0.5, EvolveOptions::default())?;
    for tr in &fwd {
        let alpha = if tr.truncated { f64::NAN } else { *tr.alpha.last().expect("sampled") };
        rep.push(Check::below(format!("forward_alpha@{:.0e}", tr.x), alpha, 1.0 - 0.05));
    }
    let back = cd::oddodd_experiment(&cd::oddodd_contour(&tracked, 1.0, og)?, 0.2, 4, 0.5, EvolveOptions::default())?;
    let tr = &back[2];
    let (z0, z1) = (tr.z[0], *tr.z.last().expect("sampled"));
    let growth = if tr.truncated { f64::NAN } else { (z1[0] / z1[1]) / (z0[0] / z0[1]) };
    rep.push(Check::above(format!("backward_ratio@{:.0e}", tr.x), growth, 2.0));
    Ok(())
}

fn kronecker(i: usize) -> Vec2 {
    let (a, b) = (0.754_877_666_246_692_8, 0.569_840_290_998_053_3);
    [2.4 * (i as f64 * a).fract() - 1.2, 2.4 * (i as f64 * b).fract() - 1.2]
}

fn dist_to_loop(x: Vec2, pts: &[Vec2]) -> f64 {
    let n = pts.len();
    (0..n)
            .map(|i| {
                let (a, b) = (pts[i], pts[(i + 1) % n]);
                let e = [b[0] - a[0], b[1] - a[1]];
                let l2 = e[0] * e[0] + e[1] * e[1];
                let s = (((x[0] - a[0]) * e[0] + (x[1] - a[1]) * e[1]) / l2).clamp(0.0, 1.0);
                (x[0] - a[0] - s * e[0]).hypot(x[1] - a[1] - s * e[1])
            })
            .fold(f64::INFINITY, f64::min)
}

/// Largest velocity gap over the first 100 probes at least `gap` away from the boundary.
fn contour_vs_quadrature(c: &PatchContour, g: &PatchGeometry, gap: f64) -> patchlab::Result<f64> {
    let full = c.unrolled();
    let loops: Vec<Vec<Vec2>> = (0..full.loops.len()).map(|k| full.loop_points(k)).collect();
    let mut err = 0.0f64;
    let (mut used, mut i) = (0, 0);
    while used < 100 {
        i += 1;
        let x = kronecker(i);
        if loops.iter().any(|l| dist_to_loop(x, l) < gap) {
            continue;
        }
        let a = c.velocity(&[x])[0];
        let b = biot_savart_velocity(g, x)?;
        err = err.max((a[0] - b[0]).abs().max((a[1] - b[1]).abs()));
        used += 1;
    }
    Ok(err)
}

fn c13(rep: &mut RunReport) -> patchlab::Result<()> {
    let verts = vec![[-0.6, -0.4], [0.8, -0.5], [0.5, 0.3], [0.9, 0.9], [-0.3, 0.7]];
    let poly = PatchContour::new(vec![verts.iter().map(|&p| Node::plain(p)).collect()], Symmetry::None, 1.3, Grading::uniform(0.1))?;
    rep.push(Check::below("polygon", contour_vs_quadrature(&poly, &PatchGeometry::polygon(verts, 1.3), 1e-2)?, 1e-4));

    let sec = cd::sector_contour(0.2, 0.9, 1.0, Symmetry::Rotation(3), 1.0, Grading::uniform(2e-3))?;
    let stack = PatchGeometry::sector_stack(&symmetrize(&chi(0.2, 0.9)?, 3)?, 0.0, 1.0)?;
    rep.push(Check::below("sector_stack", contour_vs_quadrature(&sec, &stack, 2e-2)?, 1e-4));

    let petal = cd::petal_contour(3, PI / 3.0, 0.0, 1.0, 1.0, Grading { h0: 1e-3, ratio: 1.25, h_max: 0.05 })?;
    let full = petal.unrolled();
    let mut pg = PatchGeometry::new(vec![]);
    for k in 0..full.loops.len() {
        pg.push(Shape::Polygon(full.loop_points(k)), 1.0);
    }
    rep.push(Check::below("petal", contour_vs_quadrature(&petal, &pg, 1e-2)?, 1e-4));

    let disc = PatchGeometry::disc([0.0, 0.0], 1.0, 1.0);
    let ngon = cd::disc_contour([0.0, 0.0], 1.0, 8192, 1.0)?;
    let pts = [[0.5, 0.0], [0.3, -0.4], [0.0, 2.0], [-1.2, 1.6]];
    let closed = |x: Vec2| {
        let r2 = x[0] * x[0] + x[1] * x[1];
        let k = if r2 <= 1.0 { 0.5 } else { 0.5 / r2 };
        [-k * x[1], k * x[0]]
    };
    let mut e_quad = 0.0f64;
    let mut e_cd = 0.0f64;
    for x in pts {
        let want = closed(x);
        let u = biot_savart_velocity(&disc, x)?;
        let v = ngon.velocity(&[x])[0];
        e_quad = e_quad.max((u[0] - want[0]).hypot(u[1] - want[1]));
        e_cd = e_cd.max((v[0] - want[0]).hypot(v[1] - want[1]));
    }
    rep.push(Check::below("disc_quadrature", e_quad, 1e-6));
    rep.push(Check::below("disc_contour", e_cd, 1e-6));
    Ok(())
}
