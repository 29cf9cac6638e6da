use patchlab::angular_profile::*;
use patchlab::polar_elliptic::*;
use patchlab::velocity_field::*;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_8, PI, TAU};

fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
    (a[0] - b[0]).hypot(a[1] - b[1]) < tol
}

fn sector(t0: f64) -> IntervalProfile {
    IntervalProfile::indicator(-t0, t0).unwrap()
}

#[test]
fn unit_disc_inside_and_outside() {
    let g = PatchGeometry::disc([0.0, 0.0], 1.0, 1.0);
    for x in [[0.5, 0.0], [0.3, -0.4], [0.0, 0.5]] {
        let u = biot_savart_velocity(&g, x).unwrap();
        assert!(close(u, [-0.5 * x[1], 0.5 * x[0]], 1e-6), "{x:?} {u:?}");
    }
    for x in [[2.0, 0.0], [-1.2, 1.6]] {
        let r2 = x[0] * x[0] + x[1] * x[1];
        let u = biot_savart_velocity(&g, x).unwrap();
        assert!(close(u, [-0.5 * x[1] / r2, 0.5 * x[0] / r2], 1e-6), "{x:?} {u:?}");
    }
    let du = velocity_gradient(&g, [0.2, 0.1]).unwrap();
    assert!((du[0][1] + 0.5).abs() < 1e-6 && (du[1][0] - 0.5).abs() < 1e-6);
    assert!(du[0][0].abs() < 1e-6 && du[1][1].abs() < 1e-6);
}

#[test]
fn homogeneous_examples() {
    let quarter = invert_angular_laplacian(&FourierProfile::mode(8, 0, false));
    let x = [0.3, -0.7];
    assert!(close(homogeneous_velocity(&quarter, x), [0.35, 0.15], 1e-15));
    let s3 = invert_angular_laplacian(&FourierProfile::mode(8, 3, true));
    assert!(close(homogeneous_velocity(&s3, [1.0, 0.0]), [0.6, 0.0], 1e-15));
    assert_eq!(homogeneous_velocity(&s3, [0.0, 0.0]), [0.0, 0.0]);
    for j in 0..12 {
        let t = TAU * j as f64 / 12.0;
        let x = [0.4 * t.cos(), 0.4 * t.sin()];
        let u = homogeneous_velocity(&quarter, x);
        assert!((u[0] * x[0] + u[1] * x[1]).abs() < 1e-15);
    }
}

#[test]
fn spiral_constant_profile_is_solid_rotation() {
    for c in [0.5, 5.0] {
        let hs = spiral_invert(&FourierProfile::mode(8, 0, false), c).unwrap();
        let x = [0.01, 0.02];
        assert!(close(spiral_velocity(&hs, x), [-0.01, 0.005], 1e-15));
    }
}

fn decade_radii() -> Vec<f64> {
    (0..=4).map(|i| 10f64.powf(-4.0 + 0.5 * i as f64)).collect()
}

#[test]
fn spiral_gradient_bounded_sector_gradient_grows() {
    let p = sector(FRAC_PI_8);
    let f = fourier_of_intervals(&p, 512);
    let hs = spiral_invert(&f, 5.0).unwrap();
    let radii: Vec<f64> = (1..=6).map(|i| 10f64.powi(-i)).collect();
    let sp: Vec<f64> = radii.iter().map(|&r| sup_gradient_on_circle(|x| spiral_velocity(&hs, x), r, 720, 1e-6)).collect();
    let (lo, hi) = sp.iter().fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!((hi - lo) / hi < 0.1, "{sp:?}");
    let st = invert_angular_laplacian(&f);
    let sec: Vec<f64> = radii.iter().map(|&r| sup_gradient_on_circle(|x| sector_velocity(&st, x), r, 720, 1e-6)).collect();
    // equal increments per decade, at the rate of the log-gradient norm
    let rate = spectral_norm(&sector_log_gradient(st.c, st.s)) * 10f64.ln();
    for w in sec.windows(2) {
        let d = w[1] - w[0];
        assert!((d - rate).abs() < 0.05 * rate, "{d} vs {rate}");
    }
}

#[test]
fn sector_velocity_inverts_the_profile() {
    let p = sector(0.5);
    let st = invert_angular_laplacian(&fourier_of_intervals(&p, 512));
    // away from the edges the curl is h and the divergence vanishes
    for &(r, t) in &[(0.1, 0.0), (0.01, 0.2), (0.05, 2.0), (0.003, -1.5)] {
        let x = [r * f64::cos(t), r * f64::sin(t)];
        let du = fd_gradient(|y| sector_velocity(&st, y), x, 1e-5);
        let want = p.eval(t);
        assert!((du[1][0] - du[0][1] - want).abs() < 2e-2, "curl at {x:?}");
        assert!((du[0][0] + du[1][1]).abs() < 1e-6, "div at {x:?}");
    }
}

#[test]
fn three_fold_stack_matches_homogeneous_field() {
    let p = symmetrize(&sector(PI / 12.0), 3).unwrap();
    let g = PatchGeometry::sector_stack(&p, 0.0, 1.0).unwrap();
    let st = Ks1Stream::new(&p).unwrap();
    let mut ratios = Vec::new();
    for r in [1e-4, 1e-3, 1e-2, 1e-1] {
        let x = [r * 0.6f64.cos(), r * 0.6f64.sin()];
        let u = biot_savart_velocity(&g, x).unwrap();
        let h = homogeneous_velocity(&st, x);
        ratios.push((u[0] - h[0]).hypot(u[1] - h[1]) / r);
    }
    // the truncation correction vanishes faster than r near the origin
    assert!(ratios.iter().all(|&v| v < 0.1), "{ratios:?}");
    assert!(ratios.windows(2).all(|w| w[0] <= w[1]), "{ratios:?}");
}

#[test]
fn single_sector_log_gradient() {
    for t0 in [PI / 12.0, FRAC_PI_8, PI / 6.0] {
        let p = sector(t0);
        let g = PatchGeometry::sector_stack(&p, 0.0, 1.0).unwrap();
        let fit = log_gradient_fit(&g, [1.0, 0.0], &decade_radii()).unwrap();
        let (c, s) = second_mode_coefficients(ProfileRef::Intervals(&p));
        let want = sector_log_gradient(c, s);
        for (i, j) in [(0, 1), (1, 0)] {
            assert!((fit[i][j] - want[i][j]).abs() < 0.02 * want[i][j].abs(), "{t0}: {fit:?} vs {want:?}");
        }
        assert!(fit[0][0].abs() < 0.02 * want[0][1].abs() && fit[1][1].abs() < 0.02 * want[0][1].abs());
    }
}

#[test]
fn four_fold_stack_has_bounded_gradient() {
    let p = symmetrize(&sector(FRAC_PI_8), 4).unwrap();
    let g = PatchGeometry::sector_stack(&p, 0.0, 1.0).unwrap();
    let fit = log_gradient_fit(&g, [1.0, 0.0], &decade_radii()).unwrap();
    assert!(spectral_norm(&fit) < 1e-3, "{fit:?}");
}

#[test]
fn log_gradient_matrix() {
    let c = 2f64.sqrt() / (8.0 * PI);
    let m = sector_log_gradient(c, 0.0);
    let w = 2f64.sqrt() / (4.0 * PI);
    assert!((m[0][1] - w).abs() < 1e-16 && (m[1][0] - w).abs() < 1e-16);
    assert_eq!(m[0][0], 0.0);
    assert_eq!(sector_log_gradient(0.0, 0.0), [[0.0; 2]; 2]);
}

#[test]
fn separatrix_directions() {
    let (a, b) = separatrices(0.3, 0.0).unwrap();
    let d = 0.5f64.sqrt();
    assert!(close(a, [d, d], 1e-15) && close(b, [d, -d], 1e-15));
    let (a, b) = separatrices(0.0, 0.2).unwrap();
    assert!(close(a, [0.0, 1.0], 1e-15) && close(b, [1.0, 0.0], 1e-15));
    let (a, b) = separatrices(0.0, -0.2).unwrap();
    assert!((a[0] * b[0] + a[1] * b[1]).abs() < 1e-15);
    assert!(separatrices(0.0, 0.0).is_err());
}

fn expansion_ratios(g: &PatchGeometry, angle: f64) -> Vec<f64> {
    (1..=5)
        .map(|i| {
            let r = 10f64.powi(-i);
            radial_expansion(g, [r * angle.cos(), r * angle.sin()]).unwrap().scaled_residual
        })
        .collect()
}

#[test]
fn radial_vorticity_expansion() {
    let g = PatchGeometry::disc([0.0, 0.0], 0.5, 1.0);
    let e = radial_expansion(&g, [0.01, 0.02]).unwrap();
    assert!(e.is.abs() < 1e-9 && e.ic.abs() < 1e-9);
    assert!(e.u0[0].abs() < 1e-12 && e.u0[1].abs() < 1e-12);
    assert!(close(e.predicted, [0.0, 0.0], 1e-9));
}

#[test]
fn sector_key_integral() {
    let t0 = 0.35;
    let g = PatchGeometry::sector_stack(&sector(t0), 0.0, 1.0).unwrap();
    for r in [1e-5, 1e-3, 1e-1] {
        let (is, ic, _) = key_integrals(&g, r, QuadOptions::default());
        assert!((ic - (2.0 * t0).sin() * (1.0 / r).ln()).abs() < 1e-6, "{r}: {ic}");
        assert!(is.abs() < 1e-6);
    }
}

#[test]
fn expansion_residual_is_order_r() {
    let two = PatchGeometry::sector_stack(&symmetrize(&sector(0.4), 2).unwrap(), 0.0, 1.0).unwrap();
    let three = PatchGeometry::sector_stack(
        &IntervalProfile::new(
            vec![Piece::new(-0.3, 0.5, 1.0), Piece::new(1.2, 2.0, -0.7), Piece::new(2.6, 3.9, 0.4)],
            1,
        )
        .unwrap(),
        0.0,
        1.0,
    )
    .unwrap();
    for g in [two, three] {
        let v = expansion_ratios(&g, 1.0);
        let (lo, hi) = v.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        assert!(hi < 2.0, "{v:?}");
        // settles under refinement in r
        assert!((v[4] - v[3]).abs() < 0.05 * hi.max(1e-12) || hi < 1e-6, "{v:?} {lo}");
    }
}

#[test]
fn quadrant_integral_grows_logarithmically() {
    let tri = PatchGeometry::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]], 1.0);
    let vals: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&a| {
            // the triangle {2a ≤ y₂ ≤ y₁ ≤ 1} is the part of {y₂ ≤ y₁} inside the quadrant box
            quadrant_integral(&tri, [a, a]).unwrap()
        })
        .collect();
    let d1 = vals[1] - vals[0];
    let d2 = vals[2] - vals[1];
    assert!(d1 > 0.0 && (d2 - d1).abs() < 0.02 * d1, "{vals:?}");
    // (4/π)∫∫ y₁y₂/|y|⁴ over the wedge below the diagonal gives (1/π) ln(1/a) per unit log
    assert!((d1 / 10f64.ln() - 1.0 / PI).abs() < 1e-3, "{}", d1 / 10f64.ln());
    let empty = PatchGeometry::new(vec![]);
    assert_eq!(quadrant_integral(&empty, [0.1, 0.2]).unwrap(), 0.0);
}

#[test]
fn quadrant_integral_square_oracle() {
    let g = PatchGeometry::polygon(vec![[0.5, 0.5], [1.0, 0.5], [1.0, 1.0], [0.5, 1.0]], 1.0);
    let v = quadrant_integral(&g, [0.125, 0.125]).unwrap();
    // inner y₂ integral in closed form, outer by composite Simpson
    let inner = |y1: f64| -y1 / (2.0 * (y1 * y1 + 1.0)) + y1 / (2.0 * (y1 * y1 + 0.25));
    let n = 2000;
    let h = 0.5 / n as f64;
    let mut s = inner(0.5) + inner(1.0);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * inner(0.5 + i as f64 * h);
    }
    assert!((v - 4.0 / PI * s * h / 3.0).abs() < 1e-8);
}

#[test]
fn incompressible_and_curl_recovered() {
    let p = IntervalProfile::new(vec![Piece::new(-0.3, 0.5, 1.0), Piece::new(1.2, 2.0, -0.7)], 1).unwrap();
    let g = PatchGeometry::sector_stack(&p, 0.2, 1.0).unwrap();
    for x in [[0.5, 0.1], [0.1, 0.1], [-0.4, 0.3], [0.3, 0.6]] {
        let du = fd_gradient(|y| biot_savart_velocity(&g, y).unwrap(), x, 1e-5 / x[0].hypot(x[1]));
        assert!((du[0][0] + du[1][1]).abs() < 1e-4, "{x:?}");
        let q = velocity_gradient(&g, x).unwrap();
        assert!((q[1][0] - q[0][1] - g.vorticity(x)).abs() < 1e-8);
        for i in 0..2 {
            for j in 0..2 {
                assert!((q[i][j] - du[i][j]).abs() < 1e-4, "{x:?} {i}{j}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn separatrices_orthogonal_eigenvectors(c in -1.0f64..1.0, s in -1.0f64..1.0) {
        prop_assume!(c.hypot(s) > 1e-6);
        let (a, b) = separatrices(c, s).unwrap();
        prop_assert!((a[0] * b[0] + a[1] * b[1]).abs() < 1e-12);
        let m = sector_log_gradient(c, s);
        let lam = 2.0 * c.hypot(s);
        let ma = [m[0][0] * a[0] + m[0][1] * a[1], m[1][0] * a[0] + m[1][1] * a[1]];
        prop_assert!((ma[0] - lam * a[0]).abs() < 1e-12 && (ma[1] - lam * a[1]).abs() < 1e-12);
    }

    #[test]
    fn disc_field_closed_form(x in -0.9f64..0.9, y in -0.9f64..0.9) {
        prop_assume!(x.hypot(y) < 0.95 && x.hypot(y) > 0.05);
        let g = PatchGeometry::disc([0.0, 0.0], 1.0, 1.0);
        let u = biot_savart_velocity(&g, [x, y]).unwrap();
        prop_assert!(close(u, [-0.5 * y, 0.5 * x], 1e-8));
    }
}
