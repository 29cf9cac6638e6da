use patchlab::angle_odes::*;
use patchlab::Error;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

fn pair(m: usize) -> MultiCornerState {
    MultiCornerState::new(m, vec![0.5, 0.2], vec![0.3], 0.0).unwrap()
}

#[test]
fn sample_domain_is_balanced() {
    // sectors [0, π/6] and [π/3, π/2] leave a final gap of π/6 as well: no shape motion
    let s = MultiCornerState::new(3, vec![PI / 6.0, PI / 6.0], vec![PI / 6.0], 0.0).unwrap();
    let r = endpoint_rhs(&s).unwrap();
    assert!(r.zeta.iter().chain(&r.gamma).all(|v| v.abs() < 1e-14));
    assert!((r.zeta[0] + r.zeta[1]).abs() < 1e-15);
}

#[test]
fn low_symmetry_rejected() {
    assert!(matches!(MultiCornerState::single(2, 0.3), Err(Error::SymmetryTooLow(2))));
    assert!(MultiCornerState::new(3, vec![1.0, 1.0], vec![0.2], 0.0).is_err());
    assert!(MultiCornerState::new(3, vec![0.5], vec![0.1], 0.0).is_err());
    assert!(rotation_speed(0.3, 2).is_err());
    assert!(rotation_speed(TAU / 3.0, 3).is_err());
}

#[test]
fn single_corner_keeps_its_angle() {
    for m in 3..=6 {
        for z in [0.1, 0.5, 0.9 * TAU / m as f64] {
            let r = endpoint_rhs(&MultiCornerState::single(m, z).unwrap()).unwrap();
            assert!(r.zeta[0].abs() < 1e-14, "m={m} z={z}");
        }
    }
}

#[test]
fn single_corner_trajectory_is_rigid() {
    let s = MultiCornerState::single(3, PI / 3.0).unwrap();
    let run = integrate(&s, 0.01, 10.0, Rhs::Endpoint).unwrap();
    assert!(!run.collided);
    let v = rotation_speed(PI / 3.0, 3).unwrap();
    for st in &run.states {
        assert!((st.zeta[0] - PI / 3.0).abs() < 1e-10);
        assert!((st.beta1 - (s.beta1 + v * st.t)).abs() < 1e-8);
    }
}

#[test]
fn rotation_speed_matches_closed_form() {
    for m in 3..=6 {
        for j in 1..20 {
            let z = TAU / m as f64 * j as f64 / 20.0;
            let v = rotation_speed(z, m).unwrap();
            assert!((v - rotation_speed_closed(z, m)).abs() < 1e-13, "m={m} z={z}");
        }
    }
    assert!((rotation_speed(PI / 3.0, 3).unwrap() - 0.25).abs() < 1e-14);
}

#[test]
fn rotation_speed_limits() {
    for m in 3..=5 {
        let edge = TAU / m as f64;
        assert!((rotation_speed(edge * (1.0 - 1e-7), m).unwrap() - 0.5).abs() < 1e-6);
        assert!(rotation_speed(edge * 1e-7, m).unwrap().abs() < 1e-6);
    }
}

#[test]
fn rotation_speed_monotonicity() {
    let grid = |m: usize| (1..=50).map(move |j| TAU / m as f64 * j as f64 / 51.0);
    for m in [4, 5] {
        let v: Vec<f64> = grid(m).map(|z| rotation_speed(z, m).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]), "m={m}");
    }
    // for m = 3 the speed dips below zero up to π/3 - π/4, rises to π/3 + π/4, then falls
    let (low, peak) = (PI / 3.0 - FRAC_PI_4, PI / 3.0 + FRAC_PI_4);
    let v: Vec<(f64, f64)> = grid(3).map(|z| (z, rotation_speed(z, 3).unwrap())).collect();
    for w in v.windows(2) {
        if w[1].0 < low || w[0].0 > peak {
            assert!(w[1].1 < w[0].1, "{w:?}");
        } else if w[0].0 > low && w[1].0 < peak {
            assert!(w[1].1 > w[0].1, "{w:?}");
        }
    }
    assert!(v[0].1 < 0.0);
}

#[test]
fn two_corner_total_angle_rate_vanishes() {
    let r = endpoint_rhs(&pair(3)).unwrap();
    assert!((r.zeta[0] + r.zeta[1]).abs() < 1e-14);
    assert!(r.zeta[0].abs() > 1e-6);
}

#[test]
fn closed_form_single_corner_is_static() {
    let r = closed_form_rhs(&MultiCornerState::single(4, 0.7).unwrap(), 1.3);
    assert_eq!(r.zeta, vec![0.0]);
    assert!(r.gamma.is_empty());
}

#[test]
fn closed_form_mirror_pair_is_antisymmetric() {
    let s = MultiCornerState::new(3, vec![0.4, 0.4], vec![0.5], -0.65).unwrap();
    let r = closed_form_rhs(&s, 1.0);
    assert!((r.zeta[0] + r.zeta[1]).abs() < 1e-15);
    let e = endpoint_rhs(&s).unwrap();
    assert!((e.zeta[0] + e.zeta[1]).abs() < 1e-14);
}

#[test]
fn four_fold_routes_coincide() {
    let probe = MultiCornerState::new(4, vec![0.3, 0.2], vec![0.4], 0.1).unwrap();
    let cm = fit_cm(&probe).unwrap();
    assert!((cm - 1.0).abs() < 1e-12, "{cm}");
    let s = MultiCornerState::new(4, vec![0.25, 0.35, 0.15], vec![0.3, 0.2], -0.4).unwrap();
    let a = integrate(&s, 0.01, 1.0, Rhs::Endpoint).unwrap();
    let b = integrate(&s, 0.01, 1.0, Rhs::ClosedForm { cm }).unwrap();
    for (x, y) in a.states.iter().zip(&b.states) {
        for (p, q) in x.zeta.iter().chain(&x.gamma).zip(y.zeta.iter().chain(&y.gamma)) {
            assert!((p - q).abs() < 1e-10);
        }
    }
}

#[test]
fn three_fold_constant_depends_on_the_probe() {
    let a = fit_cm(&pair(3)).unwrap();
    let b = fit_cm(&MultiCornerState::new(3, vec![0.2, 0.5], vec![0.4], 0.0).unwrap()).unwrap();
    assert!(a > 2.0 && b > 2.0);
    assert!((a - b).abs() > 1e-3 * a, "{a} {b}");
}

#[test]
fn total_angle_conserved_three_corners() {
    let s = MultiCornerState::new(3, vec![0.3, 0.2, 0.25], vec![0.3, 0.35], 0.0).unwrap();
    let run = integrate(&s, 0.01, 10.0, Rhs::Endpoint).unwrap();
    assert!(!run.collided);
    let z0 = s.sum_zeta();
    for st in &run.states {
        assert!((st.sum_zeta() - z0).abs() < 1e-8);
    }
}

#[test]
fn fourth_order_convergence() {
    let s = pair(3);
    let fine = integrate(&s, 0.0025, 2.0, Rhs::Endpoint).unwrap();
    let err = |dt: f64| {
        let r = integrate(&s, dt, 2.0, Rhs::Endpoint).unwrap();
        (r.last().zeta[0] - fine.last().zeta[0]).abs()
    };
    let (e1, e2) = (err(0.2), err(0.1));
    let ratio = e1 / e2;
    assert!(ratio > 12.0 && ratio < 20.0, "{e1} {e2} {ratio}");
}

#[test]
fn time_reversal() {
    let s = pair(3);
    let fwd = integrate(&s, 0.01, 1.0, Rhs::Endpoint).unwrap();
    let back = integrate(fwd.last(), 0.01, -1.0, Rhs::Endpoint).unwrap();
    let e = back.last();
    assert!(e.t.abs() < 1e-12);
    for (p, q) in e.zeta.iter().chain(&e.gamma).zip(s.zeta.iter().chain(&s.gamma)) {
        assert!((p - q).abs() < 1e-8);
    }
    assert!((e.beta1 - s.beta1).abs() < 1e-8);
}

#[test]
fn csv_layout() {
    let run = integrate(&pair(3), 0.1, 0.2, Rhs::Endpoint).unwrap();
    let csv = run.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,zeta_1,zeta_2,gamma_1_5,beta1,sum_zeta"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn collision_flags_and_stops() {
    // the narrow gap closes forward in time
    let s = MultiCornerState::new(3, vec![0.3, 0.6], vec![1e-3], 0.0).unwrap();
    assert!(endpoint_rhs(&s).unwrap().gamma[0] < 0.0);
    let f = integrate(&s, 0.01, 20.0, Rhs::Endpoint).unwrap();
    assert!(f.collided);
    assert!(f.states.len() < 2001);
    assert!(f.last().gamma[0] > COLLISION_TOL);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn measure_rate_vanishes(m in 3usize..7, a in 0.05f64..1.0, b in 0.05f64..1.0, g in 0.05f64..1.0, beta in -3.0f64..3.0) {
        let w = TAU / m as f64 * 0.95;
        let scale = w / (a + b + g);
        let s = MultiCornerState::new(m, vec![a * scale, b * scale], vec![g * scale], beta).unwrap();
        let r = endpoint_rhs(&s).unwrap();
        prop_assert!((r.zeta[0] + r.zeta[1]).abs() < 1e-13);
        // shape rates do not depend on where the configuration sits
        let mut t = s.clone();
        t.beta1 += 0.7;
        let q = endpoint_rhs(&t).unwrap();
        prop_assert!((q.zeta[0] - r.zeta[0]).abs() < 1e-13 && (q.gamma[0] - r.gamma[0]).abs() < 1e-13);
    }

    #[test]
    fn closed_form_total_rate_vanishes(a in 0.05f64..0.5, b in 0.05f64..0.5, g in 0.05f64..0.5, cm in 0.1f64..3.0) {
        let s = MultiCornerState::new(4, vec![a, b], vec![g], 0.0).unwrap();
        let r = closed_form_rhs(&s, cm);
        prop_assert!((r.zeta[0] + r.zeta[1]).abs() < 1e-14);
        prop_assert!(FRAC_PI_2 > a + b + g);
    }
}
