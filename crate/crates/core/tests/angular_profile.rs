use patchlab::angular_profile::*;
use patchlab::Error;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI, TAU};

fn chi(a: f64, b: f64) -> IntervalProfile {
    IntervalProfile::indicator(a, b).unwrap()
}

#[test]
fn two_fold_copy_sits_opposite() {
    let p = symmetrize(&chi(-FRAC_PI_8, FRAC_PI_8), 2).unwrap();
    let full = p.full_pieces();
    assert_eq!(full.len(), 2);
    assert_eq!(p.eval(0.0), 1.0);
    assert_eq!(p.eval(PI - 0.1), 1.0);
    assert_eq!(p.eval(-PI + 0.1), 1.0);
    assert_eq!(p.eval(FRAC_PI_2), 0.0);
}

#[test]
fn four_fold_measure_is_pi() {
    let p = symmetrize(&chi(-FRAC_PI_8, FRAC_PI_8), 4).unwrap();
    assert_eq!(p.full_pieces().len(), 4);
    assert!((p.measure() - PI).abs() < 1e-14);
}

#[test]
fn three_fold_pair_gives_six_arcs() {
    let p = IntervalProfile::new(vec![Piece::new(0.0, PI / 6.0, 1.0), Piece::new(PI / 3.0, FRAC_PI_2, 1.0)], 1).unwrap();
    let s = symmetrize(&p, 3).unwrap();
    assert_eq!(s.full_pieces().len(), 6);
    assert!((s.measure() - PI).abs() < 1e-14);
}

#[test]
fn overlap_after_rotation_is_rejected() {
    let p = chi(-1.0, 1.0);
    match symmetrize(&p, 4) {
        Err(Error::Overlap { .. }) => {}
        other => panic!("expected overlap, got {other:?}"),
    }
    // touching copies count as overlap
    assert!(symmetrize(&chi(-PI / 4.0, PI / 4.0), 4).is_err());
}

#[test]
fn constant_profile_modes() {
    let f = fourier_of_intervals(&IntervalProfile::constant(1.0), 16);
    assert!((f.a[0] - 2.0).abs() < 1e-14);
    for k in 1..=16 {
        assert!(f.a[k].abs() < 1e-14 && f.b[k].abs() < 1e-14, "{k}");
    }
}

#[test]
fn odd_odd_sign_pattern_modes() {
    // the pattern is a sum of two 2-fold profiles whose pieces touch, so add their series
    let pos = symmetrize(&chi(0.0, FRAC_PI_2), 2).unwrap();
    let neg = IntervalProfile::new(vec![Piece::new(FRAC_PI_2, PI, -1.0)], 2).unwrap();
    let (fp, fn_) = (fourier_of_intervals(&pos, 40), fourier_of_intervals(&neg, 40));
    let f = FourierProfile {
        a: fp.a.iter().zip(&fn_.a).map(|(x, y)| x + y).collect(),
        b: fp.b.iter().zip(&fn_.b).map(|(x, y)| x + y).collect(),
    };
    for k in 0..=40 {
        assert!(f.a[k].abs() < 1e-13, "a_{k}");
        let want = if k % 4 == 2 { 4.0 / (PI * (k / 2) as f64) } else { 0.0 };
        assert!((f.b[k] - want).abs() < 1e-13, "b_{k}: {} vs {want}", f.b[k]);
    }
}

#[test]
fn symmetric_window_modes() {
    let t0 = 0.7;
    let f = fourier_of_intervals(&chi(-t0, t0), 30);
    for k in 1..=30 {
        let kf = k as f64;
        assert!((f.a[k] - 2.0 * (kf * t0).sin() / (kf * PI)).abs() < 1e-14);
        assert!(f.b[k].abs() < 1e-14);
    }
}

#[test]
fn log_mode_of_single_sector() {
    let (c, s) = second_mode_coefficients(ProfileRef::Intervals(&chi(-FRAC_PI_8, FRAC_PI_8)));
    assert!(s.abs() < 1e-15);
    assert!((c.abs() - 2f64.sqrt() / (8.0 * PI)).abs() < 1e-15);
    assert!((c.abs() - 0.0562697).abs() < 1e-7);
    // the sign is the one the quadrature gradient selects
    assert!(c < 0.0);
}

#[test]
fn log_mode_of_pure_three_mode_vanishes() {
    let f = FourierProfile::mode(8, 3, true);
    assert_eq!(second_mode_coefficients(ProfileRef::Fourier(&f)), (0.0, 0.0));
}

#[test]
fn two_fold_copy_doubles_c() {
    let t0 = 0.3;
    let (c1, _) = second_mode_coefficients(ProfileRef::Intervals(&chi(-t0, t0)));
    let (c2, s2) = second_mode_coefficients(ProfileRef::Intervals(&symmetrize(&chi(-t0, t0), 2).unwrap()));
    assert!((c2 - 2.0 * c1).abs() < 1e-15);
    assert!(s2.abs() < 1e-15);
}

#[test]
fn fourier_and_interval_routes_agree_on_log_mode() {
    let p = IntervalProfile::new(vec![Piece::new(-0.4, 0.2, 1.0), Piece::new(1.0, 2.5, -0.5)], 1).unwrap();
    let a = second_mode_coefficients(ProfileRef::Intervals(&p));
    let b = second_mode_coefficients(ProfileRef::Fourier(&fourier_of_intervals(&p, 4)));
    assert!((a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15);
}

#[test]
fn smooth_round_trip_is_spectral() {
    let f = |t: f64| (t.cos()).exp() + 0.3 * (2.0 * t).sin();
    let p = FourierProfile::from_fn(f, 24, 10_000);
    let q = FourierProfile::from_fn(|t| p.eval(t), 24, 10_000);
    for k in 0..=24 {
        assert!((p.a[k] - q.a[k]).abs() < 1e-13 && (p.b[k] - q.b[k]).abs() < 1e-13);
    }
    // the exp(cos) series has a_k = 2 I_k(1)
    assert!((p.a[1] - 2.0 * 0.565_159_103_992_485).abs() < 1e-12);
}

#[test]
fn interval_round_trip_coefficients() {
    let p = chi(-0.5, 0.9);
    let f = fourier_of_intervals(&p, 64);
    let q = FourierProfile::from_fn(|t| p.eval(t), 64, 200_000);
    for k in 0..=16 {
        assert!((f.a[k] - q.a[k]).abs() < 1e-4 && (f.b[k] - q.b[k]).abs() < 1e-4, "{k}");
    }
}

#[test]
fn json_fragment_round_trip() {
    let p = symmetrize(&chi(-0.2, 0.2), 3).unwrap();
    let s = serde_json::to_string(&p).unwrap();
    assert!(s.contains("\"pieces\"") && s.contains("\"symmetry\":3"));
    let back: IntervalProfile = serde_json::from_str(&s).unwrap();
    assert_eq!(back, p);
    assert!(serde_json::from_str::<IntervalProfile>(r#"{"pieces":[],"symmetry":1,"extra":0}"#).is_err());
}

proptest! {
    #[test]
    fn symmetric_profiles_have_no_off_modes(m in 3usize..9, w in 0.01f64..0.9, c in -3.0f64..3.0) {
        let half = 0.5 * w * TAU / m as f64;
        let p = symmetrize(&chi(c - half, c + half), m).unwrap();
        let f = fourier_of_intervals(&p, 64);
        prop_assert!(f.off_symmetry_max(m) < 1e-12);
        let (lc, ls) = second_mode_coefficients(ProfileRef::Intervals(&p));
        prop_assert!(lc.abs() < 1e-12 && ls.abs() < 1e-12);
    }

    #[test]
    fn integral_matches_zero_mode(a in -3.0f64..0.0, len in 0.01f64..3.0, v in -2.0f64..2.0) {
        let p = IntervalProfile::new(vec![Piece::new(a, a + len, v)], 1).unwrap();
        let f = fourier_of_intervals(&p, 2);
        prop_assert!((f.integral() - p.integral()).abs() < 1e-12);
    }
}
