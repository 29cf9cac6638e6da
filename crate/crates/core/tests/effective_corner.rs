use patchlab::effective_corner::*;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

fn rates(s: &OddFourierState) -> Vec<f64> {
    let mut y = s.g.clone();
    y.push(s.j);
    let mut out = vec![0.0; y.len()];
    odd_fourier_rhs(s.tau, &y, &mut out);
    out.truncate(s.g.len());
    out
}

#[test]
fn bahouri_chemin_interior_is_stationary() {
    let s = OddFourierState::bahouri_chemin(1.0, ODD_FOURIER_MODES);
    let r = rates(&s);
    for (k, v) in r.iter().enumerate().take(ODD_FOURIER_MODES - 2) {
        assert!(v.abs() < 1e-12, "k={} {v}", k + 1);
    }
    // only the top of the truncation moves
    assert!(r[ODD_FOURIER_MODES - 1].abs() > 0.1);
    // the profile is the sign pattern with height πC/4
    assert!((OddFourierState::bahouri_chemin(1.0, 20_000).eval(0.7) - FRAC_PI_4).abs() < 1e-3);
}

#[test]
fn zero_data_is_stationary() {
    let s = OddFourierState::new(vec![0.0; 32]);
    let run = odd_fourier_integrate(&s, 1.0, 0.01, 10);
    assert!(run.last().unwrap().g.iter().all(|&v| v == 0.0));
}

#[test]
fn fourier_system_tracks_corner_ode() {
    let a0 = FRAC_PI_4;
    for sign in [1.0, -1.0] {
        let s = OddFourierState::corner(a0, sign, 512);
        let run = odd_fourier_integrate(&s, 5.0, 0.002, 50);
        let edges = odd_fourier_edges(&run, a0, sign);
        let ode = odd_corner_integrate(a0, sign, 5.0, 0.002).unwrap();
        for (tau, e) in edges {
            let want = ode.at(tau).a;
            let got = e.expect("edge found");
            assert!((got - want).abs() < 1e-3, "sign {sign} τ={tau}: {got} vs {want}");
        }
    }
}

#[test]
fn odd_corner_initial_slope() {
    for sign in [1.0, -1.0] {
        let a0 = 0.6;
        let run = odd_corner_integrate(a0, sign, 1e-3, 1e-5).unwrap();
        let slope = (run.states[1].a - run.states[0].a) / run.states[1].tau;
        let want = sign / PI * (2.0 * a0).sin() * (1.0 - (2.0 * a0).cos());
        assert!((slope - want).abs() < 1e-4, "{slope} {want}");
    }
}

#[test]
fn odd_corner_rejects_bad_input() {
    assert!(odd_corner_integrate(0.0, 1.0, 1.0, 0.1).is_err());
    assert!(odd_corner_integrate(FRAC_PI_2, 1.0, 1.0, 0.1).is_err());
    assert!(odd_corner_integrate(0.5, 0.5, 1.0, 0.1).is_err());
}

#[test]
fn expanding_corner_opens_exponentially() {
    let run = odd_corner_integrate(FRAC_PI_4, 1.0, 50.0, 0.01).unwrap();
    assert!(run.states.windows(2).all(|w| w[1].rest < w[0].rest));
    let (k, res) = run.exponential_fit(5.0, 50.0);
    assert!(k > 0.0 && res < 1e-2, "{k} {res}");
    assert!(run.expansion_rate(5.0, 50.0) > 0.0);
}

#[test]
fn contracting_corner_decays() {
    let run = odd_corner_integrate(FRAC_PI_4, -1.0, 2000.0, 0.01).unwrap();
    assert!(run.states.windows(2).all(|w| w[1].a < w[0].a));
    let (c, cc) = run.decay_bounds(0.0, 1000.0);
    assert!(c > 0.0 && cc.is_finite());
    assert!(run.tail_increment(1000.0) < 1e-6);
    // power-law decay with exponent -2J∞/π
    let slope = run.loglog_slope(100.0, 1000.0);
    let j_inf = run.states.last().unwrap().j;
    assert!((slope + 2.0 * j_inf / PI).abs() < 0.02, "{slope} {j_inf}");
    assert!(slope < -0.9 && slope > -1.3, "{slope}");
}

#[test]
fn odd_second_order_agrees() {
    for sign in [1.0, -1.0] {
        let a = odd_corner_integrate(FRAC_PI_4, sign, 10.0, 0.001).unwrap();
        let b = odd_corner_second_order(FRAC_PI_4, sign, 10.0, 0.001).unwrap();
        assert!(b.halted.is_none());
        let want0 = sign * 2.0 / PI * (FRAC_PI_2).sin() * (1.0 - (FRAC_PI_2).cos());
        assert_eq!(b.rows[0].1[1], want0);
        for (s, (tau, y)) in a.states.iter().zip(&b.rows) {
            assert!((s.tau - tau).abs() < 1e-12);
            assert!((2.0 * s.a - y[0]).abs() < 1e-6, "τ={tau}");
        }
    }
}

#[test]
fn odd_second_order_edge_cases() {
    let near = |d: f64| odd_corner_second_order(FRAC_PI_2 - d, 1.0, 0.01, 0.01).unwrap().rows[0].1[1];
    assert!(near(1e-5).abs() < 1e-4 && near(1e-5).abs() < near(1e-3).abs());
    // too close to π/2 the printed denominator is rejected outright
    assert!(odd_corner_second_order(FRAC_PI_2 - 1e-9, 1.0, 1.0, 0.01).is_err());
    // the expanding run drives a = 2A to π, where the printed form degenerates
    let long = odd_corner_second_order(FRAC_PI_4, 1.0, 200.0, 0.01);
    match long {
        Ok(r) => assert!(r.halted.is_some()),
        Err(e) => assert!(e.to_string().contains("integro-differential")),
    }
}

#[test]
fn single_corner_initial_data_and_limits() {
    let b0 = FRAC_PI_8;
    let r = single_corner_second_order(0.0, b0, 0.1, 0.01).unwrap();
    let y = &r.rows[0].1;
    assert_eq!(y[0], b0);
    assert_eq!(y[1], 0.0);
    assert_eq!(y[2], 0.0);
    assert_eq!(y[3], -(2.0 * b0).cos() * (2.0 * b0).sin() / PI);
    let d = single_corner_rhs(0.0, &[0.0, b0, 0.0, 0.0]);
    assert_eq!(d[1], 0.0);
    assert!((d[0] - y[3]).abs() < 1e-16);
    let edge = single_corner_rhs(0.0, &[0.0, FRAC_PI_4 - 1e-9, 0.0, 0.0]);
    assert!(edge[0].abs() < 1e-8);
    assert!(single_corner_integrate(0.0, FRAC_PI_4, 1.0, 0.1).is_err());
    assert!(single_corner_integrate(0.0, 0.0, 1.0, 0.1).is_err());
}

#[test]
fn single_corner_forms_agree() {
    let a = single_corner_integrate(0.0, FRAC_PI_8, 10.0, 0.001).unwrap();
    let b = single_corner_second_order(0.0, FRAC_PI_8, 10.0, 0.001).unwrap();
    for (s, (_, y)) in a.states.iter().zip(&b.rows) {
        assert!((s.b - y[0]).abs() < 1e-5 && (s.a - y[1]).abs() < 1e-5);
    }
}

#[test]
fn single_corner_collapses_to_a_ray() {
    let run = single_corner_integrate(0.0, FRAC_PI_8, 10_000.0, 0.05).unwrap();
    assert!(run.states.windows(2).all(|w| w[1].b <= w[0].b));
    let last = run.last();
    assert!(last.a < 0.0 && last.a.is_finite());
    let t = run.settle_time(1e-4, 1e-3).expect("settles");
    assert!(t < last.tau);
    // A' ≤ 0 whenever -π/4 ≤ A ≤ 0, while the width only shrinks
    for s in run.states.iter().take(200) {
        let d = single_corner_rhs(s.tau, &[s.a, s.b, s.p, s.q]);
        if s.a <= 0.0 && s.a >= -FRAC_PI_4 {
            assert!(d[0] <= 0.0);
        }
        assert!(d[1] <= 0.0);
    }
}

#[test]
fn single_corner_step_halving() {
    let a = single_corner_integrate(0.0, FRAC_PI_8, 5.0, 0.01).unwrap();
    let b = single_corner_integrate(0.0, FRAC_PI_8, 5.0, 0.005).unwrap();
    assert!((a.last().a - b.last().a).abs() < 1e-8 && (a.last().b - b.last().b).abs() < 1e-8);
}

#[test]
fn csv_headers() {
    let a = odd_corner_integrate(0.5, 1.0, 0.1, 0.05).unwrap();
    assert!(a.to_csv().starts_with("tau,A,J\n"));
    let b = single_corner_integrate(0.0, 0.3, 0.1, 0.05).unwrap();
    assert!(b.to_csv().starts_with("tau,A,B,P,Q\n"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn odd_corner_monotone(a0 in 0.05f64..1.5) {
        let up = odd_corner_integrate(a0, 1.0, 5.0, 0.01).unwrap();
        prop_assert!(up.states.windows(2).all(|w| w[1].a >= w[0].a && w[1].j >= w[0].j));
        let down = odd_corner_integrate(a0, -1.0, 5.0, 0.01).unwrap();
        prop_assert!(down.states.windows(2).all(|w| w[1].a <= w[0].a && w[1].j >= w[0].j));
        prop_assert!(down.states.iter().all(|s| s.a > 0.0 && s.a < FRAC_PI_2));
    }

    #[test]
    fn bahouri_chemin_any_amplitude(c in -3.0f64..3.0, n in 8usize..200) {
        let s = OddFourierState::bahouri_chemin(c, n);
        let r = rates(&s);
        for v in r.iter().take(n - 2) {
            prop_assert!(v.abs() < 1e-12 * (1.0 + c.abs()));
        }
    }
}
