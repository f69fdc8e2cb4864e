mod common;

use cfs45::spline::*;
use common::{dense_ratio, scan_roots};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn xarm() -> JointLimits {
    JointLimits::xarm6()
}

/// Position residual at `t` after solving the final velocity and
/// acceleration conditions for the two leading coefficients.
fn quintic_position_residual(init: &JointState, fin: &JointState, c: f64, t: f64) -> f64 {
    let d = 0.5 * init.acc;
    // 5a t^4 + 4b t^3 = vf - (3c t^2 + 2d t + v0)
    // 20a t^3 + 12b t^2 = af - (6c t + 2d)
    let r1 = fin.vel - (3.0 * c * t * t + 2.0 * d * t + init.vel);
    let r2 = fin.acc - (6.0 * c * t + 2.0 * d);
    let (m11, m12, m21, m22) = (5.0 * t.powi(4), 4.0 * t.powi(3), 20.0 * t.powi(3), 12.0 * t * t);
    let det = m11 * m22 - m12 * m21;
    let a = (r1 * m22 - m12 * r2) / det;
    let b = (m11 * r2 - m21 * r1) / det;
    a * t.powi(5) + b * t.powi(4) + c * t.powi(3) + d * t * t + init.vel * t + init.pos - fin.pos
}

#[test]
fn rest_to_rest_duration_matches_root_scan() {
    let lim = xarm();
    let (init, fin) = (JointState::at_rest(0.0), JointState::at_rest(1.0));
    let c = lim.jerk_max / 6.0;
    let cands = quintic_candidates(&init, &fin, c, &lim).unwrap();
    let scanned = scan_roots(|t| quintic_position_residual(&init, &fin, c, t), 0.0, 5.0, 50_000);
    assert!(!scanned.is_empty());
    let got = cands.iter().map(|s| s.duration()).fold(f64::INFINITY, f64::min);
    assert!((got - scanned[0]).abs() < 1e-9, "{got} vs {}", scanned[0]);
    let s = cands[0];
    let end = s.final_state();
    assert!((end.pos - 1.0).abs() <= 1e-8 && end.vel.abs() <= 1e-8 && end.acc.abs() <= 1e-8);
}

#[test]
fn zero_c_rest_to_rest_has_no_candidates() {
    // the duration cubic collapses to the constant -10 (pf - p0)
    let lim = xarm();
    let cands = quintic_candidates(&JointState::at_rest(0.0), &JointState::at_rest(1.0), 0.0, &lim).unwrap();
    assert!(cands.is_empty());
}

#[test]
fn zero_c_matches_quadratic_formula() {
    let lim = xarm();
    let (init, fin) = (JointState::new(0.0, 0.5, 2.0), JointState::at_rest(1.0));
    // 3d T^2 + 6 v0 T - 10 = 0 with d = 1
    let (qa, qb, qc) = (3.0, 3.0, -10.0);
    let root = (-qb + f64::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
    let cands = quintic_candidates(&init, &fin, 0.0, &lim).unwrap();
    assert_eq!(cands.len(), 1);
    assert!((cands[0].duration() - root).abs() < 1e-12);
}

#[test]
fn quartic_stop_matches_root_scan() {
    let lim = xarm();
    let init = JointState::new(0.0, 1.0, 0.0);
    let c = -lim.jerk_max / 6.0;
    let cands = quartic_stop_candidates(&init, c, &lim).unwrap();
    // b from a(T) = 0, residual is v(T)
    let residual = |t: f64| {
        let b = -(6.0 * c * t) / (12.0 * t * t);
        4.0 * b * t.powi(3) + 3.0 * c * t * t + init.vel
    };
    let scanned = scan_roots(residual, 0.0, 2.0, 20_000);
    assert!(!scanned.is_empty());
    assert!((cands[0].duration() - scanned[0]).abs() < 1e-9);
    let end = cands[0].final_state();
    assert!(end.vel.abs() <= 1e-8 && end.acc.abs() <= 1e-8);
}

#[test]
fn derivative_midpoint_matches_finite_difference() {
    let lim = xarm();
    let s = select_jerk_bisection(&JointState::at_rest(0.0), &Goal::State(JointState::at_rest(1.0)), &lim, lim.default_delta_c())
        .unwrap()
        .spline;
    let (t, h) = (0.5 * s.duration(), 1e-6);
    let fd = (s.eval(t + h, 0) - s.eval(t - h, 0)) / (2.0 * h);
    assert!((fd - s.eval(t, 1)).abs() < 1e-6);
}

#[test]
fn order_three_of_t5_is_sixty() {
    let s = JointSpline::quintic([1.0, 0.0, 0.0, 0.0, 0.0, 0.0], 2.0);
    assert_eq!(s.evaluate(1.0, 3).unwrap(), 60.0);
}

#[test]
fn tightened_velocity_flips_verdict() {
    let lim = JointLimits::new(10.0, 100.0, 1000.0, 10_000.0).unwrap();
    let s = select_jerk_bisection(&JointState::at_rest(0.0), &Goal::State(JointState::at_rest(1.0)), &lim, lim.default_delta_c())
        .unwrap()
        .spline;
    assert!(check_constraints(&s, &lim).satisfied);
    let peak = s.eval(0.5 * s.duration(), 1).abs();
    let tight = JointLimits { vel_max: 0.9 * peak, ..lim };
    let rep = check_constraints(&s, &tight);
    assert!(!rep.satisfied);
    assert_eq!(rep.violating_order, Some(Derivative::Velocity));
}

#[test]
fn check_constraints_agrees_with_dense_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut agree, mut total) = (0, 0);
    for _ in 0..10_000 {
        let s = JointSpline::quintic(
            [
                rng.gen_range(-20.0..20.0),
                rng.gen_range(-40.0..40.0),
                rng.gen_range(-60.0..60.0),
                rng.gen_range(-8.0..8.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-1.0..1.0),
            ],
            rng.gen_range(0.05..1.0),
        );
        let lim = xarm();
        let dense = dense_ratio(&s, &lim, 10_000.0);
        if (dense - 1.0).abs() < 1e-6 {
            continue;
        }
        total += 1;
        if check_constraints(&s, &lim).satisfied == (dense <= 1.0) {
            agree += 1;
        }
    }
    assert_eq!(agree, total);
}

#[test]
fn six_joint_synchronized_pass_oracle() {
    let lim = xarm();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut accepted = 0;
    for _ in 0..300 {
        let init = BoundaryState::from_joints(
            &(0..6).map(|_| { let p = rng.gen_range(-2.0..2.0); common::random_state(&mut rng, &lim, p, false) }).collect::<Vec<_>>(),
            0.0,
        );
        let fin = BoundaryState::from_joints(&(0..6).map(|_| JointState::new(rng.gen_range(-2.0..2.0), 0.0, 0.0)).collect::<Vec<_>>(), 0.0);
        let Some(m) = synchronize_states(&init, &fin, &[lim; 6], None) else { continue };
        accepted += 1;
        for (i, j) in m.joints().iter().enumerate() {
            assert_eq!(j.duration(), m.duration());
            assert!(dense_ratio(j, &lim, 10_000.0) <= 1.0 + 1e-6);
            let end = j.final_state();
            assert!((end.pos - fin.position[i]).abs() <= 1e-8);
            assert!(end.vel.abs() <= 1e-8 && end.acc.abs() <= 1e-8);
        }
    }
    // random non-rest starts are often outside the single-quintic family
    assert!(accepted > 100, "{accepted}");
}

fn problem() -> impl Strategy<Value = (JointState, JointState)> {
    let lim = xarm();
    (-2.0..2.0f64, -0.8..0.8f64, -0.8..0.8f64, -2.0..2.0f64, -0.8..0.8f64).prop_map(move |(p0, v0, a0, pf, vf)| {
        (JointState::new(p0, v0 * lim.vel_max, a0 * lim.acc_max), JointState::new(pf, vf * lim.vel_max, 0.0))
    })
}

proptest! {
    #[test]
    fn boundary_reconstruction((init, fin) in problem()) {
        let lim = xarm();
        if let Some(ch) = select_jerk_bisection(&init, &Goal::State(fin), &lim, lim.default_delta_c()) {
            let s = ch.spline;
            let (a, b) = (s.initial_state(), s.final_state());
            prop_assert!((a.pos - init.pos).abs() <= 1e-8 && (a.vel - init.vel).abs() <= 1e-8 && (a.acc - init.acc).abs() <= 1e-8);
            prop_assert!((b.pos - fin.pos).abs() <= 1e-8 && (b.vel - fin.vel).abs() <= 1e-8 && (b.acc - fin.acc).abs() <= 1e-8);
            prop_assert!((6.0 * s.c()).abs() <= lim.jerk_max + 1e-9);
        }
    }

    #[test]
    fn stop_reconstruction((init, _) in problem()) {
        let lim = xarm();
        if let Some(ch) = select_jerk_bisection(&init, &Goal::Stop, &lim, lim.default_delta_c()) {
            let end = ch.spline.final_state();
            prop_assert!(end.vel.abs() <= 1e-8 && end.acc.abs() <= 1e-8);
            prop_assert!(dense_ratio(&ch.spline, &lim, 10_000.0) <= 1.0 + 1e-6);
        }
    }

    #[test]
    fn rest_to_rest_velocity_is_symmetric(p in 0.05..3.0f64, sign in prop::bool::ANY) {
        let lim = xarm();
        let p = if sign { p } else { -p };
        let s = select_jerk_bisection(&JointState::at_rest(0.0), &Goal::State(JointState::at_rest(p)), &lim, lim.default_delta_c()).unwrap().spline;
        for k in 0..=20 {
            let t = s.duration() * k as f64 / 20.0;
            prop_assert!((s.eval(t, 1) - s.eval(s.duration() - t, 1)).abs() <= 1e-8);
        }
    }

    #[test]
    fn derivatives_match_finite_differences(coeffs in prop::array::uniform6(-5.0..5.0f64), u in 0.1..0.9f64) {
        let s = JointSpline::quintic(coeffs, 1.0);
        let h = 1e-5;
        for k in 1..=3 {
            let fd = (s.eval(u + h, k - 1) - s.eval(u - h, k - 1)) / (2.0 * h);
            let exact = s.eval(u, k);
            prop_assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1.0), "order {k}: {fd} vs {exact}");
        }
    }
}
