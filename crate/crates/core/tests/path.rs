mod common;

use cfs45::free_space::StaticSceneCertifier;
use cfs45::kinematics::{ChainModel, Obstacle};
use cfs45::metrics::frechet_to_polyline;
use cfs45::path::*;
use cfs45::spline::{check_constraints, BoundaryState, JointLimits, MultiSpline};
use nalgebra::{Point2, Vector2};
use proptest::prelude::*;
use std::f64::consts::PI;

fn limits(n: usize) -> Vec<JointLimits> {
    vec![JointLimits { pos_max: PI, ..JointLimits::xarm6() }; n]
}

fn always(_: &MultiSpline) -> bool {
    true
}

fn never(_: &MultiSpline) -> bool {
    false
}

fn at_rest(s: &BoundaryState) -> bool {
    s.velocity.iter().chain(&s.acceleration).all(|v| v.abs() <= 1e-8)
}

fn interior_stops(t: &Trajectory) -> usize {
    t.segments[..t.segments.len() - 1].iter().filter(|s| at_rest(&s.final_state())).count()
}

fn check_common(t: &Trajectory, path: &GeometricPath, lim: &[JointLimits]) {
    assert!(t.max_junction_jump() <= 1e-8, "{}", t.max_junction_jump());
    for s in &t.segments {
        for (j, l) in s.joints().iter().zip(lim) {
            assert!(check_constraints(j, l).satisfied);
            assert!(common::dense_ratio(j, l, 10_000.0) <= 1.0 + 1e-6);
        }
    }
    let end = t.final_state().unwrap();
    assert!(common::dist(&end.position, path.nodes.last().unwrap()) <= 1e-8);
    assert!(at_rest(&end));
}

#[test]
fn short_straight_path_is_one_rest_to_rest_segment() {
    let lim = limits(2);
    let path = GeometricPath::new(vec![vec![0.0, 0.0], vec![0.03, 0.02]]);
    let t = path_to_trajectory(&path, &lim, &ConversionParams::new(0.01), &always).unwrap();
    assert_eq!(t.segments.len(), 1);
    assert!(at_rest(&t.segments[0].initial_state()));
    check_common(&t, &path, &lim);
}

#[test]
fn long_straight_path_is_densified_but_straight() {
    let lim = limits(2);
    let path = GeometricPath::new(vec![vec![0.0, 0.0], vec![1.0, -0.5]]);
    let params = ConversionParams::new(0.01).without_interpolation();
    let t = path_to_trajectory(&path, &lim, &params, &always).unwrap();
    check_common(&t, &path, &lim);
    assert!(frechet_to_polyline(&t.polyline(0.001), &path.nodes) <= 1e-6);
    assert_eq!(interior_stops(&t), 0);
}

fn l_path() -> GeometricPath {
    // the first leg densifies to nine gaps, putting the corner at an odd index
    GeometricPath::new(vec![vec![0.0, 0.0], vec![0.38, 0.0], vec![0.38, 0.4]])
}

#[test]
fn free_corner_is_cut() {
    let lim = limits(2);
    let path = l_path();
    let params = ConversionParams::new(0.01);
    let dense = simplify_and_densify(&path, params.d_max(&lim));
    assert_eq!(dense.node_kinds()[9], NodeKind::Corner);
    let t = path_to_trajectory(&path, &lim, &params, &always).unwrap();
    check_common(&t, &path, &lim);
    assert!(t.segments.len() < dense.len());
    assert_eq!(interior_stops(&t), 0);
    // deviation from the corner is real but bounded
    let f = frechet_to_polyline(&t.polyline(0.001), &path.nodes);
    assert!(f > 1e-6 && f < 0.2, "{f}");
}

#[test]
fn even_corner_is_reached_at_rest() {
    // a corner landing at index k + 2 of a skip is reached, not cut
    let lim = limits(2);
    let path = GeometricPath::new(vec![vec![0.0, 0.0], vec![0.4, 0.0], vec![0.4, 0.4]]);
    let t = path_to_trajectory(&path, &lim, &ConversionParams::new(0.01), &always).unwrap();
    check_common(&t, &path, &lim);
    assert_eq!(interior_stops(&t), 1);
}

#[test]
fn blocked_corner_is_visited_at_rest() {
    let lim = limits(2);
    let path = l_path();
    let t = path_to_trajectory(&path, &lim, &ConversionParams::new(0.01), &never).unwrap();
    check_common(&t, &path, &lim);
    assert!(frechet_to_polyline(&t.polyline(0.001), &path.nodes) <= 1e-6);
    let visits = t.segments.iter().filter(|s| common::dist(&s.final_state().position, &path.nodes[1]) <= 1e-12).count();
    assert_eq!(visits, 1);
    assert!(interior_stops(&t) >= 1);
}

/// Rejects splines entering a joint-space disc, checked at 1 kHz.
fn disc_certifier(center: [f64; 2], radius: f64) -> impl Fn(&MultiSpline) -> bool {
    move |s: &MultiSpline| {
        let n = ((s.duration() * 1000.0).ceil() as usize).max(1);
        (0..=n).all(|k| common::dist(&s.position_at(s.duration() * k as f64 / n as f64), &center) > radius)
    }
}

#[test]
fn corner_hugging_obstacle_keeps_clear() {
    let lim = limits(2);
    let path = GeometricPath::new(vec![vec![0.0, 0.0], vec![1.2, 0.0], vec![1.2, 1.2]]);
    let (center, radius) = ([1.1, 0.12], 0.08);
    let cert = disc_certifier(center, radius);
    let params = ConversionParams::new(0.01);
    let t = path_to_trajectory(&path, &lim, &params, &cert).unwrap();
    check_common(&t, &path, &lim);
    for q in t.polyline(0.0005) {
        assert!(common::dist(&q, &center) > radius - 1e-3);
    }
    let free = path_to_trajectory(&path, &lim, &params, &always).unwrap();
    let f_blocked = frechet_to_polyline(&t.polyline(0.001), &path.nodes);
    let f_free = frechet_to_polyline(&free.polyline(0.001), &path.nodes);
    assert!(f_blocked <= f_free + 1e-12, "{f_blocked} {f_free}");
    let off = path_to_trajectory(&path, &lim, &params.without_interpolation(), &cert).unwrap();
    assert!(frechet_to_polyline(&off.polyline(0.001), &path.nodes) <= 1e-6);
}

#[test]
fn scene_certifier_conversion_is_collision_free() {
    let model = ChainModel::planar_2dof();
    let lim = limits(2);
    let obstacles = vec![Obstacle::cuboid(Point2::new(0.3, -0.25), Vector2::new(0.1, 0.1))];
    let path = GeometricPath::new(vec![vec![0.0, 0.0], vec![0.0, 1.2], vec![2.4, 1.2]]);
    path.validate_in_scene(&model, &obstacles).unwrap();
    let cert = StaticSceneCertifier { model: &model, obstacles: &obstacles, dt: 0.001 };
    let t = path_to_trajectory(&path, &lim, &ConversionParams::new(0.01), &cert).unwrap();
    check_common(&t, &path, &lim);
    for tt in t.sample_times(0.001) {
        assert!(!cfs45::kinematics::in_collision(&model, &t.state_at(tt).position, &obstacles));
    }
}

#[test]
fn bisection_first_probe_in_free_space() {
    let lim = limits(2);
    let carrier = plan_to_target(&BoundaryState::at_rest(vec![0.0, 0.0], 0.0), &[0.4, 0.0], &lim, None).unwrap();
    let mut probes = Vec::new();
    let cert = |s: &MultiSpline| {
        probes.push(s.position_at(0.0));
        true
    };
    let cell = std::cell::RefCell::new(cert);
    let (split, spline) =
        interpolating_spline_bisection(&carrier, &[0.4, 0.4], &[0.0, 0.0], 0.001, &lim, None, &|s: &MultiSpline| (cell.borrow_mut())(s)).unwrap();
    drop(cell);
    assert!((probes[0][0] - carrier.position_at(0.5 * carrier.duration())[0]).abs() < 1e-12);
    assert!(split < 0.5 * carrier.duration());
    assert!(common::dist(&spline.final_state().position, &[0.4, 0.4]) <= 1e-8);
}

#[test]
fn large_threshold_probes_once() {
    let lim = limits(2);
    let carrier = plan_to_target(&BoundaryState::at_rest(vec![0.0, 0.0], 0.0), &[0.4, 0.0], &lim, None).unwrap();
    let count = std::cell::Cell::new(0);
    let cert = |_: &MultiSpline| {
        count.set(count.get() + 1);
        false
    };
    let r = interpolating_spline_bisection(&carrier, &[0.4, 0.4], &[0.0, 0.0], carrier.duration(), &lim, None, &cert);
    assert!(r.is_none());
    assert_eq!(count.get(), 1);
}

#[test]
fn target_reached_examples() {
    let lim = limits(6);
    let q = vec![0.0; 6];
    assert!(target_reached(&q, &[0.0; 6], &q, 0.1, &lim));
    assert!(!target_reached(&q, &[0.0; 6], &[0.1; 6], 0.1, &lim));
    // |qd| / |qd_max| = 0.5, radius 6 * 0.1 * 0.5 = 0.3
    let qd = vec![0.5 * PI; 6];
    let mut target = vec![0.0; 6];
    target[0] = 0.25;
    assert!(target_reached(&q, &qd, &target, 0.1, &lim));
    target[0] = 0.31;
    assert!(!target_reached(&q, &qd, &target, 0.1, &lim));
}

#[test]
fn waypoint_velocity_examples() {
    let lim = limits(2);
    assert_eq!(estimate_waypoint_velocity(&[1.0, 1.0], &[1.0, 1.0], 0.01, &lim), vec![0.0, 0.0]);
    let v = estimate_waypoint_velocity(&[0.0, 0.0], &[0.001, -0.002], 0.01, &lim);
    assert!((v[0] - 0.1).abs() < 1e-12 && (v[1] + 0.2).abs() < 1e-12);
    let v = estimate_waypoint_velocity(&[0.0, 0.0], &[1.0, 0.5], 0.01, &lim);
    assert!((v[0].abs() / PI - 1.0).abs() < 1e-12 && v[1].abs() < PI);
}

#[test]
fn invalid_paths_rejected() {
    let lim = limits(2);
    let p = ConversionParams::new(0.01);
    assert_eq!(path_to_trajectory(&GeometricPath::new(vec![]), &lim, &p, &always), Err(PathError::Empty));
    let rep = GeometricPath::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
    assert_eq!(path_to_trajectory(&rep, &lim, &p, &always), Err(PathError::RepeatedNode(1)));
    let model = ChainModel::planar_2dof();
    let wall = Obstacle::cuboid(Point2::new(0.0, 0.7), Vector2::new(0.05, 0.2));
    let blocked = GeometricPath::new(vec![vec![0.0, 0.0], vec![2.8, 0.0]]);
    assert_eq!(blocked.validate_in_scene(&model, &[wall]), Err(PathError::SegmentInCollision(0)));
}

fn zigzag() -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::array::uniform2(-1.0..1.0f64), 2..6).prop_map(|pts| pts.into_iter().map(|p| p.to_vec()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conversion_invariants(nodes in zigzag(), interpolate in prop::bool::ANY) {
        let lim = limits(2);
        let path = GeometricPath::new(nodes);
        prop_assume!(path.validate().is_ok());
        let mut params = ConversionParams::new(0.02);
        params.interpolate = interpolate;
        let t = path_to_trajectory(&path, &lim, &params, &always).unwrap();
        prop_assert!(t.max_junction_jump() <= 1e-8);
        prop_assert!(t.satisfies(&lim));
        let end = t.final_state().unwrap();
        prop_assert!(common::dist(&end.position, path.nodes.last().unwrap()) <= 1e-8);
        prop_assert!(at_rest(&end));
        if !interpolate {
            prop_assert!(frechet_to_polyline(&t.polyline(0.002), &path.nodes) <= 1e-6);
        }
        let d = simplify_and_densify(&path, params.d_max(&lim));
        prop_assert!(d.nodes.windows(2).all(|w| common::dist(&w[0], &w[1]) <= params.d_max(&lim) + 1e-12));
    }
}
