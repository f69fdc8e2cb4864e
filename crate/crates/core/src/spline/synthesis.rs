//! Coefficient synthesis for a single joint.
//!
//! With `d, e, f` fixed by the initial state and the cubic coefficient `c`
//! chosen, the three final-state conditions leave `a`, `b` and the duration
//! `T` unknown. Eliminating `a` and `b` gives a cubic in `T`:
//!
//! ```text
//! c T^3 + (3d - a_f/2) T^2 + (6e + 4v_f) T + 10(f - p_f) = 0
//! ```
//!
//! after which `b` and `a` follow directly. The quartic stop spline drops
//! the final-position condition and pins `v_f = a_f = 0`, leaving
//! `c T^2 + (4d + a_f)/3 T + (e - v_f) = 0`.

use arrayvec::ArrayVec;

use super::poly::{JointSpline, SplineOrder};
use super::roots::{real_roots_cubic, real_roots_quadratic};
use super::types::{JointLimits, JointState};
use super::SplineError;

/// Boundary reconstruction tolerance.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Tolerance for recognizing a zero-motion segment.
const SAME_STATE_TOL: f64 = 1e-12;

pub type Candidates = ArrayVec<JointSpline, 3>;

/// What the segment must end in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Goal {
    /// Reach a full final state with a quintic.
    State(JointState),
    /// Come to rest anywhere with a quartic.
    Stop,
}

fn same_state(a: &JointState, b: &JointState) -> bool {
    (a.pos - b.pos).abs() <= SAME_STATE_TOL
        && (a.vel - b.vel).abs() <= SAME_STATE_TOL
        && (a.acc - b.acc).abs() <= SAME_STATE_TOL
}

fn at_rest(s: &JointState) -> bool {
    s.vel.abs() <= SAME_STATE_TOL && s.acc.abs() <= SAME_STATE_TOL
}

fn check_jerk_range(c: f64, limits: &JointLimits) -> Result<(), SplineError> {
    if (6.0 * c).abs() > limits.jerk_max * (1.0 + 1e-12) {
        Err(SplineError::JerkOutOfRange { c, jerk_max: limits.jerk_max })
    } else {
        Ok(())
    }
}

fn quintic_from(init: &JointState, c: f64, a: f64, b: f64, t_f: f64) -> JointSpline {
    JointSpline::quintic([a, b, c, 0.5 * init.acc, init.vel, init.pos], t_f)
}

/// Solves `b` then `a` for a known duration.
fn quintic_ab(init: &JointState, fin: &JointState, c: f64, t_f: f64) -> (f64, f64) {
    let d = 0.5 * init.acc;
    let e = init.vel;
    let t2 = t_f * t_f;
    let t3 = t2 * t_f;
    let b = (-1.5 * c * t2 + (-1.5 * d - 0.25 * fin.acc) * t_f - e + fin.vel) / t3;
    let a = (-12.0 * b * t2 - 6.0 * c * t_f - 2.0 * d + fin.acc) / (20.0 * t3);
    (a, b)
}

pub(crate) fn final_residual(spline: &JointSpline, fin: &JointState) -> f64 {
    let s = spline.final_state();
    (s.pos - fin.pos).abs().max((s.vel - fin.vel).abs()).max((s.acc - fin.acc).abs())
}

pub(crate) fn stop_residual(spline: &JointSpline) -> f64 {
    let s = spline.final_state();
    s.vel.abs().max(s.acc.abs())
}

/// Quintic splines from `init` to `fin` for one choice of `c`, one per
/// positive real duration root that reconstructs the final state.
pub fn quintic_candidates(
    init: &JointState,
    fin: &JointState,
    c: f64,
    limits: &JointLimits,
) -> Result<Candidates, SplineError> {
    check_jerk_range(c, limits)?;
    Ok(quintic_candidates_unchecked(init, fin, c))
}

pub(crate) fn quintic_candidates_unchecked(init: &JointState, fin: &JointState, c: f64) -> Candidates {
    let mut out = Candidates::new();
    if same_state(init, fin) && at_rest(init) {
        out.push(JointSpline::constant(init.pos, SplineOrder::Quintic));
        return out;
    }
    let d = 0.5 * init.acc;
    let roots = real_roots_cubic(
        c,
        3.0 * d - 0.5 * fin.acc,
        6.0 * init.vel + 4.0 * fin.vel,
        10.0 * (init.pos - fin.pos),
    );
    for t_f in roots {
        if !(t_f > 0.0 && t_f.is_finite()) {
            continue;
        }
        let (a, b) = quintic_ab(init, fin, c, t_f);
        let spline = quintic_from(init, c, a, b, t_f);
        if final_residual(&spline, fin) <= RESIDUAL_TOL {
            out.push(spline);
        }
    }
    out
}

/// Quartic stopping splines from `init` for one choice of `c`.
pub fn quartic_stop_candidates(
    init: &JointState,
    c: f64,
    limits: &JointLimits,
) -> Result<Candidates, SplineError> {
    check_jerk_range(c, limits)?;
    Ok(quartic_stop_candidates_unchecked(init, c))
}

pub(crate) fn quartic_stop_candidates_unchecked(init: &JointState, c: f64) -> Candidates {
    let mut out = Candidates::new();
    if at_rest(init) {
        out.push(JointSpline::constant(init.pos, SplineOrder::Quartic));
        return out;
    }
    let d = 0.5 * init.acc;
    for t_f in real_roots_quadratic(c, 4.0 * d / 3.0, init.vel) {
        if !(t_f > 0.0 && t_f.is_finite()) {
            continue;
        }
        let spline = quartic_stop_fixed(init, c, t_f);
        if stop_residual(&spline) <= RESIDUAL_TOL {
            out.push(spline);
        }
    }
    out
}

fn quartic_stop_fixed(init: &JointState, c: f64, t_f: f64) -> JointSpline {
    let d = 0.5 * init.acc;
    let b = (-2.0 * d - 6.0 * c * t_f) / (12.0 * t_f * t_f);
    JointSpline::quartic([b, c, d, init.vel, init.pos], t_f)
}

pub(crate) fn candidates(init: &JointState, goal: &Goal, c: f64) -> Candidates {
    match goal {
        Goal::State(fin) => quintic_candidates_unchecked(init, fin, c),
        Goal::Stop => quartic_stop_candidates_unchecked(init, c),
    }
}

/// Re-solves a joint for a prescribed duration. The duration cubic becomes
/// linear in `c`; `None` if the resulting `|6c|` exceeds the jerk limit or
/// the boundary state is not reproduced.
pub fn solve_fixed_duration(
    init: &JointState,
    goal: &Goal,
    t_f: f64,
    limits: &JointLimits,
) -> Option<JointSpline> {
    if t_f <= 0.0 {
        let done = match goal {
            Goal::State(fin) => same_state(init, fin) && at_rest(init),
            Goal::Stop => at_rest(init),
        };
        let order = match goal {
            Goal::State(_) => SplineOrder::Quintic,
            Goal::Stop => SplineOrder::Quartic,
        };
        return done.then(|| JointSpline::constant(init.pos, order));
    }
    let d = 0.5 * init.acc;
    let spline = match goal {
        Goal::State(fin) => {
            let t2 = t_f * t_f;
            let c = -((3.0 * d - 0.5 * fin.acc) * t2
                + (6.0 * init.vel + 4.0 * fin.vel) * t_f
                + 10.0 * (init.pos - fin.pos))
                / (t2 * t_f);
            check_jerk_range(c, limits).ok()?;
            let (a, b) = quintic_ab(init, fin, c, t_f);
            let s = quintic_from(init, c, a, b, t_f);
            (final_residual(&s, fin) <= RESIDUAL_TOL).then_some(s)?
        }
        Goal::Stop => {
            let c = -(4.0 * d / 3.0 * t_f + init.vel) / (t_f * t_f);
            check_jerk_range(c, limits).ok()?;
            let s = quartic_stop_fixed(init, c, t_f);
            (stop_residual(&s) <= RESIDUAL_TOL).then_some(s)?
        }
    };
    Some(spline)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_constant() {
        let s = JointState::at_rest(0.7);
        let c = quintic_candidates(&s, &s, 10.0, &JointLimits::xarm6()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].duration(), 0.0);
        assert_eq!(c[0].eval(0.0, 0), 0.7);
    }

    #[test]
    fn jerk_range_enforced() {
        let lim = JointLimits::xarm6();
        let s = JointState::at_rest(0.0);
        assert!(quintic_candidates(&s, &JointState::at_rest(1.0), 100.0, &lim).is_err());
        assert!(quartic_stop_candidates(&s, -100.0, &lim).is_err());
    }

    #[test]
    fn stop_from_rest_is_immediate() {
        let c = quartic_stop_candidates(&JointState::at_rest(0.3), 1.0, &JointLimits::xarm6()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].duration(), 0.0);
        assert_eq!(c[0].order(), SplineOrder::Quartic);
    }

    #[test]
    fn initial_state_reproduced_exactly() {
        let init = JointState::new(0.3, -0.8, 4.0);
        let fin = JointState::new(1.2, 0.5, -2.0);
        for c in [-80.0, -10.0, 0.0, 25.0, 83.0] {
            for s in quintic_candidates_unchecked(&init, &fin, c) {
                assert_eq!(s.eval(0.0, 0), init.pos);
                assert_eq!(s.eval(0.0, 1), init.vel);
                assert_eq!(s.eval(0.0, 2), init.acc);
                assert_eq!(s.eval(0.0, 3), 6.0 * c);
            }
        }
    }

    #[test]
    fn fixed_duration_matches_candidate() {
        let init = JointState::new(0.0, 0.4, 1.0);
        let fin = JointState::new(1.0, 0.0, 0.0);
        let lim = JointLimits::xarm6();
        let cands = quintic_candidates_unchecked(&init, &fin, 30.0);
        let first = cands[0];
        let resolved = solve_fixed_duration(&init, &Goal::State(fin), first.duration(), &lim).unwrap();
        assert!((resolved.c() - 30.0).abs() < 1e-9);
        for (x, y) in resolved.coefficients().iter().zip(first.coefficients()) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn quartic_elimination_symbolic_check() {
        // Substitute b from a(T) = 0 into v(T) and confirm the quadratic.
        let init = JointState::new(0.2, 1.3, -3.0);
        let d = 0.5 * init.acc;
        for c in [-50.0, -5.0, 7.0] {
            for t in [0.05, 0.3, 1.1] {
                let b = (-2.0 * d - 6.0 * c * t) / (12.0 * t * t);
                let v = 4.0 * b * t * t * t + 3.0 * c * t * t + 2.0 * d * t + init.vel;
                let q = c * t * t + 4.0 * d / 3.0 * t + init.vel;
                // v(T) = q(T) after elimination
                assert!((v - q).abs() < 1e-12, "{v} vs {q}");
            }
        }
    }
}
