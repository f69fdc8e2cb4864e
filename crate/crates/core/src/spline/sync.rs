//! Multi-joint synchronization: every joint is re-solved for the slowest
//! joint's duration and re-verified.

use super::bisection::select_jerk_bisection;
use super::constraints::satisfies;
use super::poly::MultiSpline;
use super::synthesis::{solve_fixed_duration, Goal};
use super::types::{BoundaryState, JointLimits, JointState};

/// One joint's boundary-value problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointProblem {
    pub init: JointState,
    pub goal: Goal,
    pub limits: JointLimits,
}

impl JointProblem {
    pub fn to_state(init: JointState, fin: JointState, limits: JointLimits) -> Self {
        Self { init, goal: Goal::State(fin), limits }
    }

    pub fn stop(init: JointState, limits: JointLimits) -> Self {
        Self { init, goal: Goal::Stop, limits }
    }
}

/// Synchronized spline over all joints, starting at `start_time`.
///
/// `delta_c` of `None` uses each joint's default precision. Returns `None`
/// if any joint has no feasible solution on its own or fails after being
/// re-solved for the common duration.
pub fn synchronize(problems: &[JointProblem], delta_c: Option<f64>, start_time: f64) -> Option<MultiSpline> {
    let mut own = Vec::with_capacity(problems.len());
    let mut t_f: f64 = 0.0;
    for p in problems {
        let dc = delta_c.unwrap_or_else(|| p.limits.default_delta_c());
        let choice = select_jerk_bisection(&p.init, &p.goal, &p.limits, dc)?;
        t_f = t_f.max(choice.duration);
        own.push(choice);
    }
    let mut joints = Vec::with_capacity(problems.len());
    for (p, choice) in problems.iter().zip(&own) {
        if choice.duration == t_f {
            joints.push(choice.spline);
            continue;
        }
        let s = solve_fixed_duration(&p.init, &p.goal, t_f, &p.limits)?;
        if !satisfies(&s, &p.limits) {
            return None;
        }
        joints.push(s);
    }
    Some(MultiSpline::new(joints, t_f, start_time))
}

/// Rest-aware convenience: spline from `init` to `fin` with per-joint limits.
pub fn synchronize_states(
    init: &BoundaryState,
    fin: &BoundaryState,
    limits: &[JointLimits],
    delta_c: Option<f64>,
) -> Option<MultiSpline> {
    let problems: Vec<JointProblem> = (0..init.dof())
        .map(|i| JointProblem::to_state(init.joint(i), fin.joint(i), limits[i]))
        .collect();
    synchronize(&problems, delta_c, init.timestamp)
}

/// Quartic emergency stop from `init`, all joints ending together at rest.
pub fn synchronize_stop(init: &BoundaryState, limits: &[JointLimits], delta_c: Option<f64>) -> Option<MultiSpline> {
    let problems: Vec<JointProblem> = (0..init.dof())
        .map(|i| JointProblem::stop(init.joint(i), limits[i]))
        .collect();
    synchronize(&problems, delta_c, init.timestamp)
}
