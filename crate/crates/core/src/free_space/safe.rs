use crate::kinematics::{min_distances, ChainModel, Obstacle};
use crate::spline::{synchronize_stop, BoundaryState, JointLimits, MultiSpline};

use super::bur::{compute_gbur, CertContext, GBur};

/// Certified regular prefix followed by a quartic emergency stop.
#[derive(Debug, Clone, PartialEq)]
pub struct SafeTrajectory {
    pub prefix: MultiSpline,
    pub emergency: MultiSpline,
    /// Absolute time at which the robot is at rest at the stop configuration.
    pub horizon: f64,
}

impl SafeTrajectory {
    pub fn start_time(&self) -> f64 {
        self.prefix.start_time()
    }

    pub fn stop_configuration(&self) -> Vec<f64> {
        self.emergency.final_state().position
    }

    /// State at absolute time `t`, holding the stop configuration afterwards.
    pub fn state_at(&self, t: f64) -> BoundaryState {
        if t <= self.prefix.end_time() {
            self.prefix.state_at(t - self.prefix.start_time())
        } else if t <= self.emergency.end_time() {
            self.emergency.state_at(t - self.emergency.start_time())
        } else {
            BoundaryState::at_rest(self.stop_configuration(), t)
        }
    }
}

/// Cuts `regular` at the generalized bur's terminal node and appends an
/// emergency stop from the state there. Returns `None` if the bur is empty,
/// the stop is kinematically infeasible, or the stop itself cannot be fully
/// certified; the caller then keeps its previous safe trajectory.
pub fn build_safe_trajectory(
    ctx: &CertContext,
    regular: &MultiSpline,
    gbur: &GBur,
    limits: &[JointLimits],
    delta_c: Option<f64>,
) -> Option<SafeTrajectory> {
    if gbur.is_empty() && !gbur.reached {
        return None;
    }
    safe_trajectory_at(ctx, regular, gbur.terminal_local, limits, delta_c)
}

/// As [`build_safe_trajectory`] with the cut at local time `cut`, which must
/// not exceed the certified terminal time of `regular`.
pub fn safe_trajectory_at(
    ctx: &CertContext,
    regular: &MultiSpline,
    cut: f64,
    limits: &[JointLimits],
    delta_c: Option<f64>,
) -> Option<SafeTrajectory> {
    let prefix = regular.truncated(cut);
    let junction = prefix.final_state();
    let emergency = synchronize_stop(&junction, limits, delta_c)?;
    if !compute_gbur(ctx, &emergency).reached {
        return None;
    }
    let horizon = emergency.end_time();
    Some(SafeTrajectory { prefix, emergency, horizon })
}

/// Collision predicate over candidate splines used by path conversion.
pub trait Certifier {
    fn is_collision_free(&self, spline: &MultiSpline) -> bool;
}

impl<F: Fn(&MultiSpline) -> bool> Certifier for F {
    fn is_collision_free(&self, spline: &MultiSpline) -> bool {
        self(spline)
    }
}

/// Certifies against static obstacles: one distance measurement at the
/// spline's root, then a full generalized bur.
#[derive(Debug, Clone, Copy)]
pub struct StaticSceneCertifier<'a> {
    pub model: &'a ChainModel,
    pub obstacles: &'a [Obstacle],
    pub dt: f64,
}

impl Certifier for StaticSceneCertifier<'_> {
    fn is_collision_free(&self, spline: &MultiSpline) -> bool {
        let root = spline.position_at(0.0);
        let report = min_distances(self.model, &root, self.obstacles);
        if report.collision {
            return false;
        }
        let ctx = CertContext { model: self.model, report: &report, measured_at: spline.start_time(), v_obs: 0.0, dt: self.dt };
        compute_gbur(&ctx, spline).reached
    }
}
