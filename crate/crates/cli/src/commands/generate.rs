use std::time::Instant;

use cfs45::path::{Trajectory, TrajectoryKind};
use cfs45::spline::{synchronize, Goal, JointLimits, JointProblem, JointState, SplineOrder};
use serde::Serialize;

use crate::config::{GenerateRequest, DEFAULT_RATE_HZ};
use crate::error::{CliError, Result};

/// Per-joint solution details.
#[derive(Debug, Clone, Serialize)]
pub struct JointSidecar {
    /// Power-basis coefficients, highest degree first.
    pub coefficients: Vec<f64>,
    /// Cubic coefficient; jerk at the start is `6 c`.
    pub c: f64,
    /// Largest deviation of the end state from the requested one.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenerateSidecar {
    pub order: SplineOrder,
    pub t_f: f64,
    pub joints: Vec<JointSidecar>,
    /// Wall-clock time of the synchronized solve; zero under a fixed clock.
    pub generation_time_s: f64,
    pub sample_rate_hz: f64,
}

pub struct Generated {
    pub trajectory: Trajectory,
    pub sidecar: GenerateSidecar,
}

fn check_state(which: &str, states: &[JointState], limits: &[JointLimits]) -> Result<()> {
    if states.iter().zip(limits).any(|(s, l)| !l.admits(s)) {
        return Err(CliError::Infeasible(format!("infeasible {which} state")));
    }
    if states.iter().any(|s| !(s.pos.is_finite() && s.vel.is_finite() && s.acc.is_finite())) {
        return Err(CliError::Config(format!("non-finite {which} state")));
    }
    Ok(())
}

pub fn generate(req: &GenerateRequest, delta_c: Option<f64>, fixed_clock: bool) -> Result<Generated> {
    let dof = req.initial.len();
    if dof == 0 {
        return Err(CliError::Config("no joints in request".into()));
    }
    let limits = req.limits.expand(dof)?;
    check_state("initial", &req.initial, &limits)?;
    let goals: Vec<Goal> = match &req.fin {
        Some(fin) if fin.len() != dof => {
            return Err(CliError::Config(format!("{} final states for {dof} joints", fin.len())));
        }
        Some(fin) => {
            check_state("final", fin, &limits)?;
            fin.iter().map(|f| Goal::State(*f)).collect()
        }
        None => vec![Goal::Stop; dof],
    };
    let delta_c = delta_c.or(req.delta_c);
    if delta_c.is_some_and(|d| !(d > 0.0)) {
        return Err(CliError::Config("delta_c must be positive".into()));
    }
    let rate = req.sample_rate_hz.unwrap_or(DEFAULT_RATE_HZ);
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(CliError::Config("sample_rate_hz must be positive".into()));
    }
    let problems: Vec<JointProblem> = req
        .initial
        .iter()
        .zip(&goals)
        .zip(&limits)
        .map(|((init, goal), l)| JointProblem { init: *init, goal: *goal, limits: *l })
        .collect();

    let started = Instant::now();
    let spline = synchronize(&problems, delta_c, 0.0);
    let elapsed = started.elapsed().as_secs_f64();
    let spline = spline.ok_or_else(|| CliError::Infeasible("no spline satisfies the limits for these boundary conditions".into()))?;

    let joints = spline
        .joints()
        .iter()
        .zip(&goals)
        .map(|(j, goal)| {
            let end = j.final_state();
            let residual = match goal {
                Goal::State(f) => (end.pos - f.pos).abs().max((end.vel - f.vel).abs()).max((end.acc - f.acc).abs()),
                Goal::Stop => end.vel.abs().max(end.acc.abs()),
            };
            let k = j.coefficients();
            let coefficients = match j.order() {
                SplineOrder::Quintic => k.to_vec(),
                SplineOrder::Quartic => k[1..].to_vec(),
            };
            JointSidecar { coefficients, c: j.c(), residual }
        })
        .collect();
    let order = if req.fin.is_some() { SplineOrder::Quintic } else { SplineOrder::Quartic };
    let sidecar = GenerateSidecar {
        order,
        t_f: spline.duration(),
        joints,
        generation_time_s: if fixed_clock { 0.0 } else { elapsed },
        sample_rate_hz: rate,
    };
    Ok(Generated { trajectory: Trajectory::from_segments(vec![spline], TrajectoryKind::Regular), sidecar })
}
