use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::free_space::{build_safe_trajectory, compute_gbur, safe_trajectory_at, CertContext};
use crate::kinematics::{line_collision_free, ChainModel, DistanceReport, Obstacle};
use crate::path::{plan_to_target, target_reached, GeometricPath, Trajectory, TrajectoryKind};
use crate::spline::{BoundaryState, MultiSpline};

use super::scenario::{Mode, Scenario};
use super::RngStream;

/// Fractions of the certified prefix tried when the full prefix fails.
const BACKOFF: [f64; 4] = [0.5, 0.25, 0.125, 0.0];

/// Wall-clock durations of spline generation calls; disabled under a fixed
/// clock.
#[derive(Debug, Clone, Default)]
pub struct GenerationTimer {
    pub enabled: bool,
    pub samples: Vec<f64>,
}

impl GenerationTimer {
    pub fn new(enabled: bool) -> Self {
        Self { enabled, samples: Vec::new() }
    }

    pub fn time<T>(&mut self, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.samples.push(if self.enabled { start.elapsed().as_secs_f64() } else { 0.0 });
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoldReason {
    /// No collision-free straight extension was found.
    NoExtension,
    /// The spline toward the target is kinematically infeasible.
    Infeasible,
    /// The safe trajectory could not be certified.
    NotCertified,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Planned,
    /// The previous trajectory is kept.
    Hold(HoldReason),
}

/// Planner memory across periods.
#[derive(Debug, Clone)]
pub struct PlannerState {
    pub target: Option<Vec<f64>>,
    /// Trajectory being executed.
    pub trajectory: Trajectory,
    rng: ChaCha8Rng,
}

impl PlannerState {
    /// At rest at `q_start` from time zero.
    pub fn new(q_start: &[f64], seed: u64) -> Self {
        Self { target: None, trajectory: Trajectory::hold(q_start, 0.0), rng: RngStream::Planner.rng(seed) }
    }
}

fn sample_configuration(model: &ChainModel, rng: &mut ChaCha8Rng) -> Vec<f64> {
    model.joint_limits.iter().map(|[lo, hi]| rng.gen_range(*lo..*hi)).collect()
}

/// Target choice: the goal if its straight line is free, else the current
/// target while it is unreached and visible, else the first of up to
/// `max_samples` random configurations with a free straight line.
pub fn select_target(
    scenario: &Scenario,
    obstacles: &[Obstacle],
    current: &BoundaryState,
    previous: Option<&[f64]>,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<f64>> {
    let (model, goal) = (&scenario.model, &scenario.q_goal);
    let q = &current.position;
    if line_collision_free(model, q, goal, obstacles) {
        return Some(goal.to_vec());
    }
    if let Some(t) = previous {
        let reached = target_reached(q, &current.velocity, t, scenario.planner.reach_radius, &scenario.limits);
        if !reached && line_collision_free(model, q, t, obstacles) {
            return Some(t.to_vec());
        }
    }
    (0..scenario.planner.max_samples).find_map(|_| {
        let q_rand = sample_configuration(model, rng);
        line_collision_free(model, q, &q_rand, obstacles).then_some(q_rand)
    })
}

/// One planning period: choose a target, synthesize the spline from the
/// current state and, in safe mode, cut it at the certified frontier (or an
/// earlier point of the certified prefix) and append a certified emergency
/// stop. On failure the previous trajectory is kept.
pub fn orrt_step(
    state: &mut PlannerState,
    scenario: &Scenario,
    obstacles: &[Obstacle],
    current: &BoundaryState,
    report: &DistanceReport,
    timer: &mut GenerationTimer,
) -> StepOutcome {
    let target = select_target(scenario, obstacles, current, state.target.as_deref(), &mut state.rng);
    let Some(target) = target else {
        return StepOutcome::Hold(HoldReason::NoExtension);
    };
    state.target = Some(target.clone());
    let delta_c = scenario.planner.delta_c;
    let regular: Option<MultiSpline> = timer.time(|| plan_to_target(current, &target, &scenario.limits, delta_c));
    let Some(regular) = regular else {
        return StepOutcome::Hold(HoldReason::Infeasible);
    };
    match scenario.mode {
        Mode::Regular => {
            state.trajectory = Trajectory::from_segments(vec![regular], TrajectoryKind::Regular);
            StepOutcome::Planned
        }
        Mode::Safe => {
            let ctx = CertContext {
                model: &scenario.model,
                report,
                measured_at: current.timestamp,
                v_obs: scenario.v_obs,
                dt: scenario.cert_dt(),
            };
            let gbur = compute_gbur(&ctx, &regular);
            // a stop from the frontier may leave the bubbles; earlier cuts
            // stop sooner and are tried before keeping the old trajectory
            let safe = build_safe_trajectory(&ctx, &regular, &gbur, &scenario.limits, delta_c).or_else(|| {
                if gbur.is_empty() {
                    return None;
                }
                BACKOFF.iter().find_map(|f| safe_trajectory_at(&ctx, &regular, gbur.terminal_local * f, &scenario.limits, delta_c))
            });
            match safe {
                Some(s) => {
                    state.trajectory = Trajectory::from_segments(vec![s.prefix, s.emergency], TrajectoryKind::Safe);
                    StepOutcome::Planned
                }
                None => StepOutcome::Hold(HoldReason::NotCertified),
            }
        }
    }
}

/// Offline geometric path by repeated straight extensions: toward the goal
/// when visible, else to a random visible configuration.
pub fn orrt_path(
    model: &ChainModel,
    obstacles: &[Obstacle],
    q_start: &[f64],
    q_goal: &[f64],
    max_samples: usize,
    max_extensions: usize,
    rng: &mut ChaCha8Rng,
) -> Option<GeometricPath> {
    let mut nodes = vec![q_start.to_vec()];
    for _ in 0..max_extensions {
        let q = nodes.last().expect("non-empty").clone();
        if q == q_goal {
            return Some(GeometricPath::new(nodes).with_provenance("orrt"));
        }
        if line_collision_free(model, &q, q_goal, obstacles) {
            nodes.push(q_goal.to_vec());
            return Some(GeometricPath::new(nodes).with_provenance("orrt"));
        }
        let next = (0..max_samples).find_map(|_| {
            let q_rand = sample_configuration(model, rng);
            line_collision_free(model, &q, &q_rand, obstacles).then_some(q_rand)
        });
        if let Some(next) = next {
            nodes.push(next);
        }
    }
    None
}
