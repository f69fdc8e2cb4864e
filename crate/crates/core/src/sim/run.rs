use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::free_space::StaticSceneCertifier;
use crate::kinematics::{in_collision, Obstacle};
use crate::metrics::{adjusted_success, jerk_l1, jerk_l1_between};
use crate::path::{path_to_trajectory, ConversionParams, GeometricPath, Trajectory};
use crate::spline::{BoundaryState, JointLimits};

use super::orrt::{orrt_path, orrt_step, GenerationTimer, PlannerState, StepOutcome};
use super::scenario::{step_environment, Mode, Scenario};
use super::{RngStream, SimError};

/// Distance to the goal counted as arrival, rad.
pub const GOAL_TOL: f64 = 1e-6;
/// Joint-speed norm counted as rest, rad/s.
pub const REST_SPEED: f64 = 1e-6;
/// Control steps per planner period.
const CONTROL_STEPS: usize = 10;
/// Extension budget of the offline path search.
const MAX_EXTENSIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollisionType {
    #[default]
    None,
    /// Robot moving at contact.
    TypeI,
    /// Robot at rest at contact.
    TypeII,
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub scenario: String,
    pub seed: u64,
    pub period: f64,
    pub mode: Mode,
    pub adjusted_success: f64,
    pub classic_success: bool,
    /// Simulated time until the robot rested at the goal.
    pub time_to_goal: Option<f64>,
    /// Simulated time at termination.
    pub sim_time: f64,
    /// Cumulative wall-clock planning time; zero under a fixed clock.
    pub planner_time: f64,
    pub generation_calls: usize,
    pub generation_time_mean: f64,
    pub generation_time_p50: f64,
    pub generation_time_p95: f64,
    /// Executed joint-space path length, rad.
    pub path_length: f64,
    /// Executed jerk L1 norm summed over joints, rad/s^2.
    pub jerk_l1: f64,
    pub collision: CollisionType,
    pub collision_time: Option<f64>,
    /// Joint-speed norm at contact.
    pub collision_speed: Option<f64>,
    pub iterations: usize,
    /// Periods in which the previous trajectory was kept.
    pub holds: usize,
    /// Periods whose planning exceeded the period (only when accounted).
    pub overruns: usize,
    /// Largest `|derivative| / bound` seen at the control samples.
    pub max_limit_ratio: f64,
    pub q_end: Vec<f64>,
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn limit_ratio(state: &BoundaryState, jerk: &[f64], limits: &[JointLimits]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, l) in limits.iter().enumerate() {
        worst = worst
            .max(state.position[i].abs() / l.pos_max)
            .max(state.velocity[i].abs() / l.vel_max)
            .max(state.acceleration[i].abs() / l.acc_max);
        if let Some(j) = jerk.get(i) {
            worst = worst.max(j.abs() / l.jerk_max);
        }
    }
    worst
}

fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let idx = ((sorted.len() - 1) as f64 * p).round() as usize;
    sorted[idx]
}

/// Accumulates execution statistics.
struct Recorder<'a> {
    scenario: &'a Scenario,
    path_length: f64,
    jerk_l1: f64,
    max_ratio: f64,
    collision: CollisionType,
    collision_time: Option<f64>,
    collision_speed: Option<f64>,
    time_to_goal: Option<f64>,
}

impl<'a> Recorder<'a> {
    fn new(scenario: &'a Scenario) -> Self {
        Self {
            scenario,
            path_length: 0.0,
            jerk_l1: 0.0,
            max_ratio: 0.0,
            collision: CollisionType::None,
            collision_time: None,
            collision_speed: None,
            time_to_goal: None,
        }
    }

    /// Advances to `next` on `traj` over `[t0, t1]`; true if the run ends.
    fn advance(&mut self, traj: &Trajectory, obstacles: &[Obstacle], prev: &BoundaryState, next: &BoundaryState, t0: f64) -> bool {
        let s = self.scenario;
        self.path_length += distance(&prev.position, &next.position);
        self.jerk_l1 += jerk_l1_between(traj, t0, next.timestamp);
        self.max_ratio = self.max_ratio.max(limit_ratio(next, &traj.jerk_at(next.timestamp), &s.limits));
        if in_collision(&s.model, &next.position, obstacles) {
            let speed = next.speed();
            self.collision = if speed > REST_SPEED { CollisionType::TypeI } else { CollisionType::TypeII };
            self.collision_time = Some(next.timestamp);
            self.collision_speed = Some(speed);
            return true;
        }
        if distance(&next.position, &s.q_goal) <= GOAL_TOL && next.speed() <= REST_SPEED {
            self.time_to_goal = Some(next.timestamp);
            return true;
        }
        false
    }

    fn finish(self, q_end: Vec<f64>, sim_time: f64, timer: &GenerationTimer, planner_time: f64, iterations: usize, holds: usize, overruns: usize) -> SimRecord {
        let s = self.scenario;
        let success = self.time_to_goal.is_some() && self.collision == CollisionType::None;
        let q_end_eff = if success { s.q_goal.clone() } else { q_end };
        let mut sorted = timer.samples.clone();
        sorted.sort_by(f64::total_cmp);
        let mean = if sorted.is_empty() { 0.0 } else { sorted.iter().sum::<f64>() / sorted.len() as f64 };
        SimRecord {
            scenario: s.name.clone(),
            seed: s.seed,
            period: s.period,
            mode: s.mode,
            adjusted_success: if success { 1.0 } else { adjusted_success(&s.q_start, &q_end_eff, &s.q_goal).min(1.0 - f64::EPSILON) },
            classic_success: success,
            time_to_goal: self.time_to_goal,
            sim_time,
            planner_time,
            generation_calls: sorted.len(),
            generation_time_mean: mean,
            generation_time_p50: percentile(&sorted, 0.5),
            generation_time_p95: percentile(&sorted, 0.95),
            path_length: self.path_length,
            jerk_l1: self.jerk_l1,
            collision: self.collision,
            collision_time: self.collision_time,
            collision_speed: self.collision_speed,
            iterations,
            holds,
            overruns,
            max_limit_ratio: self.max_ratio,
            q_end: q_end_eff,
        }
    }
}

/// Period-synchronous run: sense, plan, then execute one period at ten
/// control steps while the obstacles move. Ends at the goal at rest, at a
/// collision, or at `max_sim_time`.
pub fn run_simulation(scenario: &Scenario) -> Result<SimRecord, SimError> {
    scenario.validate()?;
    let s = scenario;
    let mut obstacles = s.obstacles.clone();
    let mut env_rng = RngStream::Environment.rng(s.seed);
    let mut planner = PlannerState::new(&s.q_start, s.seed);
    let mut timer = GenerationTimer::new(!s.fixed_clock);
    let mut rec = Recorder::new(s);
    let mut current = BoundaryState::at_rest(s.q_start.clone(), 0.0);
    let (mut planner_time, mut iterations, mut holds, mut overruns) = (0.0, 0usize, 0usize, 0usize);
    let ctrl = s.period / CONTROL_STEPS as f64;
    if distance(&s.q_start, &s.q_goal) <= GOAL_TOL {
        rec.time_to_goal = Some(0.0);
    }
    let mut segments = Vec::with_capacity(s.dof());
    'run: while rec.time_to_goal.is_none() && (iterations as f64) * s.period < s.max_sim_time {
        let report = crate::kinematics::min_distances(&s.model, &current.position, &obstacles);
        let started = Instant::now();
        let outcome = orrt_step(&mut planner, s, &obstacles, &current, &report, &mut timer);
        let elapsed = if s.fixed_clock { 0.0 } else { started.elapsed().as_secs_f64() };
        planner_time += elapsed;
        if s.account_overrun && elapsed > s.period {
            overruns += 1;
        }
        if matches!(outcome, StepOutcome::Hold(_)) {
            holds += 1;
        }
        for k in 1..=CONTROL_STEPS {
            let t_next = (iterations * CONTROL_STEPS + k) as f64 * ctrl;
            s.model.link_segments_into(&current.position, &mut segments);
            step_environment(&mut obstacles, &s.bounds, ctrl, s.motion, s.v_obs, &segments, &mut env_rng);
            let next = planner.trajectory.state_at(t_next);
            let t_prev = current.timestamp;
            let done = rec.advance(&planner.trajectory, &obstacles, &current, &next, t_prev);
            current = next;
            if done {
                iterations += 1;
                break 'run;
            }
        }
        iterations += 1;
    }
    let sim_time = current.timestamp;
    Ok(rec.finish(current.position.clone(), sim_time, &timer, planner_time, iterations, holds, overruns))
}

/// Static pipeline result.
#[derive(Debug, Clone)]
pub struct StaticRun {
    pub record: SimRecord,
    pub path: GeometricPath,
    pub trajectory: Trajectory,
}

/// Static pipeline: offline straight-extension path, conversion to a
/// certified spline sequence, and execution with collision checks at ten
/// samples per period.
pub fn run_static(scenario: &Scenario, params: Option<ConversionParams>) -> Result<StaticRun, SimError> {
    let s = scenario.clone().frozen();
    s.validate()?;
    let mut rng = RngStream::Planner.rng(s.seed);
    let path = orrt_path(&s.model, &s.obstacles, &s.q_start, &s.q_goal, s.planner.max_samples, MAX_EXTENSIONS, &mut rng)
        .ok_or(SimError::NoPath(MAX_EXTENSIONS))?;
    path.validate_in_scene(&s.model, &s.obstacles)?;
    let params = params.unwrap_or_else(|| ConversionParams { delta_c: s.planner.delta_c, ..ConversionParams::new(s.period) });
    let certifier = StaticSceneCertifier { model: &s.model, obstacles: &s.obstacles, dt: s.cert_dt() };
    let started = Instant::now();
    let mut timer = GenerationTimer::new(!s.fixed_clock);
    let trajectory = timer.time(|| path_to_trajectory(&path, &s.limits, &params, &certifier))?;
    let planner_time = if s.fixed_clock { 0.0 } else { started.elapsed().as_secs_f64() };

    let mut rec = Recorder::new(&s);
    let times = trajectory.sample_times(s.period / CONTROL_STEPS as f64);
    let mut current = trajectory.state_at(times[0]);
    for &t in &times[1..] {
        let next = trajectory.state_at(t);
        let t_prev = current.timestamp;
        let done = rec.advance(&trajectory, &s.obstacles, &current, &next, t_prev);
        current = next;
        if done {
            break;
        }
    }
    if times.len() == 1 {
        rec.advance(&trajectory, &s.obstacles, &current.clone(), &current, current.timestamp);
    }
    rec.jerk_l1 = jerk_l1(&trajectory);
    let iterations = (trajectory.duration() / s.period).ceil() as usize;
    let sim_time = current.timestamp;
    let record = rec.finish(current.position.clone(), sim_time, &timer, planner_time, iterations, 0, 0);
    Ok(StaticRun { record, path, trajectory })
}
