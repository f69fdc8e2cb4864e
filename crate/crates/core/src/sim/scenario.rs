use nalgebra::{Point2, Vector2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::kinematics::{min_distances, ChainModel, Obstacle, Segment};
use crate::spline::JointLimits;

use super::{SimError, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Regular,
    Safe,
}

/// How obstacles move between sensing events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotionModel {
    /// Constant velocity, reflected at the workspace bounds.
    #[default]
    Constant,
    /// As `Constant`, with a fresh random velocity after each reflection.
    Rerandomize,
    /// Heads for the nearest point of the robot at exactly `v_obs`.
    Pursuit,
}

/// Axis-aligned workspace rectangle for obstacle centers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl Bounds {
    pub fn square(half: f64) -> Self {
        Self { min: [-half, -half], max: [half, half] }
    }
}

/// Planner knobs with harness defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlannerSettings {
    /// Target-reach parameter `R` in rad.
    pub reach_radius: f64,
    /// Random extension attempts per period.
    pub max_samples: usize,
    /// Certification step; defaults to `T / 10`.
    pub cert_dt: Option<f64>,
    pub delta_c: Option<f64>,
}

impl Default for PlannerSettings {
    fn default() -> Self {
        Self { reach_radius: crate::path::DEFAULT_REACH_RADIUS, max_samples: 100, cert_dt: None, delta_c: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    pub model: ChainModel,
    pub limits: Vec<JointLimits>,
    pub obstacles: Vec<Obstacle>,
    pub bounds: Bounds,
    /// Obstacle speed bound used by the expanded bubbles, m/s.
    pub v_obs: f64,
    pub q_start: Vec<f64>,
    pub q_goal: Vec<f64>,
    /// Planner period `T` in s.
    pub period: f64,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    pub max_sim_time: f64,
    #[serde(default)]
    pub motion: MotionModel,
    #[serde(default)]
    pub planner: PlannerSettings,
    /// Zero all wall-clock measurements for byte-identical output.
    #[serde(default)]
    pub fixed_clock: bool,
    /// Count periods whose planning time exceeded `T`.
    #[serde(default)]
    pub account_overrun: bool,
}

impl Scenario {
    pub fn dof(&self) -> usize {
        self.model.dof()
    }

    pub fn cert_dt(&self) -> f64 {
        self.planner.cert_dt.unwrap_or(self.period / 10.0)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.model.validate().map_err(|e| SimError::Config(e.to_string()))?;
        let n = self.dof();
        if self.limits.len() != n || self.q_start.len() != n || self.q_goal.len() != n {
            return Err(SimError::Config(format!("limits, q_start and q_goal need {n} entries")));
        }
        for l in &self.limits {
            l.validate().map_err(|e| SimError::Config(e.to_string()))?;
        }
        if !(self.period > 0.0 && self.max_sim_time > 0.0 && self.v_obs >= 0.0) {
            return Err(SimError::Config("period and max_sim_time must be positive, v_obs non-negative".into()));
        }
        if self.obstacles.iter().any(|o| o.speed() > self.v_obs + 1e-12) {
            return Err(SimError::Config("an obstacle is faster than v_obs".into()));
        }
        for (name, q) in [("q_start", &self.q_start), ("q_goal", &self.q_goal)] {
            if !self.model.within_limits(q) {
                return Err(SimError::Config(format!("{name} outside joint limits")));
            }
            if min_distances(&self.model, q, &self.obstacles).collision {
                return Err(SimError::Config(format!("{name} in collision")));
            }
        }
        Ok(())
    }

    /// Same scenario without obstacle motion.
    pub fn frozen(mut self) -> Self {
        for o in &mut self.obstacles {
            o.velocity = Vector2::zeros();
        }
        self.v_obs = 0.0;
        self
    }
}

/// The two scenario families of the simulation study, for the planar
/// 2-DoF arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Archetype {
    /// Ten small random obstacles, speeds up to 1.6 m/s.
    Scenario1,
    /// Four large obstacles, speeds up to 0.3 m/s.
    Scenario2,
}

impl Archetype {
    pub fn speed_bound(self) -> f64 {
        match self {
            Archetype::Scenario1 => 1.6,
            Archetype::Scenario2 => 0.3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Archetype::Scenario1 => "scenario1",
            Archetype::Scenario2 => "scenario2",
        }
    }

    /// Random instance. Start and goal are drawn until both keep at least
    /// `margin` clearance from every obstacle.
    pub fn generate(self, seed: u64, period: f64, mode: Mode) -> Scenario {
        let mut rng = RngStream::Scenario.rng(seed);
        let model = ChainModel::planar_2dof();
        let pi = std::f64::consts::PI;
        let limits = vec![JointLimits { pos_max: pi, ..JointLimits::xarm6() }; 2];
        let bounds = Bounds::square(1.4);
        let v_max = self.speed_bound();
        let (count, half_range, keep_out) = match self {
            Archetype::Scenario1 => (10, (0.04, 0.08), 0.2),
            Archetype::Scenario2 => (4, (0.12, 0.18), 0.3),
        };
        let mut obstacles = Vec::with_capacity(count);
        while obstacles.len() < count {
            let center = Point2::new(rng.gen_range(bounds.min[0]..bounds.max[0]), rng.gen_range(bounds.min[1]..bounds.max[1]));
            if center.coords.norm() < keep_out {
                continue;
            }
            let speed = rng.gen_range(0.0..=v_max);
            let o = match self {
                Archetype::Scenario1 => Obstacle::cuboid(center, Vector2::repeat(rng.gen_range(half_range.0..half_range.1))),
                Archetype::Scenario2 => Obstacle::sphere(center, rng.gen_range(half_range.0..half_range.1)),
            };
            obstacles.push(o.with_velocity(random_direction(&mut rng) * speed));
        }
        let margin = 0.05;
        let draw = |rng: &mut ChaCha8Rng| loop {
            let q: Vec<f64> = (0..2).map(|_| rng.gen_range(-0.95 * pi..0.95 * pi)).collect();
            if min_distances(&model, &q, &obstacles).min_distance() > margin {
                return q;
            }
        };
        let q_start = draw(&mut rng);
        let q_goal = loop {
            let q = draw(&mut rng);
            if q.iter().zip(&q_start).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) > 0.5 {
                break q;
            }
        };
        Scenario {
            name: self.name().to_string(),
            model,
            limits,
            obstacles,
            bounds,
            v_obs: v_max,
            q_start,
            q_goal,
            period,
            mode,
            seed,
            max_sim_time: 20.0,
            motion: match self {
                Archetype::Scenario1 => MotionModel::Rerandomize,
                Archetype::Scenario2 => MotionModel::Constant,
            },
            planner: PlannerSettings::default(),
            fixed_clock: false,
            account_overrun: false,
        }
    }
}

pub(crate) fn random_direction(rng: &mut ChaCha8Rng) -> Vector2<f64> {
    let a = rng.gen_range(0.0..std::f64::consts::TAU);
    Vector2::new(a.cos(), a.sin())
}

/// Moves obstacles by `velocity * dt` and reflects them at `bounds`. With
/// `Pursuit` the velocity is first re-aimed at the nearest point of `robot`
/// with magnitude `v_obs`; with `Rerandomize` each reflection draws a new
/// inward velocity of random magnitude up to `v_obs`.
pub fn step_environment(
    obstacles: &mut [Obstacle],
    bounds: &Bounds,
    dt: f64,
    motion: MotionModel,
    v_obs: f64,
    robot: &[Segment],
    rng: &mut ChaCha8Rng,
) {
    for o in obstacles.iter_mut() {
        if motion == MotionModel::Pursuit {
            let target = robot
                .iter()
                .map(|s| s.closest_point(&o.center))
                .min_by(|a, b| (a - o.center).norm().total_cmp(&(b - o.center).norm()));
            if let Some(p) = target {
                let dir = p - o.center;
                let n = dir.norm();
                if n > 0.0 {
                    o.velocity = dir * (v_obs / n);
                }
            }
        }
        o.center += o.velocity * dt;
        // inward sign per reflected axis
        let mut inward = [0.0f64; 2];
        for axis in 0..2 {
            if o.center[axis] < bounds.min[axis] {
                o.center[axis] = 2.0 * bounds.min[axis] - o.center[axis];
                o.velocity[axis] = o.velocity[axis].abs();
                inward[axis] = 1.0;
            } else if o.center[axis] > bounds.max[axis] {
                o.center[axis] = 2.0 * bounds.max[axis] - o.center[axis];
                o.velocity[axis] = -o.velocity[axis].abs();
                inward[axis] = -1.0;
            }
        }
        if inward != [0.0, 0.0] && motion == MotionModel::Rerandomize {
            let mut v = random_direction(rng) * rng.gen_range(0.0..=v_obs);
            for axis in 0..2 {
                if inward[axis] != 0.0 {
                    v[axis] = inward[axis] * v[axis].abs();
                }
            }
            o.velocity = v;
        }
    }
}
