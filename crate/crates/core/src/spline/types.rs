use serde::{Deserialize, Serialize};

use super::SplineError;

/// Symmetric per-joint kinematic bounds: `|q^(o)(t)| <= max` for o = 0..3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointLimits {
    pub pos_max: f64,
    pub vel_max: f64,
    pub acc_max: f64,
    pub jerk_max: f64,
}

impl JointLimits {
    pub fn new(pos_max: f64, vel_max: f64, acc_max: f64, jerk_max: f64) -> Result<Self, SplineError> {
        let limits = Self { pos_max, vel_max, acc_max, jerk_max };
        limits.validate()?;
        Ok(limits)
    }

    /// Datasheet limits of the UFACTORY xArm6 (velocity π, acceleration 20,
    /// jerk 500). Joint range is taken as ±2π.
    pub fn xarm6() -> Self {
        Self {
            pos_max: 2.0 * std::f64::consts::PI,
            vel_max: std::f64::consts::PI,
            acc_max: 20.0,
            jerk_max: 500.0,
        }
    }

    pub fn validate(&self) -> Result<(), SplineError> {
        let ok = [self.pos_max, self.vel_max, self.acc_max, self.jerk_max]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if ok {
            Ok(())
        } else {
            Err(SplineError::InvalidLimits(*self))
        }
    }

    /// Bound for derivative `order` (0 = position .. 3 = jerk).
    pub fn bound(&self, order: Derivative) -> f64 {
        match order {
            Derivative::Position => self.pos_max,
            Derivative::Velocity => self.vel_max,
            Derivative::Acceleration => self.acc_max,
            Derivative::Jerk => self.jerk_max,
        }
    }

    /// Default bisection precision on the cubic coefficient `c`.
    pub fn default_delta_c(&self) -> f64 {
        self.jerk_max / 6.0 * 1e-3
    }

    /// Admissible range of the cubic coefficient, from `|6c| <= jerk_max`.
    pub fn c_range(&self) -> (f64, f64) {
        (-self.jerk_max / 6.0, self.jerk_max / 6.0)
    }

    /// Whether a state lies inside the position/velocity/acceleration box.
    pub fn admits(&self, state: &JointState) -> bool {
        const SLACK: f64 = 1e-9;
        state.pos.abs() <= self.pos_max + SLACK
            && state.vel.abs() <= self.vel_max + SLACK
            && state.acc.abs() <= self.acc_max + SLACK
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Derivative {
    #[serde(rename = "P")]
    Position,
    #[serde(rename = "V")]
    Velocity,
    #[serde(rename = "A")]
    Acceleration,
    #[serde(rename = "J")]
    Jerk,
}

impl Derivative {
    pub const ALL: [Derivative; 4] = [
        Derivative::Position,
        Derivative::Velocity,
        Derivative::Acceleration,
        Derivative::Jerk,
    ];

    pub fn order(self) -> usize {
        self as usize
    }
}

/// Position, velocity and acceleration of a single joint.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointState {
    pub pos: f64,
    pub vel: f64,
    pub acc: f64,
}

impl JointState {
    pub fn new(pos: f64, vel: f64, acc: f64) -> Self {
        Self { pos, vel, acc }
    }

    pub fn at_rest(pos: f64) -> Self {
        Self { pos, vel: 0.0, acc: 0.0 }
    }

    pub fn is_rest(&self) -> bool {
        self.vel == 0.0 && self.acc == 0.0
    }
}

/// Joint-space state of the whole chain at one time instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryState {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub acceleration: Vec<f64>,
    #[serde(default)]
    pub timestamp: f64,
}

impl BoundaryState {
    pub fn at_rest(position: Vec<f64>, timestamp: f64) -> Self {
        let n = position.len();
        Self {
            position,
            velocity: vec![0.0; n],
            acceleration: vec![0.0; n],
            timestamp,
        }
    }

    pub fn from_joints(joints: &[JointState], timestamp: f64) -> Self {
        Self {
            position: joints.iter().map(|j| j.pos).collect(),
            velocity: joints.iter().map(|j| j.vel).collect(),
            acceleration: joints.iter().map(|j| j.acc).collect(),
            timestamp,
        }
    }

    pub fn dof(&self) -> usize {
        self.position.len()
    }

    pub fn joint(&self, i: usize) -> JointState {
        JointState::new(self.position[i], self.velocity[i], self.acceleration[i])
    }

    pub fn joints(&self) -> impl Iterator<Item = JointState> + '_ {
        (0..self.dof()).map(|i| self.joint(i))
    }

    pub fn is_consistent(&self) -> bool {
        self.velocity.len() == self.position.len() && self.acceleration.len() == self.position.len()
    }

    pub fn speed(&self) -> f64 {
        self.velocity.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}
