//! Planar serial-chain model: forward kinematics, enclosing radii, and
//! per-link distances to convex obstacles.

mod chain;
mod distance;

use thiserror::Error;

pub use chain::{ChainModel, RadiusMode, Segment};
pub use distance::{
    axis_nearest, capsule_nearest, distances_to_planes, in_collision, line_collision_free, min_distances,
    DistanceReport, NearestPair, Obstacle, SeparatingPlane, Shape, LINE_RESOLUTION,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinematicsError {
    #[error("invalid chain model: {0}")]
    InvalidModel(&'static str),
    #[error("expected {expected} joint values, got {got}")]
    DofMismatch { expected: usize, got: usize },
    #[error("configuration {0:?} outside joint limits")]
    OutOfLimits(Vec<f64>),
}
