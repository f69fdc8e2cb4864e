//! Geometric waypoint paths to certified spline sequences.

mod convert;
mod geometry;
mod trajectory;

use thiserror::Error;

pub use convert::{
    interpolating_spline_bisection, path_to_trajectory, plan_to_target, stays_on_segment, target_reached,
    ConversionParams,
};
pub use geometry::{estimate_waypoint_velocity, is_between, simplify_and_densify, GeometricPath, NodeKind, COLLINEAR_TOL};
pub use trajectory::{Trajectory, TrajectoryKind};

/// Default target-reach parameter `R` in rad.
pub const DEFAULT_REACH_RADIUS: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("path has no nodes")]
    Empty,
    #[error("node {index} has {got} joint values, expected {expected}")]
    DofMismatch { index: usize, expected: usize, got: usize },
    #[error("node {0} has a non-finite value")]
    NonFinite(usize),
    #[error("node {0} repeats its predecessor")]
    RepeatedNode(usize),
    #[error("segment {0} is in collision")]
    SegmentInCollision(usize),
    #[error("no feasible spline for the segment starting at node {0}")]
    Infeasible(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
