//! Jerk-limited trajectory generation from geometric joint-space paths.
//!
//! Each path segment becomes a quintic spline per joint whose cubic
//! coefficient is chosen by bisection so the whole segment respects
//! position, velocity, acceleration and jerk limits. Segments are certified
//! collision-free with bubbles of free configuration space, chained into
//! generalized burs, and in dynamic scenes wrapped with a quartic emergency
//! stop so that any collision can only happen with the robot at rest.
//!
//! Modules, bottom-up:
//!
//! - [`spline`]: synthesis, evaluation, limit checks, synchronization
//! - [`kinematics`]: planar serial chain, capsule/obstacle distances,
//!   separating planes
//! - [`free_space`]: bubbles, burs, generalized burs, safe trajectories
//! - [`path`]: path-to-trajectory conversion
//! - [`sim`]: online planner loop, moving-obstacle scenarios
//! - [`metrics`]: success, smoothness and shape metrics

pub mod free_space;
pub mod kinematics;
pub mod metrics;
pub mod path;
pub mod sim;
pub mod spline;
