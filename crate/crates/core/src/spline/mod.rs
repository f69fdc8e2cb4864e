//! Single-segment quintic/quartic spline synthesis under symmetric
//! position, velocity, acceleration and jerk limits.

mod bisection;
mod constraints;
mod poly;
pub mod roots;
mod synthesis;
mod sync;
mod types;

use thiserror::Error;

pub use bisection::{probe, select_jerk_bisection, select_jerk_bisection_traced, JerkChoice, Probe};
pub use constraints::{check_constraints, derivative_range, satisfies, ConstraintReport, LIMIT_SLACK};
pub use poly::{JointSpline, MultiSpline, SplineOrder};
pub use roots::solve_cubic_min_positive;
pub use synthesis::{quartic_stop_candidates, quintic_candidates, solve_fixed_duration, Candidates, Goal, RESIDUAL_TOL};
pub use sync::{synchronize, synchronize_states, synchronize_stop, JointProblem};
pub use types::{BoundaryState, Derivative, JointLimits, JointState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SplineError {
    #[error("time {t} outside spline domain [0, {duration}]")]
    OutOfDomain { t: f64, duration: f64 },
    #[error("derivative order {0} not supported")]
    DerivativeOrder(usize),
    #[error("cubic coefficient {c} outside jerk range (jerk_max = {jerk_max})")]
    JerkOutOfRange { c: f64, jerk_max: f64 },
    #[error("invalid joint limits {0:?}")]
    InvalidLimits(JointLimits),
}
