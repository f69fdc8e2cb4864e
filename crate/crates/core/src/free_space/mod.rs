//! Bubbles of free configuration space, burs and generalized burs over
//! candidate splines, and safe-trajectory assembly with emergency stops.

mod bubble;
mod bur;
mod safe;

pub use bubble::{bubble_contains, spine_max_parameter, Bubble};
pub use bur::{certify_spline, compute_bur, compute_gbur, Bur, CertContext, Certification, GBur, Spine};
pub use safe::{build_safe_trajectory, safe_trajectory_at, Certifier, SafeTrajectory, StaticSceneCertifier};
