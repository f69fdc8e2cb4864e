//! Jerk selection by bisection over the cubic coefficient `c`.

use super::constraints::satisfies;
use super::poly::JointSpline;
use super::synthesis::{candidates, Goal};
use super::types::{JointLimits, JointState};

/// Selected cubic coefficient and the resulting spline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JerkChoice {
    pub c: f64,
    pub duration: f64,
    pub spline: JointSpline,
}

/// Outcome of one probe of `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Probe {
    /// No positive real duration.
    NoRoots,
    /// Real durations exist but every candidate violates a limit.
    Violates,
    /// Shortest candidate that satisfies every limit.
    Feasible(JointSpline),
}

/// Probes one value of `c`.
pub fn probe(init: &JointState, goal: &Goal, c: f64, limits: &JointLimits) -> Probe {
    let cands = candidates(init, goal, c);
    if cands.is_empty() {
        return Probe::NoRoots;
    }
    // candidates come out sorted by duration
    cands
        .iter()
        .find(|s| satisfies(s, limits))
        .map_or(Probe::Violates, |s| Probe::Feasible(*s))
}

fn better(best: Option<JerkChoice>, c: f64, spline: JointSpline) -> Option<JerkChoice> {
    match best {
        Some(b) if b.duration <= spline.duration() => Some(b),
        _ => Some(JerkChoice { c, duration: spline.duration(), spline }),
    }
}

/// Bisection over `c in [-jerk_max/6, jerk_max/6]`.
///
/// Both range endpoints are probed first; a feasible endpoint ends the
/// search with the shorter of the two. Otherwise the end whose candidates
/// exist but violate the limits is kept as the "left" side and the interval
/// is halved until narrower than `delta_c`: a feasible midpoint is recorded
/// and becomes the new right end, a violating midpoint becomes the new left
/// end, and a midpoint without real roots becomes the new right end.
/// Returns `None` when neither endpoint yields real candidates or no probe
/// was ever feasible.
pub fn select_jerk_bisection(
    init: &JointState,
    goal: &Goal,
    limits: &JointLimits,
    delta_c: f64,
) -> Option<JerkChoice> {
    select_jerk_bisection_traced(init, goal, limits, delta_c, |_, _| {})
}

/// [`select_jerk_bisection`] reporting every probed `c` to `on_probe`.
pub fn select_jerk_bisection_traced(
    init: &JointState,
    goal: &Goal,
    limits: &JointLimits,
    delta_c: f64,
    mut on_probe: impl FnMut(f64, &Probe),
) -> Option<JerkChoice> {
    let (mut left, mut right) = limits.c_range();
    let p_left = probe(init, goal, left, limits);
    on_probe(left, &p_left);
    let p_right = probe(init, goal, right, limits);
    on_probe(right, &p_right);

    let mut best = None;
    if let Probe::Feasible(s) = p_left {
        best = better(best, left, s);
    }
    if let Probe::Feasible(s) = p_right {
        best = better(best, right, s);
    }
    if best.is_some() {
        return best;
    }
    if p_left == Probe::NoRoots && p_right == Probe::NoRoots {
        return None;
    }
    if p_right == Probe::Violates {
        std::mem::swap(&mut left, &mut right);
    }

    let delta_c = delta_c.abs().max(f64::EPSILON * limits.jerk_max);
    while (right - left).abs() > delta_c {
        let mid = 0.5 * (left + right);
        let p = probe(init, goal, mid, limits);
        on_probe(mid, &p);
        match p {
            Probe::Feasible(s) => {
                best = better(best, mid, s);
                right = mid;
            }
            Probe::Violates => left = mid,
            Probe::NoRoots => right = mid,
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rest_is_degenerate_accept() {
        let s = JointState::at_rest(1.0);
        let lim = JointLimits::xarm6();
        let r = select_jerk_bisection(&s, &Goal::State(s), &lim, lim.default_delta_c()).unwrap();
        assert_eq!(r.duration, 0.0);
    }

    #[test]
    fn first_interior_probe_is_zero() {
        // 1 rad rest-to-rest with xArm6 limits: both endpoints violate the
        // velocity limit, so bisection starts at the midpoint of the range.
        let lim = JointLimits::xarm6();
        let init = JointState::at_rest(0.0);
        let goal = Goal::State(JointState::at_rest(1.0));
        let mut probes = Vec::new();
        let r = select_jerk_bisection_traced(&init, &goal, &lim, lim.default_delta_c(), |c, p| {
            probes.push((c, *p))
        });
        assert!(r.is_some());
        assert_eq!(probes[0].0, -lim.jerk_max / 6.0);
        assert_eq!(probes[1].0, lim.jerk_max / 6.0);
        assert!(!matches!(probes[0].1, Probe::Feasible(_)));
        assert!(!matches!(probes[1].1, Probe::Feasible(_)));
        assert_eq!(probes[2].0, 0.0);
    }

    #[test]
    fn unreachable_returns_none() {
        // moving at full speed toward the position limit with no room to stop
        let lim = JointLimits::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let init = JointState::new(0.99, 1.0, 1.0);
        assert!(select_jerk_bisection(&init, &Goal::Stop, &lim, lim.default_delta_c()).is_none());
    }
}
