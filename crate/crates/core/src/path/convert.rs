use serde::{Deserialize, Serialize};

use crate::free_space::Certifier;
use crate::spline::{derivative_range, synchronize_states, BoundaryState, Derivative, JointLimits, MultiSpline};

use super::geometry::{estimate_waypoint_velocity, simplify_and_densify, GeometricPath, NodeKind};
use super::trajectory::{Trajectory, TrajectoryKind};
use super::PathError;

/// Tolerance on the straight-run check of uncertified segments.
const ON_SEGMENT_TOL: f64 = 1e-9;

/// Conversion settings; `None` fields take period-derived defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConversionParams {
    /// Planner period `T` in s.
    pub period: f64,
    /// Largest node gap; defaults to `|vel_max| T`.
    #[serde(default)]
    pub d_max: Option<f64>,
    /// Corner bisection time threshold; defaults to `T / 100`.
    #[serde(default)]
    pub threshold: Option<f64>,
    /// Jerk-coefficient precision; defaults per joint.
    #[serde(default)]
    pub delta_c: Option<f64>,
    /// Try to bypass corners; `false` visits every node on the path.
    #[serde(default = "yes")]
    pub interpolate: bool,
}

fn yes() -> bool {
    true
}

impl ConversionParams {
    pub fn new(period: f64) -> Self {
        Self { period, d_max: None, threshold: None, delta_c: None, interpolate: true }
    }

    pub fn without_interpolation(mut self) -> Self {
        self.interpolate = false;
        self
    }

    pub fn d_max(&self, limits: &[JointLimits]) -> f64 {
        self.d_max.unwrap_or_else(|| limits.iter().map(|l| l.vel_max * l.vel_max).sum::<f64>().sqrt() * self.period)
    }

    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or(self.period / 100.0)
    }

    fn validate(&self) -> Result<(), PathError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.period) {
            return Err(PathError::InvalidParameter("period must be positive"));
        }
        if self.d_max.is_some_and(|d| !positive(d)) {
            return Err(PathError::InvalidParameter("d_max must be positive"));
        }
        if self.threshold.is_some_and(|d| !positive(d)) {
            return Err(PathError::InvalidParameter("threshold must be positive"));
        }
        if self.delta_c.is_some_and(|d| !positive(d)) {
            return Err(PathError::InvalidParameter("delta_c must be positive"));
        }
        Ok(())
    }
}

/// True if every joint of `spline` stays within the box spanned by `a` and
/// `b`. For splines whose joints are scaled copies of one profile this means
/// the motion stays on the segment.
pub fn stays_on_segment(spline: &MultiSpline, a: &[f64], b: &[f64]) -> bool {
    spline.joints().iter().zip(a.iter().zip(b)).all(|(j, (x, y))| {
        let (lo, hi) = derivative_range(j, Derivative::Position);
        lo >= x.min(*y) - ON_SEGMENT_TOL && hi <= x.max(*y) + ON_SEGMENT_TOL
    })
}

fn state(position: &[f64], velocity: Vec<f64>, timestamp: f64) -> BoundaryState {
    let n = position.len();
    BoundaryState { position: position.to_vec(), velocity, acceleration: vec![0.0; n], timestamp }
}

/// Spline from `current` to `target` at rest.
pub fn plan_to_target(
    current: &BoundaryState,
    target: &[f64],
    limits: &[JointLimits],
    delta_c: Option<f64>,
) -> Option<MultiSpline> {
    let fin = state(target, vec![0.0; target.len()], 0.0);
    synchronize_states(current, &fin, limits, delta_c)
}

/// Target switching rule: reached when within `n R |qd| / |qd_max|`, or
/// exactly at the target.
pub fn target_reached(q: &[f64], qd: &[f64], target: &[f64], r: f64, limits: &[JointLimits]) -> bool {
    if q == target {
        return true;
    }
    let norm = |v: &mut dyn Iterator<Item = f64>| v.map(|x| x * x).sum::<f64>().sqrt();
    let dist = norm(&mut q.iter().zip(target).map(|(a, b)| a - b));
    let speed = norm(&mut qd.iter().copied());
    let speed_max = norm(&mut limits.iter().map(|l| l.vel_max));
    dist <= q.len() as f64 * r * speed / speed_max
}

/// Scalings tried on a node's pass-through velocity before stopping there.
const PASS_SCALES: [f64; 4] = [1.0, 0.5, 0.25, 0.125];

struct Converter<'a, C: ?Sized> {
    nodes: Vec<Vec<f64>>,
    kinds: Vec<NodeKind>,
    /// Index of the corner (or last node) that ends each node's straight run.
    run_end: Vec<usize>,
    limits: &'a [JointLimits],
    params: ConversionParams,
    certifier: &'a C,
    /// Lazily computed pass-through velocity per node, `Some(None)` when
    /// the node must be visited at rest.
    through: Vec<Option<Option<Vec<f64>>>>,
}

impl<'a, C: Certifier + ?Sized> Converter<'a, C> {
    fn last(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Spline from `(q_j, v)` to rest at the end of `j`'s straight run,
    /// if feasible and on that run.
    fn stop_at_run_end(&self, from: &BoundaryState, j: usize) -> Option<MultiSpline> {
        let end = self.run_end[j];
        plan_to_target(from, &self.nodes[end], self.limits, self.params.delta_c)
            .filter(|s| stays_on_segment(s, &self.nodes[j], &self.nodes[end]))
    }

    /// Whether passing node `j` at `v` still allows a full stop at the end
    /// of its straight run.
    fn admissible(&self, j: usize, v: &[f64]) -> bool {
        v.iter().all(|x| *x == 0.0) || self.stop_at_run_end(&state(&self.nodes[j], v.to_vec(), 0.0), j).is_some()
    }

    /// Velocity at node `j` when passed without stopping: the waypoint
    /// estimate, scaled down until the run can still be stopped.
    fn pass_velocity(&mut self, j: usize) -> Option<Vec<f64>> {
        if j == self.last() || self.kinds[j] == NodeKind::Corner {
            return None;
        }
        if let Some(cached) = &self.through[j] {
            return cached.clone();
        }
        let v = estimate_waypoint_velocity(&self.nodes[j], &self.nodes[j + 1], self.params.period, self.limits);
        let result = PASS_SCALES
            .iter()
            .map(|f| v.iter().map(|x| x * f).collect::<Vec<f64>>())
            .find(|cand| self.admissible(j, cand));
        self.through[j] = Some(result.clone());
        result
    }

    /// Spline from `from` to node `j`. The pass velocity is tried first,
    /// then smaller admissible ones, then a stop at `j`. With `along` set
    /// the spline must stay on the straight segment between that node and
    /// `j`.
    fn spline_to(&mut self, from: &BoundaryState, j: usize, along: Option<usize>) -> Option<MultiSpline> {
        let n = self.nodes[j].len();
        let mut options = Vec::with_capacity(PASS_SCALES.len() + 1);
        if let Some(v) = self.pass_velocity(j) {
            for f in &PASS_SCALES[1..] {
                options.push(v.iter().map(|x| x * f).collect::<Vec<f64>>());
            }
            options.insert(0, v);
        }
        options.push(vec![0.0; n]);
        for (idx, v) in options.into_iter().enumerate() {
            if idx > 0 && !self.admissible(j, &v) {
                continue;
            }
            let target = state(&self.nodes[j], v, 0.0);
            let Some(s) = synchronize_states(from, &target, self.limits, self.params.delta_c) else { continue };
            if along.map_or(true, |i| stays_on_segment(&s, &self.nodes[i], &self.nodes[j])) {
                return Some(s);
            }
        }
        None
    }

    fn bisect(&mut self, carrier: &MultiSpline, j: usize) -> Option<(f64, MultiSpline)> {
        let threshold = self.params.threshold();
        let certifier = self.certifier;
        bisect_split(carrier, threshold, |from| {
            self.spline_to(from, j, None).filter(|s| certifier.is_collision_free(s))
        })
    }
}

/// Bisection over the split time on `carrier`. The first probe is the
/// midpoint; a certified candidate moves the next probe toward the start,
/// a rejected one toward the end. Stops once consecutive probes are within
/// `threshold` and returns the last certified candidate.
fn bisect_split<F>(carrier: &MultiSpline, threshold: f64, mut candidate: F) -> Option<(f64, MultiSpline)>
where
    F: FnMut(&BoundaryState) -> Option<MultiSpline>,
{
    let duration = carrier.duration();
    let (mut t, mut step) = (0.5 * duration, 0.25 * duration);
    let mut best = None;
    loop {
        let found = candidate(&carrier.state_at(t));
        let ok = found.is_some();
        if let Some(s) = found {
            best = Some((t, s));
        }
        let next = if ok { t - step } else { t + step };
        if (next - t).abs() <= threshold {
            return best;
        }
        t = next;
        step *= 0.5;
    }
}

/// Corner-cutting search on `carrier` (node k to k+1) toward `q_k2`,
/// reached with velocity `v_k2` if feasible and at rest otherwise. Returns
/// the local split time on the carrier and the interpolating spline, or
/// `None` if no probe was certified.
pub fn interpolating_spline_bisection<C: Certifier + ?Sized>(
    carrier: &MultiSpline,
    q_k2: &[f64],
    v_k2: &[f64],
    threshold: f64,
    limits: &[JointLimits],
    delta_c: Option<f64>,
    certifier: &C,
) -> Option<(f64, MultiSpline)> {
    let zero = vec![0.0; q_k2.len()];
    bisect_split(carrier, threshold, |from| {
        [v_k2, &zero]
            .into_iter()
            .find_map(|v| synchronize_states(from, &state(q_k2, v.to_vec(), 0.0), limits, delta_c))
            .filter(|s| certifier.is_collision_free(s))
    })
}

/// Converts a collision-free geometric path into a spline sequence that
/// ends at the last node at rest. Each step first tries one spline across
/// the next node, then a corner-cutting spline found by bisection, and
/// finally the straight segment to the next node.
pub fn path_to_trajectory<C: Certifier + ?Sized>(
    path: &GeometricPath,
    limits: &[JointLimits],
    params: &ConversionParams,
    certifier: &C,
) -> Result<Trajectory, PathError> {
    params.validate()?;
    path.validate()?;
    if limits.len() != path.dof() {
        return Err(PathError::DofMismatch { index: 0, expected: path.dof(), got: limits.len() });
    }
    let dense = simplify_and_densify(path, params.d_max(limits));
    let kinds = dense.node_kinds();
    let n_nodes = dense.len();
    let mut run_end = vec![n_nodes - 1; n_nodes];
    for j in (0..n_nodes.saturating_sub(1)).rev() {
        run_end[j] = if kinds[j + 1] == NodeKind::Corner { j + 1 } else { run_end[j + 1] };
    }
    let mut conv = Converter {
        nodes: dense.nodes,
        kinds,
        run_end,
        limits,
        params: *params,
        certifier,
        through: vec![None; n_nodes],
    };
    let mut traj = Trajectory::new(TrajectoryKind::Regular);
    let mut current = BoundaryState::at_rest(conv.nodes[0].clone(), 0.0);
    if n_nodes == 1 {
        traj.push(MultiSpline::hold(&current.position, 0.0, crate::spline::SplineOrder::Quintic));
        return Ok(traj);
    }
    let mut k = 0;
    while k + 1 < n_nodes {
        if k + 2 < n_nodes && params.interpolate {
            if let Some(s) = conv.spline_to(&current, k + 2, None).filter(|s| certifier.is_collision_free(s)) {
                current = s.final_state();
                traj.push(s);
                k += 2;
                continue;
            }
        }
        let carrier = if k + 2 < n_nodes { conv.spline_to(&current, k + 1, Some(k)) } else { None };
        let Some(carrier) = carrier else {
            // straight to rest at the run end, always possible from a node
            // reached with an admissible velocity
            let s = conv.stop_at_run_end(&current, k).ok_or(PathError::Infeasible(k))?;
            current = s.final_state();
            traj.push(s);
            k = conv.run_end[k];
            continue;
        };
        if params.interpolate {
            if let Some((split, s)) = conv.bisect(&carrier, k + 2) {
                traj.push(carrier.truncated(split));
                current = s.final_state();
                traj.push(s);
                k += 2;
                continue;
            }
        }
        current = carrier.final_state();
        traj.push(carrier);
        k += 1;
    }
    Ok(traj)
}
