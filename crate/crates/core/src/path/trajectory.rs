use serde::{Deserialize, Serialize};

use crate::spline::{satisfies, BoundaryState, JointLimits, MultiSpline};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryKind {
    #[default]
    Regular,
    Safe,
}

/// Time-contiguous sequence of synchronized splines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub segments: Vec<MultiSpline>,
    pub kind: TrajectoryKind,
}

impl Trajectory {
    pub fn new(kind: TrajectoryKind) -> Self {
        Self { segments: Vec::new(), kind }
    }

    pub fn from_segments(segments: Vec<MultiSpline>, kind: TrajectoryKind) -> Self {
        Self { segments, kind }
    }

    /// Zero-duration trajectory resting at `q` from `t`.
    pub fn hold(q: &[f64], t: f64) -> Self {
        Self::from_segments(
            vec![MultiSpline::hold(q, t, crate::spline::SplineOrder::Quintic)],
            TrajectoryKind::Regular,
        )
    }

    pub fn push(&mut self, segment: MultiSpline) {
        self.segments.push(segment);
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn start_time(&self) -> f64 {
        self.segments.first().map_or(0.0, MultiSpline::start_time)
    }

    pub fn end_time(&self) -> f64 {
        self.segments.last().map_or(0.0, MultiSpline::end_time)
    }

    pub fn duration(&self) -> f64 {
        self.end_time() - self.start_time()
    }

    pub fn final_state(&self) -> Option<BoundaryState> {
        self.segments.last().map(MultiSpline::final_state)
    }

    fn segment_index(&self, t: f64) -> usize {
        let i = self.segments.partition_point(|s| s.end_time() < t);
        i.min(self.segments.len().saturating_sub(1))
    }

    /// State at absolute time `t`. Before the start the first state is
    /// returned; after the end the final position is held at rest.
    pub fn state_at(&self, t: f64) -> BoundaryState {
        let Some(last) = self.segments.last() else {
            return BoundaryState::at_rest(Vec::new(), t);
        };
        if t > last.end_time() {
            return BoundaryState::at_rest(last.final_state().position, t);
        }
        let s = &self.segments[self.segment_index(t)];
        let mut state = s.state_at(t - s.start_time());
        state.timestamp = t;
        state
    }

    /// Jerk at absolute time `t`; zero outside the domain.
    pub fn jerk_at(&self, t: f64) -> Vec<f64> {
        let Some(last) = self.segments.last() else { return Vec::new() };
        if t > last.end_time() || t < self.start_time() {
            return vec![0.0; last.dof()];
        }
        let s = &self.segments[self.segment_index(t)];
        s.derivative_at(t - s.start_time(), 3)
    }

    /// Largest position, velocity or acceleration jump (and time gap) at
    /// any junction.
    pub fn max_junction_jump(&self) -> f64 {
        self.segments
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0].final_state(), w[1].initial_state());
                let diff = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
                diff(&a.position, &b.position)
                    .max(diff(&a.velocity, &b.velocity))
                    .max(diff(&a.acceleration, &b.acceleration))
                    .max((w[0].end_time() - w[1].start_time()).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Every segment within `limits`.
    pub fn satisfies(&self, limits: &[JointLimits]) -> bool {
        self.segments.iter().all(|s| s.joints().iter().zip(limits).all(|(j, l)| satisfies(j, l)))
    }

    /// Sample times on a `dt` grid from the start, plus every junction and
    /// the end, ascending and deduplicated.
    pub fn sample_times(&self, dt: f64) -> Vec<f64> {
        let (t0, t1) = (self.start_time(), self.end_time());
        let mut times: Vec<f64> = Vec::new();
        if dt > 0.0 {
            let steps = ((t1 - t0) / dt).floor() as usize;
            times.extend((0..=steps).map(|k| t0 + k as f64 * dt));
        }
        times.extend(self.segments.iter().map(MultiSpline::start_time));
        times.push(t1);
        times.sort_by(f64::total_cmp);
        times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        times
    }

    /// Configurations at [`Self::sample_times`].
    pub fn polyline(&self, dt: f64) -> Vec<Vec<f64>> {
        self.sample_times(dt).into_iter().map(|t| self.state_at(t).position).collect()
    }
}
