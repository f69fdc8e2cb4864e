use serde::{Deserialize, Serialize};

use super::types::{BoundaryState, JointState};
use super::SplineError;

/// Slack on the evaluation domain to absorb rounding in accumulated times.
const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplineOrder {
    Quartic,
    Quintic,
}

/// One joint's polynomial `a t^5 + b t^4 + c t^3 + d t^2 + e t + f` on
/// `[0, duration]`. Quartic splines keep `a == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointSpline {
    /// `[a, b, c, d, e, f]`, highest power first.
    coeffs: [f64; 6],
    duration: f64,
    order: SplineOrder,
}

impl JointSpline {
    pub fn quintic(coeffs: [f64; 6], duration: f64) -> Self {
        Self { coeffs, duration: duration.max(0.0), order: SplineOrder::Quintic }
    }

    /// `coeffs` are `[b, c, d, e, f]`.
    pub fn quartic(coeffs: [f64; 5], duration: f64) -> Self {
        let [b, c, d, e, f] = coeffs;
        Self {
            coeffs: [0.0, b, c, d, e, f],
            duration: duration.max(0.0),
            order: SplineOrder::Quartic,
        }
    }

    /// Zero-duration spline holding `pos`.
    pub fn constant(pos: f64, order: SplineOrder) -> Self {
        Self { coeffs: [0.0, 0.0, 0.0, 0.0, 0.0, pos], duration: 0.0, order }
    }

    pub fn coefficients(&self) -> [f64; 6] {
        self.coeffs
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn order(&self) -> SplineOrder {
        self.order
    }

    /// Cubic coefficient; `6c` is the initial jerk.
    pub fn c(&self) -> f64 {
        self.coeffs[2]
    }

    /// Same polynomial over a different domain `[0, duration]`.
    pub fn with_duration(&self, duration: f64) -> Self {
        Self { duration: duration.max(0.0), ..*self }
    }

    /// `order`-th derivative at `t`, for `t` in `[0, duration]`.
    pub fn evaluate(&self, t: f64, order: usize) -> Result<f64, SplineError> {
        if order > 5 {
            return Err(SplineError::DerivativeOrder(order));
        }
        if !(t >= -DOMAIN_SLACK && t <= self.duration + DOMAIN_SLACK) {
            return Err(SplineError::OutOfDomain { t, duration: self.duration });
        }
        Ok(self.eval(t.clamp(0.0, self.duration), order))
    }

    /// Like [`evaluate`](Self::evaluate) but clamps `t` into the domain.
    pub fn evaluate_clamped(&self, t: f64, order: usize) -> f64 {
        self.eval(t.clamp(0.0, self.duration), order.min(5))
    }

    /// Horner evaluation of the analytically differentiated polynomial; no
    /// domain check.
    #[inline]
    pub fn eval(&self, t: f64, order: usize) -> f64 {
        // falling factorials p!/(p-k)! for p = 5..0
        const FALLING: [[f64; 6]; 6] = [
            [1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            [5.0, 4.0, 3.0, 2.0, 1.0, 0.0],
            [20.0, 12.0, 6.0, 2.0, 0.0, 0.0],
            [60.0, 24.0, 6.0, 0.0, 0.0, 0.0],
            [120.0, 24.0, 0.0, 0.0, 0.0, 0.0],
            [120.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        ];
        let f = &FALLING[order];
        let mut acc = 0.0;
        for i in 0..(6 - order) {
            acc = acc * t + self.coeffs[i] * f[i];
        }
        acc
    }

    pub fn state_at(&self, t: f64) -> JointState {
        let t = t.clamp(0.0, self.duration);
        JointState::new(self.eval(t, 0), self.eval(t, 1), self.eval(t, 2))
    }

    pub fn initial_state(&self) -> JointState {
        self.state_at(0.0)
    }

    pub fn final_state(&self) -> JointState {
        self.state_at(self.duration)
    }

    /// Coefficients of the `order`-th derivative, constant term first.
    pub(crate) fn derivative_ascending(&self, order: usize) -> [f64; 6] {
        let mut asc = [0.0; 6];
        for (p, slot) in asc.iter_mut().enumerate() {
            *slot = self.coeffs[5 - p];
        }
        for _ in 0..order {
            for p in 0..5 {
                asc[p] = (p + 1) as f64 * asc[p + 1];
            }
            asc[5] = 0.0;
        }
        asc
    }
}

/// Joint splines sharing one duration, starting at absolute time `start_time`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiSpline {
    joints: Vec<JointSpline>,
    duration: f64,
    start_time: f64,
}

impl MultiSpline {
    /// Member durations are overwritten with `duration`.
    pub fn new(joints: Vec<JointSpline>, duration: f64, start_time: f64) -> Self {
        let duration = duration.max(0.0);
        let joints = joints.into_iter().map(|j| j.with_duration(duration)).collect();
        Self { joints, duration, start_time }
    }

    /// Zero-duration spline holding `state`'s position.
    pub fn hold(position: &[f64], start_time: f64, order: SplineOrder) -> Self {
        Self::new(
            position.iter().map(|&p| JointSpline::constant(p, order)).collect(),
            0.0,
            start_time,
        )
    }

    pub fn joints(&self) -> &[JointSpline] {
        &self.joints
    }

    pub fn dof(&self) -> usize {
        self.joints.len()
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    pub fn end_time(&self) -> f64 {
        self.start_time + self.duration
    }

    pub fn with_start_time(mut self, start_time: f64) -> Self {
        self.start_time = start_time;
        self
    }

    /// Prefix on `[0, local_end]`.
    pub fn truncated(&self, local_end: f64) -> Self {
        Self::new(self.joints.clone(), local_end.clamp(0.0, self.duration), self.start_time)
    }

    /// Positions at local time `t` (clamped into the domain).
    pub fn position_at(&self, t: f64) -> Vec<f64> {
        self.derivative_at(t, 0)
    }

    pub fn derivative_at(&self, t: f64, order: usize) -> Vec<f64> {
        let t = t.clamp(0.0, self.duration);
        self.joints.iter().map(|j| j.eval(t, order)).collect()
    }

    pub fn position_into(&self, t: f64, out: &mut Vec<f64>) {
        let t = t.clamp(0.0, self.duration);
        out.clear();
        out.extend(self.joints.iter().map(|j| j.eval(t, 0)));
    }

    /// State at local time `t`; the timestamp is absolute.
    pub fn state_at(&self, t: f64) -> BoundaryState {
        let t = t.clamp(0.0, self.duration);
        let joints: Vec<JointState> = self.joints.iter().map(|j| j.state_at(t)).collect();
        BoundaryState::from_joints(&joints, self.start_time + t)
    }

    pub fn initial_state(&self) -> BoundaryState {
        self.state_at(0.0)
    }

    pub fn final_state(&self) -> BoundaryState {
        self.state_at(self.duration)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_clipped_query() {
        let s = JointSpline::quintic([0.0, 0.0, 0.0, 0.0, 0.0, 3.0], 0.0);
        assert_eq!(s.evaluate_clamped(7.0, 0), 3.0);
        assert!(matches!(s.evaluate(7.0, 0), Err(SplineError::OutOfDomain { .. })));
    }

    #[test]
    fn third_derivative_of_t5() {
        let s = JointSpline::quintic([1.0, 0.0, 0.0, 0.0, 0.0, 0.0], 2.0);
        assert_eq!(s.evaluate(1.0, 3).unwrap(), 60.0);
        assert_eq!(s.evaluate(1.0, 4).unwrap(), 120.0);
        assert_eq!(s.evaluate(1.0, 5).unwrap(), 120.0);
    }

    #[test]
    fn negative_time_rejected() {
        let s = JointSpline::quintic([1.0, 0.0, 0.0, 0.0, 0.0, 0.0], 2.0);
        assert!(s.evaluate(-0.1, 0).is_err());
        assert!(s.evaluate(2.5, 1).is_err());
        assert!(s.evaluate(1.0, 6).is_err());
    }

    #[test]
    fn ascending_derivative_matches_eval() {
        let s = JointSpline::quintic([0.3, -1.2, 2.0, 0.5, -0.7, 1.1], 3.0);
        for order in 0..4 {
            let asc = s.derivative_ascending(order);
            let t: f64 = 1.37;
            let direct: f64 = asc.iter().enumerate().map(|(p, c)| c * t.powi(p as i32)).sum();
            assert!((direct - s.eval(t, order)).abs() < 1e-10);
        }
    }

    #[test]
    fn quartic_layout() {
        let s = JointSpline::quartic([1.0, 2.0, 3.0, 4.0, 5.0], 1.0);
        assert_eq!(s.coefficients(), [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(s.eval(1.0, 0), 15.0);
        assert_eq!(s.c(), 2.0);
    }
}
