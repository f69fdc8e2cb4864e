use nalgebra::{Point2, Vector2};
use serde::{Deserialize, Serialize};

use super::KinematicsError;

/// Tolerance on joint-limit checks.
const LIMIT_TOL: f64 = 1e-9;

/// Straight link axis between two joints (or a joint and the tip).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: Point2<f64>,
    pub end: Point2<f64>,
}

impl Segment {
    pub fn new(start: Point2<f64>, end: Point2<f64>) -> Self {
        Self { start, end }
    }

    /// Closest point on the segment to `p`.
    pub fn closest_point(&self, p: &Point2<f64>) -> Point2<f64> {
        let d = self.end - self.start;
        let len2 = d.norm_squared();
        if len2 == 0.0 {
            return self.start;
        }
        let s = ((p - self.start).dot(&d) / len2).clamp(0.0, 1.0);
        self.start + d * s
    }

    pub fn point_at(&self, s: f64) -> Point2<f64> {
        self.start + (self.end - self.start) * s
    }

    pub fn translated(&self, by: Vector2<f64>) -> Self {
        Self { start: self.start + by, end: self.end + by }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusMode {
    /// Outstretched-chain bound, valid for every configuration.
    #[default]
    Static,
    /// Farthest link endpoint at the query configuration only.
    AtConfiguration,
}

/// Planar serial chain of revolute joints. Link `k` is a capsule of radius
/// `link_radii[k]` around the axis from joint `k` to joint `k + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainModel {
    pub link_lengths: Vec<f64>,
    pub link_radii: Vec<f64>,
    /// Per-joint `[min, max]` in rad.
    pub joint_limits: Vec<[f64; 2]>,
    #[serde(default = "origin")]
    pub base: Point2<f64>,
}

fn origin() -> Point2<f64> {
    Point2::origin()
}

impl ChainModel {
    pub fn new(
        link_lengths: Vec<f64>,
        link_radii: Vec<f64>,
        joint_limits: Vec<[f64; 2]>,
    ) -> Result<Self, KinematicsError> {
        let model = Self { link_lengths, link_radii, joint_limits, base: Point2::origin() };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), KinematicsError> {
        let n = self.link_lengths.len();
        if n == 0 || self.link_radii.len() != n || self.joint_limits.len() != n {
            return Err(KinematicsError::InvalidModel("link, radius and limit counts must match and be non-zero"));
        }
        if self.link_lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(KinematicsError::InvalidModel("link lengths must be positive"));
        }
        if self.link_radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(KinematicsError::InvalidModel("capsule radii must be non-negative"));
        }
        if self.joint_limits.iter().any(|[lo, hi]| !(lo < hi)) {
            return Err(KinematicsError::InvalidModel("joint limits must satisfy min < max"));
        }
        Ok(())
    }

    /// Planar chain with symmetric joint range `[-range, range]`.
    pub fn planar(link_lengths: Vec<f64>, link_radii: Vec<f64>, range: f64) -> Result<Self, KinematicsError> {
        let n = link_lengths.len();
        Self::new(link_lengths, link_radii, vec![[-range, range]; n])
    }

    /// Two unit-ish links, the 2-DoF planar arm used for scenario runs.
    pub fn planar_2dof() -> Self {
        Self::planar(vec![0.5, 0.5], vec![0.03, 0.03], std::f64::consts::PI).expect("valid preset")
    }

    /// Six-link planar abstraction with xArm6-like proportions.
    pub fn xarm6_like() -> Self {
        Self::planar(
            vec![0.267, 0.289, 0.078, 0.343, 0.076, 0.097],
            vec![0.05, 0.045, 0.04, 0.04, 0.035, 0.03],
            std::f64::consts::PI,
        )
        .expect("valid preset")
    }

    pub fn dof(&self) -> usize {
        self.link_lengths.len()
    }

    pub fn within_limits(&self, q: &[f64]) -> bool {
        q.len() == self.dof()
            && q.iter().zip(&self.joint_limits).all(|(v, [lo, hi])| *v >= lo - LIMIT_TOL && *v <= hi + LIMIT_TOL)
    }

    /// Link axes at `q`; segment `k` starts where segment `k - 1` ends.
    pub fn forward_kinematics(&self, q: &[f64]) -> Result<Vec<Segment>, KinematicsError> {
        if q.len() != self.dof() {
            return Err(KinematicsError::DofMismatch { expected: self.dof(), got: q.len() });
        }
        if !self.within_limits(q) {
            return Err(KinematicsError::OutOfLimits(q.to_vec()));
        }
        Ok(self.link_segments(q))
    }

    /// Forward kinematics without limit checks.
    pub fn link_segments(&self, q: &[f64]) -> Vec<Segment> {
        let mut out = Vec::with_capacity(self.dof());
        self.link_segments_into(q, &mut out);
        out
    }

    pub fn link_segments_into(&self, q: &[f64], out: &mut Vec<Segment>) {
        out.clear();
        let mut angle = 0.0;
        let mut p = self.base;
        for (len, qi) in self.link_lengths.iter().zip(q) {
            angle += qi;
            let next = p + Vector2::new(angle.cos(), angle.sin()) * *len;
            out.push(Segment::new(p, next));
            p = next;
        }
    }

    /// Per-joint enclosing radii `r_i`: distance from joint `i` to the
    /// farthest point of links `i..n`, plus the largest capsule radius among
    /// those links.
    pub fn enclosing_radii(&self, q: &[f64], mode: RadiusMode) -> Vec<f64> {
        let n = self.dof();
        let mut radii = vec![0.0; n];
        let segments = match mode {
            RadiusMode::AtConfiguration => Some(self.link_segments(q)),
            RadiusMode::Static => None,
        };
        for i in 0..n {
            let reach = match &segments {
                None => self.link_lengths[i..].iter().sum::<f64>(),
                Some(segs) => {
                    let joint = segs[i].start;
                    segs[i..].iter().map(|s| (s.end - joint).norm()).fold(0.0, f64::max)
                }
            };
            let rho = self.link_radii[i..].iter().cloned().fold(0.0, f64::max);
            radii[i] = reach + rho;
        }
        radii
    }

    /// Configuration-independent radii.
    pub fn static_radii(&self) -> Vec<f64> {
        self.enclosing_radii(&vec![0.0; self.dof()], RadiusMode::Static)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn unit2() -> ChainModel {
        ChainModel::planar(vec![1.0, 1.0], vec![0.0, 0.0], PI).unwrap()
    }

    fn close(a: Point2<f64>, x: f64, y: f64) -> bool {
        (a.x - x).abs() < 1e-12 && (a.y - y).abs() < 1e-12
    }

    #[test]
    fn outstretched() {
        let s = unit2().forward_kinematics(&[0.0, 0.0]).unwrap();
        assert!(close(s[0].start, 0.0, 0.0) && close(s[0].end, 1.0, 0.0));
        assert!(close(s[1].start, 1.0, 0.0) && close(s[1].end, 2.0, 0.0));
    }

    #[test]
    fn straight_up() {
        let s = unit2().forward_kinematics(&[FRAC_PI_2, 0.0]).unwrap();
        assert!(close(s[0].end, 0.0, 1.0) && close(s[1].end, 0.0, 2.0));
    }

    #[test]
    fn rotation_composition() {
        let s = unit2().forward_kinematics(&[FRAC_PI_2, -FRAC_PI_2]).unwrap();
        assert!(close(s[1].start, 0.0, 1.0) && close(s[1].end, 1.0, 1.0));
    }

    #[test]
    fn out_of_limits_rejected() {
        assert!(matches!(
            unit2().forward_kinematics(&[4.0, 0.0]),
            Err(KinematicsError::OutOfLimits(_))
        ));
        assert!(matches!(unit2().forward_kinematics(&[0.0]), Err(KinematicsError::DofMismatch { .. })));
    }

    #[test]
    fn radii_variants() {
        let m = unit2();
        assert_eq!(m.enclosing_radii(&[0.0, 0.0], RadiusMode::Static), vec![2.0, 1.0]);
        let folded = m.enclosing_radii(&[0.0, PI], RadiusMode::AtConfiguration);
        assert!((folded[0] - 1.0).abs() < 1e-12 && (folded[1] - 1.0).abs() < 1e-12);
        assert_eq!(m.enclosing_radii(&[0.0, PI], RadiusMode::Static), vec![2.0, 1.0]);
        let single = ChainModel::planar(vec![0.7], vec![0.1], PI).unwrap();
        assert!((single.static_radii()[0] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn invalid_models() {
        assert!(ChainModel::planar(vec![], vec![], 1.0).is_err());
        assert!(ChainModel::planar(vec![1.0], vec![0.0, 0.0], 1.0).is_err());
        assert!(ChainModel::planar(vec![-1.0], vec![0.0], 1.0).is_err());
    }
}
