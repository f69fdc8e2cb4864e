use serde::{Deserialize, Serialize};

use crate::kinematics::{line_collision_free, ChainModel, Obstacle};
use crate::spline::JointLimits;

use super::PathError;

/// Residual below which an interior node counts as lying on its neighbours'
/// segment.
pub const COLLINEAR_TOL: f64 = 1e-9;

/// Joint-space waypoint sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometricPath {
    pub nodes: Vec<Vec<f64>>,
    /// Free-form origin tag, e.g. planner name and seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

/// Waypoint role during conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    /// Endpoint or direction change: visited at rest unless bypassed.
    Corner,
    /// Interior node on a straight run: may be passed with velocity.
    Straight,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// True if `b` lies on the open segment `a -> c` within [`COLLINEAR_TOL`].
pub fn is_between(a: &[f64], b: &[f64], c: &[f64]) -> bool {
    let len2: f64 = a.iter().zip(c).map(|(x, y)| (y - x) * (y - x)).sum();
    if len2 == 0.0 {
        return false;
    }
    let s = a.iter().zip(b).zip(c).map(|((x, y), z)| (y - x) * (z - x)).sum::<f64>() / len2;
    if s <= 0.0 || s >= 1.0 {
        return false;
    }
    let residual2: f64 = a
        .iter()
        .zip(b)
        .zip(c)
        .map(|((x, y), z)| {
            let r = y - (x + s * (z - x));
            r * r
        })
        .sum();
    residual2.sqrt() <= COLLINEAR_TOL
}

impl GeometricPath {
    pub fn new(nodes: Vec<Vec<f64>>) -> Self {
        Self { nodes, provenance: None }
    }

    pub fn with_provenance(mut self, tag: impl Into<String>) -> Self {
        self.provenance = Some(tag.into());
        self
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dof(&self) -> usize {
        self.nodes.first().map_or(0, Vec::len)
    }

    /// Sum of Euclidean gaps.
    pub fn length(&self) -> f64 {
        self.nodes.windows(2).map(|w| dist(&w[0], &w[1])).sum()
    }

    /// Structural checks: non-empty, consistent dimension, finite values,
    /// distinct consecutive nodes.
    pub fn validate(&self) -> Result<(), PathError> {
        let n = self.dof();
        if self.nodes.is_empty() || n == 0 {
            return Err(PathError::Empty);
        }
        for (i, q) in self.nodes.iter().enumerate() {
            if q.len() != n {
                return Err(PathError::DofMismatch { index: i, expected: n, got: q.len() });
            }
            if q.iter().any(|v| !v.is_finite()) {
                return Err(PathError::NonFinite(i));
            }
        }
        if let Some(i) = self.nodes.windows(2).position(|w| w[0] == w[1]) {
            return Err(PathError::RepeatedNode(i + 1));
        }
        Ok(())
    }

    /// Structural checks plus straight-line collision checks of every gap.
    pub fn validate_in_scene(&self, model: &ChainModel, obstacles: &[Obstacle]) -> Result<(), PathError> {
        self.validate()?;
        if self.dof() != model.dof() {
            return Err(PathError::DofMismatch { index: 0, expected: model.dof(), got: self.dof() });
        }
        for (i, w) in self.nodes.windows(2).enumerate() {
            if !line_collision_free(model, &w[0], &w[1], obstacles) {
                return Err(PathError::SegmentInCollision(i));
            }
        }
        if self.nodes.len() == 1 && !line_collision_free(model, &self.nodes[0], &self.nodes[0], obstacles) {
            return Err(PathError::SegmentInCollision(0));
        }
        Ok(())
    }

    /// Role of every node: endpoints and direction changes are corners.
    pub fn node_kinds(&self) -> Vec<NodeKind> {
        let n = self.nodes.len();
        (0..n)
            .map(|i| {
                if i == 0 || i + 1 == n || !is_between(&self.nodes[i - 1], &self.nodes[i], &self.nodes[i + 1]) {
                    NodeKind::Corner
                } else {
                    NodeKind::Straight
                }
            })
            .collect()
    }
}

/// Drops repeated and collinear interior nodes, then subdivides every gap
/// evenly so no gap exceeds `d_max`.
pub fn simplify_and_densify(path: &GeometricPath, d_max: f64) -> GeometricPath {
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(path.nodes.len());
    for (i, q) in path.nodes.iter().enumerate() {
        if kept.last() == Some(q) {
            continue;
        }
        let interior = i > 0 && i + 1 < path.nodes.len();
        if interior && kept.last().is_some_and(|prev| is_between(prev, q, &path.nodes[i + 1])) {
            continue;
        }
        kept.push(q.clone());
    }
    let mut nodes = Vec::with_capacity(kept.len());
    for w in kept.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let pieces = ((dist(a, b) / d_max).ceil() as usize).max(1);
        for k in 0..pieces {
            let s = k as f64 / pieces as f64;
            nodes.push(a.iter().zip(b).map(|(x, y)| x + s * (y - x)).collect());
        }
    }
    if let Some(last) = kept.last() {
        nodes.push(last.clone());
    }
    GeometricPath { nodes, provenance: path.provenance.clone() }
}

/// Velocity through a straight node toward `q_next`: the gap divided by
/// `max(T, max_i |dq_i| / vel_max_i)`.
pub fn estimate_waypoint_velocity(q: &[f64], q_next: &[f64], period: f64, limits: &[JointLimits]) -> Vec<f64> {
    let t = q
        .iter()
        .zip(q_next)
        .zip(limits)
        .map(|((a, b), l)| (b - a).abs() / l.vel_max)
        .fold(period, f64::max);
    q.iter().zip(q_next).map(|(a, b)| (b - a) / t).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_removed() {
        let p = GeometricPath::new(vec![vec![0.0, 0.0], vec![0.5, 0.5], vec![1.0, 1.0]]);
        assert_eq!(simplify_and_densify(&p, 10.0).nodes, vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn ceiling_division() {
        let p = GeometricPath::new(vec![vec![0.0], vec![2.5]]);
        let d = simplify_and_densify(&p, 1.0);
        assert_eq!(d.len(), 4);
        assert!(d.nodes.windows(2).all(|w| dist(&w[0], &w[1]) <= 1.0 + 1e-12));
        assert_eq!(d.node_kinds(), vec![NodeKind::Corner, NodeKind::Straight, NodeKind::Straight, NodeKind::Corner]);
    }

    #[test]
    fn corner_preserved() {
        let p = GeometricPath::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
        let d = simplify_and_densify(&p, 10.0);
        assert_eq!(d.nodes, p.nodes);
        assert_eq!(d.node_kinds()[1], NodeKind::Corner);
    }

    #[test]
    fn reversal_is_not_collinear() {
        // b on the line but outside [a, c]
        assert!(!is_between(&[0.0], &[2.0], &[1.0]));
        let p = GeometricPath::new(vec![vec![0.0], vec![2.0], vec![1.0]]);
        assert_eq!(simplify_and_densify(&p, 10.0).len(), 3);
    }

    #[test]
    fn waypoint_velocity() {
        let lim = [JointLimits::xarm6(); 2];
        assert_eq!(estimate_waypoint_velocity(&[0.0, 0.0], &[0.0, 0.0], 0.1, &lim), vec![0.0, 0.0]);
        let v = estimate_waypoint_velocity(&[0.0, 0.0], &[0.1, -0.05], 0.1, &lim);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] + 0.5).abs() < 1e-12);
        let v = estimate_waypoint_velocity(&[0.0, 0.0], &[1.0, 0.2], 0.1, &lim);
        let ratio = v.iter().map(|x| x.abs() / std::f64::consts::PI).fold(0.0, f64::max);
        assert!((ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(matches!(GeometricPath::new(vec![]).validate(), Err(PathError::Empty)));
        let dup = GeometricPath::new(vec![vec![0.0], vec![0.0]]);
        assert!(matches!(dup.validate(), Err(PathError::RepeatedNode(1))));
        let ragged = GeometricPath::new(vec![vec![0.0], vec![0.0, 1.0]]);
        assert!(matches!(ragged.validate(), Err(PathError::DofMismatch { index: 1, .. })));
    }
}
