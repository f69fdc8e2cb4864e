//! Capsule-versus-obstacle distances and separating planes.

use nalgebra::{Point2, Vector2};
use serde::{Deserialize, Serialize};

use super::chain::{ChainModel, Segment};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    /// Axis-aligned box.
    Box { half_extents: Vector2<f64> },
    Sphere { radius: f64 },
}

/// Convex world obstacle translating at constant `velocity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obstacle {
    pub shape: Shape,
    pub center: Point2<f64>,
    #[serde(default = "Vector2::zeros")]
    pub velocity: Vector2<f64>,
}

impl Obstacle {
    pub fn sphere(center: Point2<f64>, radius: f64) -> Self {
        Self { shape: Shape::Sphere { radius }, center, velocity: Vector2::zeros() }
    }

    pub fn cuboid(center: Point2<f64>, half_extents: Vector2<f64>) -> Self {
        Self { shape: Shape::Box { half_extents }, center, velocity: Vector2::zeros() }
    }

    pub fn with_velocity(mut self, velocity: Vector2<f64>) -> Self {
        self.velocity = velocity;
        self
    }

    pub fn speed(&self) -> f64 {
        self.velocity.norm()
    }

    /// Half size along each axis of the bounding box.
    pub fn half_extents(&self) -> Vector2<f64> {
        match self.shape {
            Shape::Box { half_extents } => half_extents,
            Shape::Sphere { radius } => Vector2::new(radius, radius),
        }
    }

    /// Closest point of the (solid) obstacle to `p`.
    pub fn closest_point(&self, p: &Point2<f64>) -> Point2<f64> {
        match self.shape {
            Shape::Sphere { radius } => {
                let d = p - self.center;
                let n = d.norm();
                if n <= radius {
                    *p
                } else {
                    self.center + d * (radius / n)
                }
            }
            Shape::Box { half_extents } => {
                let lo = self.center - half_extents;
                let hi = self.center + half_extents;
                Point2::new(p.x.clamp(lo.x, hi.x), p.y.clamp(lo.y, hi.y))
            }
        }
    }
}

/// Nearest points between one link axis and one obstacle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestPair {
    /// Link-side point on the capsule surface.
    pub link_point: Point2<f64>,
    /// Obstacle-side point.
    pub obstacle_point: Point2<f64>,
    /// Capsule-to-obstacle clearance, clamped at zero.
    pub distance: f64,
    /// Plane through `obstacle_point` with unit normal toward the link;
    /// absent on contact.
    pub plane: Option<SeparatingPlane>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatingPlane {
    pub point: Point2<f64>,
    pub normal: Vector2<f64>,
}

impl SeparatingPlane {
    pub fn signed_distance(&self, p: &Point2<f64>) -> f64 {
        self.normal.dot(&(p - self.point))
    }

    /// Clearance of a capsule to the plane, clamped at zero.
    pub fn capsule_clearance(&self, axis: &Segment, radius: f64) -> f64 {
        (self.signed_distance(&axis.start).min(self.signed_distance(&axis.end)) - radius).max(0.0)
    }
}

/// Per-link minimal distances and the nearest-point matrix `[link][obstacle]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub distances: Vec<f64>,
    pub pairs: Vec<Vec<NearestPair>>,
    pub collision: bool,
}

impl DistanceReport {
    pub fn min_distance(&self) -> f64 {
        self.distances.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

fn segment_intersects_box(seg: &Segment, lo: &Point2<f64>, hi: &Point2<f64>) -> Option<Point2<f64>> {
    // Liang-Barsky clipping
    let d = seg.end - seg.start;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for axis in 0..2 {
        let p = seg.start[axis];
        if d[axis] == 0.0 {
            if p < lo[axis] || p > hi[axis] {
                return None;
            }
        } else {
            let mut a = (lo[axis] - p) / d[axis];
            let mut b = (hi[axis] - p) / d[axis];
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            t0 = t0.max(a);
            t1 = t1.min(b);
            if t0 > t1 {
                return None;
            }
        }
    }
    Some(seg.point_at(t0))
}

/// Closest pair `(axis point, obstacle point)` between a link axis and an
/// obstacle; coincident when they intersect.
pub fn axis_nearest(seg: &Segment, obstacle: &Obstacle) -> (Point2<f64>, Point2<f64>) {
    match obstacle.shape {
        Shape::Sphere { .. } => {
            let r = seg.closest_point(&obstacle.center);
            (r, obstacle.closest_point(&r))
        }
        Shape::Box { half_extents } => {
            let lo = obstacle.center - half_extents;
            let hi = obstacle.center + half_extents;
            if let Some(p) = segment_intersects_box(seg, &lo, &hi) {
                return (p, p);
            }
            // disjoint convex polygons: the closest pair involves a vertex
            let mut best = (f64::INFINITY, seg.start, seg.start);
            for p in [seg.start, seg.end] {
                let o = obstacle.closest_point(&p);
                let dist = (p - o).norm_squared();
                if dist < best.0 {
                    best = (dist, p, o);
                }
            }
            for corner in [lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)] {
                let r = seg.closest_point(&corner);
                let dist = (r - corner).norm_squared();
                if dist < best.0 {
                    best = (dist, r, corner);
                }
            }
            (best.1, best.2)
        }
    }
}

/// Capsule (axis `seg`, radius `rho`) against one obstacle.
pub fn capsule_nearest(seg: &Segment, rho: f64, obstacle: &Obstacle) -> NearestPair {
    let (axis_point, obstacle_point) = axis_nearest(seg, obstacle);
    let gap = obstacle_point - axis_point;
    let axis_dist = gap.norm();
    if axis_dist <= rho || axis_dist == 0.0 {
        return NearestPair { link_point: axis_point, obstacle_point, distance: 0.0, plane: None };
    }
    let toward_obstacle = gap / axis_dist;
    NearestPair {
        link_point: axis_point + toward_obstacle * rho,
        obstacle_point,
        distance: axis_dist - rho,
        plane: Some(SeparatingPlane { point: obstacle_point, normal: -toward_obstacle }),
    }
}

/// Per-link minimal distances to all obstacles at `q`. Empty scenes give
/// infinite clearance.
pub fn min_distances(model: &ChainModel, q: &[f64], obstacles: &[Obstacle]) -> DistanceReport {
    let segments = model.link_segments(q);
    let mut distances = Vec::with_capacity(segments.len());
    let mut pairs = Vec::with_capacity(segments.len());
    let mut collision = false;
    for (seg, rho) in segments.iter().zip(&model.link_radii) {
        let row: Vec<NearestPair> = obstacles.iter().map(|o| capsule_nearest(seg, *rho, o)).collect();
        let d = row.iter().map(|p| p.distance).fold(f64::INFINITY, f64::min);
        collision |= d <= 0.0;
        distances.push(d);
        pairs.push(row);
    }
    DistanceReport { distances, pairs, collision }
}

/// Clearance lower bounds at `q_new` from the planes stored in `report`.
/// Pairs that were in contact contribute zero.
pub fn distances_to_planes(model: &ChainModel, q_new: &[f64], report: &DistanceReport) -> Vec<f64> {
    let segments = model.link_segments(q_new);
    segments
        .iter()
        .zip(&model.link_radii)
        .zip(&report.pairs)
        .map(|((seg, rho), row)| {
            row.iter()
                .map(|p| p.plane.map_or(0.0, |pl| pl.capsule_clearance(seg, *rho)))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// True if any link touches or penetrates any obstacle at `q`.
pub fn in_collision(model: &ChainModel, q: &[f64], obstacles: &[Obstacle]) -> bool {
    if obstacles.is_empty() {
        return false;
    }
    let mut segments = Vec::with_capacity(model.dof());
    model.link_segments_into(q, &mut segments);
    segments.iter().zip(&model.link_radii).any(|(seg, rho)| {
        obstacles.iter().any(|o| {
            let (a, b) = axis_nearest(seg, o);
            (b - a).norm() <= *rho
        })
    })
}

/// Joint-space resolution of straight-line collision checks.
pub const LINE_RESOLUTION: f64 = 0.01;

/// Dense check of the straight joint-space segment `q_a -> q_b`: no sampled
/// configuration may be in collision, with at most [`LINE_RESOLUTION`] rad
/// per joint between samples.
pub fn line_collision_free(model: &ChainModel, q_a: &[f64], q_b: &[f64], obstacles: &[Obstacle]) -> bool {
    if obstacles.is_empty() {
        return true;
    }
    let max_delta = q_a.iter().zip(q_b).map(|(a, b)| (b - a).abs()).fold(0.0, f64::max);
    let steps = ((max_delta / LINE_RESOLUTION).ceil() as usize).max(1);
    let mut q = vec![0.0; q_a.len()];
    // endpoints first, then increasing index
    let order = [0, steps].into_iter().chain(1..steps);
    for k in order {
        let s = k as f64 / steps as f64;
        for ((qi, a), b) in q.iter_mut().zip(q_a).zip(q_b) {
            *qi = a + (b - a) * s;
        }
        if in_collision(model, &q, obstacles) {
            return false;
        }
    }
    true
}
