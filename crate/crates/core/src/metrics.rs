//! Run-level metrics: adjusted success, jerk L1 norm, discrete Frechet
//! distance.

use crate::path::Trajectory;
use crate::spline::{roots::real_roots_quadratic, JointSpline, MultiSpline};

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `1 - |q_end - q_goal| / |q_start - q_goal|`, clamped to `[0, 1]`; 1 when
/// start and goal coincide.
pub fn adjusted_success(q_start: &[f64], q_end: &[f64], q_goal: &[f64]) -> f64 {
    let initial = distance(q_start, q_goal);
    if initial == 0.0 {
        return 1.0;
    }
    (1.0 - distance(q_end, q_goal) / initial).clamp(0.0, 1.0)
}

/// `integral |jerk|` of one joint, split at sign changes of the jerk.
pub fn joint_jerk_l1(spline: &JointSpline) -> f64 {
    joint_jerk_l1_between(spline, 0.0, spline.duration())
}

/// As [`joint_jerk_l1`] over the local window `[lo, hi]`, clipped to the
/// domain.
pub fn joint_jerk_l1_between(spline: &JointSpline, lo: f64, hi: f64) -> f64 {
    let (lo, hi) = (lo.max(0.0), hi.min(spline.duration()));
    if hi <= lo {
        return 0.0;
    }
    let [a, b, c, ..] = spline.coefficients();
    // jerk = 60 a t^2 + 24 b t + 6 c; its antiderivative is the acceleration
    let mut cuts: Vec<f64> = real_roots_quadratic(60.0 * a, 24.0 * b, 6.0 * c)
        .into_iter()
        .filter(|t| *t > lo && *t < hi)
        .collect();
    cuts.insert(0, lo);
    cuts.push(hi);
    cuts.windows(2).map(|w| (spline.eval(w[1], 2) - spline.eval(w[0], 2)).abs()).sum()
}

/// Sum over joints of [`joint_jerk_l1`].
pub fn spline_jerk_l1(spline: &MultiSpline) -> f64 {
    spline.joints().iter().map(joint_jerk_l1).sum()
}

/// Jerk L1 norm of a whole trajectory; additive over segments.
pub fn jerk_l1(trajectory: &Trajectory) -> f64 {
    trajectory.segments.iter().map(spline_jerk_l1).sum()
}

/// Jerk L1 norm of `trajectory` over the absolute window `[t0, t1]`.
pub fn jerk_l1_between(trajectory: &Trajectory, t0: f64, t1: f64) -> f64 {
    trajectory
        .segments
        .iter()
        .filter(|s| s.end_time() > t0 && s.start_time() < t1)
        .map(|s| {
            let (lo, hi) = (t0 - s.start_time(), t1 - s.start_time());
            s.joints().iter().map(|j| joint_jerk_l1_between(j, lo, hi)).sum::<f64>()
        })
        .sum()
}

/// Discrete Frechet distance by dynamic programming over the coupling
/// lattice. Either input empty gives infinity.
pub fn discrete_frechet(p: &[Vec<f64>], q: &[Vec<f64>]) -> f64 {
    if p.is_empty() || q.is_empty() {
        return f64::INFINITY;
    }
    let m = q.len();
    let mut prev = vec![0.0; m];
    let mut row = vec![0.0; m];
    for (i, pi) in p.iter().enumerate() {
        for (j, qj) in q.iter().enumerate() {
            let d = distance(pi, qj);
            row[j] = match (i, j) {
                (0, 0) => d,
                (0, _) => row[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(prev[j - 1]).min(row[j - 1]),
            }
            .max(d);
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[m - 1]
}

/// `base` with the projection of every point of `points` onto the
/// polyline through `base` inserted in order. Projections are searched
/// forward from the previous one so the insertion order stays monotone.
fn with_projections(base: &[Vec<f64>], points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    if base.len() < 2 {
        return base.to_vec();
    }
    // (segment index, parameter, point)
    let mut dense: Vec<(usize, f64, Vec<f64>)> = Vec::with_capacity(base.len() + points.len());
    for (i, node) in base.iter().enumerate() {
        dense.push((i.min(base.len() - 2), if i == base.len() - 1 { 1.0 } else { 0.0 }, node.clone()));
    }
    let mut seg_from = 0usize;
    for s in points {
        let mut best = (f64::INFINITY, seg_from, 0.0, Vec::new());
        for k in seg_from..base.len() - 1 {
            let (a, b) = (&base[k], &base[k + 1]);
            let len2: f64 = a.iter().zip(b).map(|(x, y)| (y - x) * (y - x)).sum();
            let t = if len2 == 0.0 {
                0.0
            } else {
                (a.iter().zip(b).zip(s).map(|((x, y), z)| (y - x) * (z - x)).sum::<f64>() / len2).clamp(0.0, 1.0)
            };
            let proj: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect();
            let d = distance(&proj, s);
            if d < best.0 {
                best = (d, k, t, proj);
            }
        }
        seg_from = best.1;
        dense.push((best.1, best.2, best.3));
    }
    dense.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
    dense.into_iter().map(|d| d.2).collect()
}

/// Frechet distance between the polyline through trajectory `samples` and
/// the polyline through `path`. Each sequence gets the projections of the
/// other's vertices inserted, so a vertex that falls between two samples
/// of the other curve is not charged for the sampling gap.
pub fn frechet_to_polyline(samples: &[Vec<f64>], path: &[Vec<f64>]) -> f64 {
    discrete_frechet(&with_projections(samples, path), &with_projections(path, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spline::SplineOrder;

    #[test]
    fn adjusted_success_cases() {
        let (s, g) = ([0.0, 0.0], [2.0, 0.0]);
        assert_eq!(adjusted_success(&s, &g, &g), 1.0);
        assert_eq!(adjusted_success(&s, &s, &g), 0.0);
        assert_eq!(adjusted_success(&s, &[1.0, 0.0], &g), 0.5);
        assert_eq!(adjusted_success(&g, &[5.0, 5.0], &g), 1.0);
        assert_eq!(adjusted_success(&s, &[-9.0, 0.0], &g), 0.0);
    }

    #[test]
    fn frechet_basics() {
        let a = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        assert_eq!(discrete_frechet(&a, &a), 0.0);
        let b = vec![vec![0.0, 0.25], vec![1.0, 0.25]];
        assert_eq!(discrete_frechet(&a, &b), 0.25);
    }

    #[test]
    fn constant_has_no_jerk() {
        let s = JointSpline::constant(1.0, SplineOrder::Quintic).with_duration(2.0);
        assert_eq!(joint_jerk_l1(&s), 0.0);
    }

    #[test]
    fn samples_on_path_have_zero_distance() {
        let path = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let samples = vec![vec![0.0, 0.0], vec![0.3, 0.0], vec![1.0, 0.0], vec![1.0, 0.6], vec![1.0, 1.0]];
        assert!(frechet_to_polyline(&samples, &path) < 1e-15);
        // cutting the corner is measured
        let cut = vec![vec![0.0, 0.0], vec![0.9, 0.1], vec![1.0, 1.0]];
        assert!(frechet_to_polyline(&cut, &path) > 0.1);
    }
}
