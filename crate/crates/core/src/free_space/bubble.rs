use serde::{Deserialize, Serialize};

/// Weighted-L1 region around `root` certified by per-link clearances
/// `distances` measured (or underestimated) at `birth_time`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bubble {
    pub root: Vec<f64>,
    pub distances: Vec<f64>,
    pub birth_time: f64,
}

impl Bubble {
    pub fn new(root: Vec<f64>, distances: Vec<f64>, birth_time: f64) -> Self {
        Self { root, distances, birth_time }
    }

    /// True if every link clearance is strictly positive.
    pub fn is_valid(&self) -> bool {
        self.distances.iter().all(|d| *d > 0.0)
    }

    /// Membership of `y` at `query_time`. Link `l` must satisfy
    /// `sum_{i<=l} r_i |y_i - q0_i| <= d_l - v_obs (query_time - birth_time)`.
    pub fn contains(&self, radii: &[f64], y: &[f64], query_time: f64, v_obs: f64) -> bool {
        let shrink = v_obs * (query_time - self.birth_time).max(0.0);
        let mut partial = 0.0;
        for (((r, yi), q0), d) in radii.iter().zip(y).zip(&self.root).zip(&self.distances) {
            partial += r * (yi - q0).abs();
            if partial > d - shrink {
                return false;
            }
        }
        true
    }
}

pub fn bubble_contains(bubble: &Bubble, radii: &[f64], y: &[f64], query_time: f64, v_obs: f64) -> bool {
    bubble.contains(radii, y, query_time, v_obs)
}

/// Largest `t` in `[0, 1]` with `q0 + t (qf - q0)` inside the bubble of
/// radius `d_c`.
pub fn spine_max_parameter(q0: &[f64], qf: &[f64], d_c: f64, radii: &[f64]) -> f64 {
    let reach: f64 = radii.iter().zip(q0.iter().zip(qf)).map(|(r, (a, b))| r * (b - a).abs()).sum();
    if reach == 0.0 {
        return 1.0;
    }
    (d_c / reach).clamp(0.0, 1.0)
}
