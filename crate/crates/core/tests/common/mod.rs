#![allow(dead_code)]

use cfs45::spline::{JointLimits, JointSpline, JointState};
use rand::Rng;

/// Sign-change roots of `f` on `(lo, hi]` from a uniform scan, refined by
/// bisection.
pub fn scan_roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let h = (hi - lo) / steps as f64;
    let mut x0 = lo + h * 1e-6;
    let mut f0 = f(x0);
    for k in 1..=steps {
        let x1 = lo + h * k as f64;
        let f1 = f(x1);
        if f1 == 0.0 {
            roots.push(x1);
        } else if f0 * f1 < 0.0 {
            let (mut a, mut b, mut fa) = (x0, x1, f0);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fm * fa <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// Max ratio `|derivative| / bound` over a uniform grid at `hz`, from
/// direct power-basis evaluation (independent of the library evaluator).
pub fn dense_ratio(spline: &JointSpline, limits: &JointLimits, hz: f64) -> f64 {
    let [a, b, c, d, e, f] = spline.coefficients();
    let t_f = spline.duration();
    let n = ((t_f * hz).ceil() as usize).max(1);
    let mut worst: f64 = 0.0;
    for k in 0..=n {
        let t = t_f * k as f64 / n as f64;
        let p = a * t.powi(5) + b * t.powi(4) + c * t.powi(3) + d * t * t + e * t + f;
        let v = 5.0 * a * t.powi(4) + 4.0 * b * t.powi(3) + 3.0 * c * t * t + 2.0 * d * t + e;
        let acc = 20.0 * a * t.powi(3) + 12.0 * b * t * t + 6.0 * c * t + 2.0 * d;
        let j = 60.0 * a * t * t + 24.0 * b * t + 6.0 * c;
        worst = worst
            .max(p.abs() / limits.pos_max)
            .max(v.abs() / limits.vel_max)
            .max(acc.abs() / limits.acc_max)
            .max(j.abs() / limits.jerk_max);
    }
    worst
}

/// Random state strictly inside the velocity/acceleration box.
pub fn random_state(rng: &mut impl Rng, limits: &JointLimits, pos: f64, rest: bool) -> JointState {
    if rest {
        return JointState::at_rest(pos);
    }
    JointState::new(pos, rng.gen_range(-0.8..0.8) * limits.vel_max, rng.gen_range(-0.8..0.8) * limits.acc_max)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Trapezoid rule integral of `|jerk|` at `hz` from direct evaluation.
pub fn jerk_l1_trapezoid(spline: &JointSpline, hz: f64) -> f64 {
    let [a, b, c, ..] = spline.coefficients();
    let t_f = spline.duration();
    let n = ((t_f * hz).ceil() as usize).max(1);
    let h = t_f / n as f64;
    let j = |t: f64| (60.0 * a * t * t + 24.0 * b * t + 6.0 * c).abs();
    (0..n).map(|k| 0.5 * h * (j(k as f64 * h) + j((k + 1) as f64 * h))).sum()
}
