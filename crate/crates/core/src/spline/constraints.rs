//! Kinematic-limit verification at candidate extremal times.
//!
//! Each derivative attains its extremum over `[0, T]` either at an endpoint
//! or where the next derivative vanishes, so only those instants are
//! evaluated. Roots of degree <= 3 are closed form; velocity roots of a
//! quintic (degree 4) are bracketed between consecutive acceleration roots,
//! where velocity is monotone, and refined by safeguarded Newton.

use arrayvec::ArrayVec;
use serde::{Deserialize, Serialize};

use super::poly::JointSpline;
use super::roots::real_roots_cubic;
use super::types::{Derivative, JointLimits};

/// Absolute slack on every bound.
pub const LIMIT_SLACK: f64 = 1e-9;

type Times = ArrayVec<f64, 6>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub satisfied: bool,
    /// `max |extremum| / limit` over all four derivative orders.
    pub worst_ratio: f64,
    pub worst_order: Derivative,
    pub worst_time: f64,
    pub violating_order: Option<Derivative>,
    pub violating_time: Option<f64>,
}

#[inline]
fn horner_asc(asc: &[f64; 6], deg: usize, t: f64) -> f64 {
    let mut acc = 0.0;
    for i in (0..=deg).rev() {
        acc = acc * t + asc[i];
    }
    acc
}

fn degree(asc: &[f64; 6]) -> usize {
    (0..6).rev().find(|&i| asc[i] != 0.0).unwrap_or(0)
}

/// Roots of `asc` strictly inside `(0, t_f)`. `deriv_roots` must hold the
/// interior roots of the polynomial's derivative; they are only used when
/// the degree exceeds 3.
fn interior_roots(asc: &[f64; 6], t_f: f64, deriv_roots: &[f64]) -> Times {
    let mut out = Times::new();
    let deg = degree(asc);
    if deg == 0 {
        return out;
    }
    if deg <= 3 {
        for r in real_roots_cubic(asc[3], asc[2], asc[1], asc[0]) {
            if r > 0.0 && r < t_f {
                out.push(r);
            }
        }
        return out;
    }
    let mut knots = Times::new();
    knots.push(0.0);
    for &r in deriv_roots {
        if knots.len() < knots.capacity() - 1 {
            knots.push(r);
        }
    }
    knots.push(t_f);
    let mut lo_val = horner_asc(asc, deg, knots[0]);
    for w in 1..knots.len() {
        let (lo, hi) = (knots[w - 1], knots[w]);
        let hi_val = horner_asc(asc, deg, hi);
        if hi_val == 0.0 && hi < t_f {
            out.push(hi);
        } else if lo_val * hi_val < 0.0 {
            out.push(refine_root(asc, deg, lo, hi, lo_val));
        }
        lo_val = hi_val;
    }
    out
}

fn refine_root(asc: &[f64; 6], deg: usize, mut lo: f64, mut hi: f64, lo_val: f64) -> f64 {
    let mut d = [0.0; 6];
    for p in 0..deg {
        d[p] = (p + 1) as f64 * asc[p + 1];
    }
    let lo_neg = lo_val < 0.0;
    let mut x = 0.5 * (lo + hi);
    let tol = 1e-14 * hi.max(1.0);
    for _ in 0..60 {
        let fx = horner_asc(asc, deg, x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == lo_neg {
            lo = x;
        } else {
            hi = x;
        }
        let dfx = horner_asc(&d, deg - 1, x);
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= tol || hi - lo <= tol {
            return next;
        }
        x = next;
    }
    x
}

/// Interior candidate times per derivative order, computed lazily from
/// jerk down to position so each level reuses the roots of the one above.
struct Extremals {
    asc: [[f64; 6]; 4],
    crit: [Times; 4],
}

impl Extremals {
    fn new(spline: &JointSpline) -> Self {
        let asc = [
            spline.derivative_ascending(0),
            spline.derivative_ascending(1),
            spline.derivative_ascending(2),
            spline.derivative_ascending(3),
        ];
        Self { asc, crit: Default::default() }
    }

    /// Fills `crit[order]` with the interior roots of derivative `order + 1`.
    fn compute(&mut self, order: usize, t_f: f64) {
        match order {
            3 => {
                // snap is linear: s0 + s1 t
                let (s0, s1) = (self.asc[3][1], 2.0 * self.asc[3][2]);
                if s1 != 0.0 {
                    let r = -s0 / s1;
                    if r > 0.0 && r < t_f {
                        self.crit[3].push(r);
                    }
                }
            }
            _ => {
                let deriv_roots = self.crit[order + 1].clone();
                self.crit[order] = interior_roots(&self.asc[order + 1], t_f, &deriv_roots);
            }
        }
    }

    /// `(max |value|, time)` for one order over endpoints and crit points.
    fn extreme(&self, order: usize, t_f: f64) -> (f64, f64) {
        let asc = &self.asc[order];
        let deg = degree(asc);
        let mut best = (horner_asc(asc, deg, 0.0).abs(), 0.0);
        let end = horner_asc(asc, deg, t_f).abs();
        if end > best.0 {
            best = (end, t_f);
        }
        for &t in &self.crit[order] {
            let v = horner_asc(asc, deg, t).abs();
            if v > best.0 {
                best = (v, t);
            }
        }
        best
    }
}

const ORDERS_FAST_FIRST: [Derivative; 4] = [
    Derivative::Jerk,
    Derivative::Acceleration,
    Derivative::Velocity,
    Derivative::Position,
];

/// Full report over all four orders.
pub fn check_constraints(spline: &JointSpline, limits: &JointLimits) -> ConstraintReport {
    let t_f = spline.duration();
    let mut ex = Extremals::new(spline);
    let mut worst = (f64::NEG_INFINITY, Derivative::Position, 0.0);
    let mut violation: Option<(f64, Derivative, f64)> = None;
    for order in ORDERS_FAST_FIRST {
        let k = order.order();
        if t_f > 0.0 {
            ex.compute(k, t_f);
        }
        let (value, time) = ex.extreme(k, t_f);
        let bound = limits.bound(order);
        let ratio = value / bound;
        if ratio > worst.0 {
            worst = (ratio, order, time);
        }
        if value > bound + LIMIT_SLACK && violation.map_or(true, |(r, _, _)| ratio > r) {
            violation = Some((ratio, order, time));
        }
    }
    ConstraintReport {
        satisfied: violation.is_none(),
        worst_ratio: worst.0,
        worst_order: worst.1,
        worst_time: worst.2,
        violating_order: violation.map(|v| v.1),
        violating_time: violation.map(|v| v.2),
    }
}

/// Same verdict as [`check_constraints`] with early exit on the first
/// violated order.
pub fn satisfies(spline: &JointSpline, limits: &JointLimits) -> bool {
    let t_f = spline.duration();
    let mut ex = Extremals::new(spline);
    for order in ORDERS_FAST_FIRST {
        let k = order.order();
        if t_f > 0.0 {
            ex.compute(k, t_f);
        }
        if ex.extreme(k, t_f).0 > limits.bound(order) + LIMIT_SLACK {
            return false;
        }
    }
    true
}

/// Exact `(min, max)` of one derivative over the spline's domain.
pub fn derivative_range(spline: &JointSpline, order: Derivative) -> (f64, f64) {
    let t_f = spline.duration();
    let k = order.order();
    let mut ex = Extremals::new(spline);
    if t_f > 0.0 {
        for level in (k..=3).rev() {
            ex.compute(level, t_f);
        }
    }
    let asc = &ex.asc[k];
    let deg = degree(asc);
    let mut lo = horner_asc(asc, deg, 0.0);
    let mut hi = lo;
    for t in ex.crit[k].iter().copied().chain([t_f]) {
        let v = horner_asc(asc, deg, t);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}
