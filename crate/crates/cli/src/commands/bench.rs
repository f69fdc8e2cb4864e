use std::fmt::Write as _;
use std::time::Instant;

use cfs45::spline::{synchronize, JointLimits, JointProblem, JointState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, Result};

/// Random boundary-value problem: start and end states inside the box,
/// velocities and accelerations up to half their bounds.
pub fn random_problem(rng: &mut ChaCha8Rng, limits: &[JointLimits]) -> Vec<JointProblem> {
    let state = |rng: &mut ChaCha8Rng, l: &JointLimits| {
        let p = rng.gen_range(-0.5..0.5) * l.pos_max;
        let v = rng.gen_range(-0.5..0.5) * l.vel_max;
        let a = rng.gen_range(-0.5..0.5) * l.acc_max;
        JointState::new(p, v, a)
    };
    limits
        .iter()
        .map(|l| {
            let init = state(rng, l);
            let fin = state(rng, l);
            JointProblem::to_state(init, fin, *l)
        })
        .collect()
}

/// Problem set of a bench run; the same seed gives the same set.
pub fn problem_set(count: usize, limits: &[JointLimits], seed: u64) -> Vec<Vec<JointProblem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_problem(&mut rng, limits)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub count: usize,
    pub joints: usize,
    pub seed: u64,
    /// Problems that produced a synchronized spline.
    pub accepted: usize,
    pub median_s: f64,
    pub mean_s: f64,
    pub p05_s: f64,
    pub p95_s: f64,
    pub min_s: f64,
    pub max_s: f64,
    /// Log-spaced bins between `min_s` and `max_s`.
    pub histogram: Vec<Bin>,
    #[serde(skip)]
    pub timings: Vec<f64>,
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    sorted[((sorted.len() - 1) as f64 * p).round() as usize]
}

fn histogram(sorted: &[f64], bins: usize) -> Vec<Bin> {
    let (lo, hi) = (sorted[0].max(1e-12), sorted[sorted.len() - 1].max(1e-12));
    if hi <= lo || bins == 1 {
        return vec![Bin { lo, hi, count: sorted.len() }];
    }
    let (l0, l1) = (lo.log10(), hi.log10());
    let width = (l1 - l0) / bins as f64;
    let mut out: Vec<Bin> = (0..bins)
        .map(|k| Bin { lo: 10f64.powf(l0 + k as f64 * width), hi: 10f64.powf(l0 + (k + 1) as f64 * width), count: 0 })
        .collect();
    for t in sorted {
        let k = (((t.max(1e-12).log10() - l0) / width) as usize).min(bins - 1);
        out[k].count += 1;
    }
    out
}

/// Times `synchronize` on `count` random problems, one call at a time.
pub fn bench(count: usize, limits: &[JointLimits], seed: u64, bins: usize) -> Result<BenchReport> {
    if count == 0 {
        return Err(CliError::Config("count must be at least 1".into()));
    }
    if bins == 0 {
        return Err(CliError::Config("bins must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut timings = Vec::with_capacity(count);
    let mut accepted = 0;
    for _ in 0..count {
        let problem = random_problem(&mut rng, limits);
        let start = Instant::now();
        let out = synchronize(std::hint::black_box(&problem), None, 0.0);
        timings.push(start.elapsed().as_secs_f64());
        accepted += usize::from(out.is_some());
    }
    let mut sorted = timings.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(BenchReport {
        count,
        joints: limits.len(),
        seed,
        accepted,
        median_s: quantile(&sorted, 0.5),
        mean_s: sorted.iter().sum::<f64>() / count as f64,
        p05_s: quantile(&sorted, 0.05),
        p95_s: quantile(&sorted, 0.95),
        min_s: sorted[0],
        max_s: sorted[count - 1],
        histogram: histogram(&sorted, bins),
        timings,
    })
}

pub fn timings_text(report: &BenchReport) -> String {
    let mut out = String::with_capacity(report.timings.len() * 14);
    for t in &report.timings {
        writeln!(out, "{t:.9e}").expect("write to string");
    }
    out
}
