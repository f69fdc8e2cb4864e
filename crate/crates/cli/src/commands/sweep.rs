use std::fmt::Write as _;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use cfs45::sim::SimRecord;
use serde::Serialize;

use crate::commands::run::run;
use crate::config::{Overrides, SweepConfig};
use crate::error::{CliError, Result};

/// Env var capping sweep worker threads.
pub const THREADS_ENV: &str = "CFS45_THREADS";

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub scenario: String,
    pub period: f64,
    pub seed: u64,
    /// Failed runs carry their error and no record.
    pub error: Option<String>,
    pub record: Option<SimRecord>,
}

/// Per-period means over successful runs.
#[derive(Debug, Clone, Serialize)]
pub struct Aggregate {
    pub period: f64,
    pub runs: usize,
    pub failures: usize,
    pub mean_adjusted_success: f64,
    pub classic_success_rate: f64,
    pub mean_planner_time: f64,
    pub mean_path_length: f64,
    pub type_i: usize,
    pub type_ii: usize,
}

pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<Aggregate>,
}

pub fn worker_count(jobs: usize) -> usize {
    let cap = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|n| *n > 0);
    let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
    cap.unwrap_or(avail).min(jobs).max(1)
}

struct Job {
    source: usize,
    period: f64,
    seed: u64,
}

/// Runs every (scenario, period, seed) combination. Per-run errors are
/// recorded and the sweep continues; rows come back in job order whatever
/// the thread count.
pub fn sweep(cfg: &SweepConfig, base: &Path, ov: &Overrides) -> Result<SweepResult> {
    if cfg.periods_ms.iter().any(|p| !(*p > 0.0)) {
        return Err(CliError::Config("periods_ms entries must be positive".into()));
    }
    let mode = ov.mode.or(cfg.mode);
    let mut jobs = Vec::new();
    for (source, _) in cfg.scenarios.iter().enumerate() {
        for &ms in &cfg.periods_ms {
            for &seed in &cfg.seeds {
                jobs.push(Job { source, period: ms * 1e-3, seed });
            }
        }
    }
    let run_job = |job: &Job| -> SweepRow {
        let src = &cfg.scenarios[job.source];
        let result = src.resolve(base, job.seed, job.period, mode).and_then(|mut s| {
            s.fixed_clock |= ov.fixed_clock;
            if let Some(dc) = ov.delta_c {
                s.planner.delta_c = Some(dc);
            }
            if let Some(t) = cfg.max_sim_time {
                s.max_sim_time = t;
            }
            run(&s, cfg.static_pipeline).map(|o| (s.name, o.record))
        });
        let (name, error, record) = match result {
            Ok((name, r)) => (if name.is_empty() { src.label() } else { name }, None, Some(r)),
            Err(e) => (src.label(), Some(e.to_string()), None),
        };
        SweepRow { scenario: name, period: job.period, seed: job.seed, error, record }
    };

    let workers = worker_count(jobs.len());
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<SweepRow>> = vec![None; jobs.len()];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(job) = jobs.get(i) else { break };
                        done.push((i, run_job(job)));
                    }
                    done
                })
            })
            .collect();
        for h in handles {
            for (i, row) in h.join().expect("sweep worker panicked") {
                slots[i] = Some(row);
            }
        }
    });
    let rows: Vec<SweepRow> = slots.into_iter().map(|r| r.expect("every job ran")).collect();
    let aggregates = cfg.periods_ms.iter().map(|ms| aggregate(ms * 1e-3, &rows)).collect();
    Ok(SweepResult { rows, aggregates })
}

fn aggregate(period: f64, rows: &[SweepRow]) -> Aggregate {
    let at: Vec<&SweepRow> = rows.iter().filter(|r| r.period == period).collect();
    let recs: Vec<&SimRecord> = at.iter().filter_map(|r| r.record.as_ref()).collect();
    let n = recs.len();
    let mean = |f: &dyn Fn(&SimRecord) -> f64| if n == 0 { 0.0 } else { recs.iter().map(|r| f(r)).sum::<f64>() / n as f64 };
    use cfs45::sim::CollisionType::{TypeI, TypeII};
    Aggregate {
        period,
        runs: at.len(),
        failures: at.len() - n,
        mean_adjusted_success: mean(&|r| r.adjusted_success),
        classic_success_rate: mean(&|r| f64::from(u8::from(r.classic_success))),
        mean_planner_time: mean(&|r| r.planner_time),
        mean_path_length: mean(&|r| r.path_length),
        type_i: recs.iter().filter(|r| r.collision == TypeI).count(),
        type_ii: recs.iter().filter(|r| r.collision == TypeII).count(),
    }
}

const RUN_COLUMNS: &str = "scenario,period,seed,mode,status,adjusted_success,classic_success,time_to_goal,sim_time,planner_time,path_length,jerk_l1,collision,iterations,holds,overruns,error";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:.9}"))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn runs_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(RUN_COLUMNS);
    out.push('\n');
    for r in rows {
        let name = csv_field(&r.scenario);
        match (&r.record, &r.error) {
            (Some(x), _) => {
                let mode = serde_json::to_value(x.mode).expect("mode serializes");
                let coll = serde_json::to_value(x.collision).expect("collision serializes");
                writeln!(
                    out,
                    "{name},{:.6},{},{},ok,{:.9},{},{},{:.9},{:.9},{:.9},{:.9},{},{},{},{},",
                    r.period,
                    r.seed,
                    mode.as_str().unwrap_or_default(),
                    x.adjusted_success,
                    x.classic_success,
                    opt(x.time_to_goal),
                    x.sim_time,
                    x.planner_time,
                    x.path_length,
                    x.jerk_l1,
                    coll.as_str().unwrap_or_default(),
                    x.iterations,
                    x.holds,
                    x.overruns
                )
            }
            (None, e) => writeln!(
                out,
                "{name},{:.6},{},,error,,,,,,,,,,,,{}",
                r.period,
                r.seed,
                csv_field(e.as_deref().unwrap_or_default())
            ),
        }
        .expect("write to string");
    }
    out
}

const AGG_COLUMNS: &str = "period,runs,failures,mean_adjusted_success,classic_success_rate,mean_planner_time,mean_path_length,type_i,type_ii";

pub fn aggregate_csv(aggs: &[Aggregate]) -> String {
    let mut out = String::from(AGG_COLUMNS);
    out.push('\n');
    for a in aggs {
        writeln!(
            out,
            "{:.6},{},{},{:.9},{:.9},{:.9},{:.9},{},{}",
            a.period, a.runs, a.failures, a.mean_adjusted_success, a.classic_success_rate, a.mean_planner_time, a.mean_path_length, a.type_i, a.type_ii
        )
        .expect("write to string");
    }
    out
}
