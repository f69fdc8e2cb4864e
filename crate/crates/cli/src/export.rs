//! Trajectory CSV: `t,q1..qn,v1..vn,a1..an,j1..jn`, nine decimals.

use std::fmt::Write as _;

use cfs45::path::Trajectory;

use crate::error::{CliError, Result};

/// Fixed precision of every exported value.
pub const DECIMALS: usize = 9;

fn snap(t: f64) -> f64 {
    (t * 1e9).round() / 1e9
}

pub fn header(dof: usize) -> String {
    let mut cols = vec!["t".to_string()];
    for p in ["q", "v", "a", "j"] {
        cols.extend((1..=dof).map(|i| format!("{p}{i}")));
    }
    cols.join(",")
}

/// Export timestamps: the `1 / rate` grid, every junction and the end,
/// rounded to the exported precision. The end is rounded up so the last
/// row is the final state itself.
pub fn export_times(traj: &Trajectory, rate_hz: f64) -> Vec<f64> {
    let mut times: Vec<f64> = traj.sample_times(1.0 / rate_hz).into_iter().map(snap).collect();
    if let Some(last) = times.last_mut() {
        *last = (traj.end_time() * 1e9).ceil() / 1e9;
    }
    times.dedup();
    times
}

/// State at an exported timestamp, with the jerk taken from the segment
/// the instant belongs to.
pub fn row(traj: &Trajectory, t: f64) -> Vec<f64> {
    let t_eval = t.min(traj.end_time());
    let s = traj.state_at(t_eval);
    let mut out = Vec::with_capacity(1 + 4 * s.dof());
    out.push(t);
    out.extend(&s.position);
    out.extend(&s.velocity);
    out.extend(&s.acceleration);
    out.extend(traj.jerk_at(t_eval));
    out
}

pub fn trajectory_csv(traj: &Trajectory, rate_hz: f64) -> String {
    let dof = traj.segments.first().map_or(0, |s| s.dof());
    let mut out = header(dof);
    out.push('\n');
    for t in export_times(traj, rate_hz) {
        let r = row(traj, t);
        for (i, v) in r.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            // avoid "-0.000000000"
            let v = if v.abs() < 0.5e-9 { 0.0 } else { *v };
            write!(out, "{v:.DECIMALS$}").expect("write to string");
        }
        out.push('\n');
    }
    out
}

/// Parsed CSV: column names and numeric rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| CliError::Config("empty CSV".into()))?;
    let cols: Vec<String> = header.split(',').map(str::to_string).collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',')
                .map(|v| v.parse::<f64>().map_err(|e| CliError::Config(format!("bad CSV value {v:?}: {e}"))))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((cols, rows))
}
