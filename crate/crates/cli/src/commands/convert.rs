use std::time::Instant;

use cfs45::free_space::StaticSceneCertifier;
use cfs45::kinematics::in_collision;
use cfs45::metrics::{frechet_to_polyline, jerk_l1};
use cfs45::path::{path_to_trajectory, simplify_and_densify, ConversionParams, GeometricPath, Trajectory};
use cfs45::spline::{check_constraints, MultiSpline};
use serde::Serialize;

use crate::config::{ConvertConfig, DEFAULT_RATE_HZ};
use crate::error::{CliError, Result};
use crate::export::export_times;

/// Summary written next to the converted trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct ConvertMetrics {
    pub input_nodes: usize,
    /// Nodes after collinear removal and densification to `d_max`.
    pub densified_nodes: usize,
    pub segments: usize,
    /// Interior instants at which the robot is at rest.
    pub interior_stops: usize,
    pub duration: f64,
    /// Largest position, velocity or acceleration jump at a junction.
    pub max_junction_jump: f64,
    /// Discrete Frechet distance from the exported samples to the input.
    pub frechet_to_input: f64,
    pub jerk_l1: f64,
    /// Largest `|derivative| / bound` over every segment.
    pub max_limit_ratio: f64,
    pub interpolate: bool,
    pub d_max: f64,
    pub conversion_time_s: f64,
}

pub struct Converted {
    pub trajectory: Trajectory,
    pub metrics: ConvertMetrics,
}

/// Options layered over the config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConvertOverrides {
    pub period_ms: Option<f64>,
    pub d_max: Option<f64>,
    pub delta_c: Option<f64>,
    pub no_interpolation: bool,
    pub fixed_clock: bool,
}

fn interior_stops(traj: &Trajectory) -> usize {
    traj.segments
        .iter()
        .take(traj.segments.len().saturating_sub(1))
        .filter(|s| s.final_state().velocity.iter().all(|v| v.abs() <= 1e-9))
        .count()
}

fn limit_ratio(s: &MultiSpline, limits: &[cfs45::spline::JointLimits]) -> f64 {
    s.joints().iter().zip(limits).map(|(j, l)| check_constraints(j, l).worst_ratio).fold(0.0, f64::max)
}

pub fn convert(path: &GeometricPath, cfg: &ConvertConfig, ov: &ConvertOverrides) -> Result<Converted> {
    path.validate()?;
    let dof = path.dof();
    let limits = cfg.limits.expand(dof)?;
    let mut params = ConversionParams::new(ov.period_ms.map_or(cfg.period, |ms| ms * 1e-3));
    params.d_max = ov.d_max.or(cfg.d_max);
    params.threshold = cfg.threshold;
    params.delta_c = ov.delta_c.or(cfg.delta_c);
    params.interpolate = cfg.interpolate && !ov.no_interpolation;
    let rate = cfg.sample_rate_hz.unwrap_or(DEFAULT_RATE_HZ);
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(CliError::Config("sample_rate_hz must be positive".into()));
    }
    if let Some(m) = &cfg.model {
        m.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if m.dof() != dof {
            return Err(CliError::Config(format!("model has {} joints, path has {dof}", m.dof())));
        }
    } else if !cfg.obstacles.is_empty() {
        return Err(CliError::Config("obstacles given without a model".into()));
    }

    let started = Instant::now();
    let trajectory = match &cfg.model {
        Some(model) => {
            path.validate_in_scene(model, &cfg.obstacles)?;
            let dt = cfg.cert_dt.unwrap_or(params.period / 10.0);
            let cert = StaticSceneCertifier { model, obstacles: &cfg.obstacles, dt };
            path_to_trajectory(path, &limits, &params, &cert)?
        }
        // no geometry: every spline is free
        None => path_to_trajectory(path, &limits, &params, &|_: &MultiSpline| true)?,
    };
    let elapsed = if ov.fixed_clock { 0.0 } else { started.elapsed().as_secs_f64() };

    let times = export_times(&trajectory, rate);
    let samples: Vec<Vec<f64>> = times.iter().map(|t| trajectory.state_at(*t).position).collect();
    if let Some(model) = &cfg.model {
        if let Some(t) = times.iter().zip(&samples).find(|(_, q)| in_collision(model, q, &cfg.obstacles)).map(|(t, _)| *t) {
            return Err(CliError::Certification(format!("trajectory in collision at t = {t:.9}")));
        }
    }
    let metrics = ConvertMetrics {
        input_nodes: path.len(),
        densified_nodes: simplify_and_densify(path, params.d_max(&limits)).len(),
        segments: trajectory.segments.len(),
        interior_stops: interior_stops(&trajectory),
        duration: trajectory.duration(),
        max_junction_jump: trajectory.max_junction_jump(),
        frechet_to_input: frechet_to_polyline(&samples, &path.nodes),
        jerk_l1: jerk_l1(&trajectory),
        max_limit_ratio: trajectory.segments.iter().map(|s| limit_ratio(s, &limits)).fold(0.0, f64::max),
        interpolate: params.interpolate,
        d_max: params.d_max(&limits),
        conversion_time_s: elapsed,
    };
    Ok(Converted { trajectory, metrics })
}
