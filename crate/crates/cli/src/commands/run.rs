use cfs45::path::{GeometricPath, Trajectory};
use cfs45::sim::{run_simulation, run_static, CollisionType, Mode, Scenario, SimRecord};

use crate::error::{CliError, Result};

pub struct RunOutput {
    pub record: SimRecord,
    /// Path and trajectory of the static pipeline.
    pub static_parts: Option<(GeometricPath, Trajectory)>,
}

/// One run. A safe-mode run that touches an obstacle while moving breaks
/// the certificate and is reported as a certification failure.
pub fn run(scenario: &Scenario, static_pipeline: bool) -> Result<RunOutput> {
    let out = if static_pipeline {
        let r = run_static(scenario, None)?;
        RunOutput { record: r.record, static_parts: Some((r.path, r.trajectory)) }
    } else {
        RunOutput { record: run_simulation(scenario)?, static_parts: None }
    };
    Ok(out)
}

pub fn check_certificate(record: &SimRecord) -> Result<()> {
    if record.mode == Mode::Safe && record.collision == CollisionType::TypeI {
        return Err(CliError::Certification(format!(
            "moving contact at t = {:.9} with speed {:.3e}",
            record.collision_time.unwrap_or(f64::NAN),
            record.collision_speed.unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}
