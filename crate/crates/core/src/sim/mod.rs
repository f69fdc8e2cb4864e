//! Deterministic period-synchronous simulation of an online planner around
//! moving obstacles.

mod orrt;
mod run;
mod scenario;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use orrt::{orrt_path, orrt_step, select_target, GenerationTimer, HoldReason, PlannerState, StepOutcome};
pub use run::{run_simulation, run_static, CollisionType, SimRecord, StaticRun, GOAL_TOL, REST_SPEED};
pub use scenario::{step_environment, Archetype, Bounds, Mode, MotionModel, PlannerSettings, Scenario};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    Config(String),
    #[error("no collision-free path found within {0} extensions")]
    NoPath(usize),
    #[error(transparent)]
    Path(#[from] crate::path::PathError),
}

/// Independent random streams derived from one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RngStream {
    Scenario,
    Environment,
    Planner,
}

impl RngStream {
    pub fn rng(self, seed: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(self as u64);
        rng
    }
}

/// Seed of run `index` in a batch keyed by `base`.
pub fn run_seed(base: u64, index: u64) -> u64 {
    // splitmix64 of the pair
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
