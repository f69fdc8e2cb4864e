use std::path::{Path, PathBuf};

use cfs45::path::GeometricPath;
use cfs45::sim::{Archetype, Mode, Scenario};
use cfs45::spline::JointLimits;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::commands::{bench, convert, generate, run, sweep};
use crate::config::{read_json, ConvertConfig, GenerateRequest, LimitsSpec, Overrides, SweepConfig, DEFAULT_RATE_HZ};
use crate::error::{CliError, Result};
use crate::export::trajectory_csv;

#[derive(Debug, Parser)]
#[command(name = "cfs45", version, about = "Jerk-limited spline trajectories certified in free configuration space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Regular,
    Safe,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Regular => Mode::Regular,
            ModeArg::Safe => Mode::Safe,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArchetypeArg {
    Scenario1,
    Scenario2,
}

impl From<ArchetypeArg> for Archetype {
    fn from(a: ArchetypeArg) -> Self {
        match a {
            ArchetypeArg::Scenario1 => Archetype::Scenario1,
            ArchetypeArg::Scenario2 => Archetype::Scenario2,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Zero every wall-clock measurement so output is byte-identical.
    #[arg(long)]
    pub fixed_clock: bool,
    /// Bisection precision on the cubic coefficient.
    #[arg(long)]
    pub delta_c: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one boundary-value problem and export the spline.
    Generate {
        request: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Convert a geometric path into a spline trajectory.
    Convert {
        path: PathBuf,
        /// Scene and conversion settings.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        period_ms: Option<f64>,
        /// Largest node gap after densification, rad.
        #[arg(long)]
        dmax: Option<f64>,
        /// Visit every node at the end of its segment.
        #[arg(long)]
        no_interpolation: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Simulate one scenario.
    Run {
        /// Scenario JSON; omit when using `--archetype`.
        scenario: Option<PathBuf>,
        #[arg(long, conflicts_with = "scenario")]
        archetype: Option<ArchetypeArg>,
        #[arg(long)]
        period_ms: Option<f64>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        seed: Option<u64>,
        /// Largest node gap of the static conversion, rad.
        #[arg(long)]
        dmax: Option<f64>,
        /// Offline path plus conversion instead of the online loop.
        #[arg(long = "static")]
        static_pipeline: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run a batch of scenarios over periods and seeds.
    Sweep {
        config: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        common: Common,
    },
    /// Time synchronized spline generation on random problems.
    Bench {
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        joints: usize,
        /// Limits JSON: one set or one per joint. xArm6 limits otherwise.
        #[arg(long)]
        limits: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        bins: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    write(path, text)
}

fn prepare(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))
}

fn parent(p: &Path) -> PathBuf {
    p.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf)
}

/// Runs one command; prints a one-line JSON summary on success.
pub fn execute(cli: Cli) -> Result<serde_json::Value> {
    match cli.command {
        Command::Generate { request, common } => {
            let req: GenerateRequest = read_json(&request)?;
            let g = generate::generate(&req, common.delta_c, common.fixed_clock)?;
            prepare(&common.out)?;
            write(&common.out.join("trajectory.csv"), trajectory_csv(&g.trajectory, g.sidecar.sample_rate_hz))?;
            write_json(&common.out.join("trajectory.json"), &g.sidecar)?;
            Ok(serde_json::json!({ "t_f": g.sidecar.t_f, "out": common.out }))
        }
        Command::Convert { path, config, period_ms, dmax, no_interpolation, common } => {
            let p: GeometricPath = read_json(&path)?;
            let cfg: ConvertConfig = config.as_deref().map(read_json).transpose()?.unwrap_or_default();
            let ov = convert::ConvertOverrides { period_ms, d_max: dmax, delta_c: common.delta_c, no_interpolation, fixed_clock: common.fixed_clock };
            let c = convert::convert(&p, &cfg, &ov)?;
            prepare(&common.out)?;
            let rate = cfg.sample_rate_hz.unwrap_or(DEFAULT_RATE_HZ);
            write(&common.out.join("trajectory.csv"), trajectory_csv(&c.trajectory, rate))?;
            write_json(&common.out.join("metrics.json"), &c.metrics)?;
            Ok(serde_json::to_value(&c.metrics).expect("metrics serialize"))
        }
        Command::Run { scenario, archetype, period_ms, mode, seed, dmax, static_pipeline, common } => {
            let ov = Overrides { period_ms, mode: mode.map(Mode::from), seed, delta_c: common.delta_c, d_max: dmax, fixed_clock: common.fixed_clock };
            let mut s: Scenario = match (scenario, archetype) {
                (Some(f), _) => read_json(&f)?,
                (None, Some(a)) => Archetype::from(a).generate(seed.unwrap_or(0), period_ms.map_or(0.01, |ms| ms * 1e-3), ov.mode.unwrap_or_default()),
                (None, None) => return Err(CliError::Config("give a scenario file or --archetype".into())),
            };
            ov.apply(&mut s)?;
            let out = if let Some(d) = dmax {
                let params = cfs45::path::ConversionParams { d_max: Some(d), delta_c: s.planner.delta_c, ..cfs45::path::ConversionParams::new(s.period) };
                let r = cfs45::sim::run_static(&s, Some(params))?;
                run::RunOutput { record: r.record, static_parts: Some((r.path, r.trajectory)) }
            } else {
                run::run(&s, static_pipeline)?
            };
            prepare(&common.out)?;
            write_json(&common.out.join("record.json"), &out.record)?;
            if let Some((path, traj)) = &out.static_parts {
                write_json(&common.out.join("path.json"), path)?;
                write(&common.out.join("trajectory.csv"), trajectory_csv(traj, DEFAULT_RATE_HZ))?;
            }
            run::check_certificate(&out.record)?;
            Ok(serde_json::to_value(&out.record).expect("record serializes"))
        }
        Command::Sweep { config, mode, common } => {
            let cfg: SweepConfig = read_json(&config)?;
            let ov = Overrides { mode: mode.map(Mode::from), delta_c: common.delta_c, fixed_clock: common.fixed_clock, ..Overrides::default() };
            let r = sweep::sweep(&cfg, &parent(&config), &ov)?;
            prepare(&common.out)?;
            write(&common.out.join("runs.csv"), sweep::runs_csv(&r.rows))?;
            write(&common.out.join("aggregate.csv"), sweep::aggregate_csv(&r.aggregates))?;
            let mut lines = String::new();
            for row in &r.rows {
                lines.push_str(&serde_json::to_string(row).expect("row serializes"));
                lines.push('\n');
            }
            write(&common.out.join("runs.jsonl"), lines)?;
            Ok(serde_json::json!({ "runs": r.rows.len(), "failures": r.rows.iter().filter(|x| x.error.is_some()).count() }))
        }
        Command::Bench { count, seed, joints, limits, bins, out } => {
            let spec: LimitsSpec = match limits {
                Some(p) => read_json(&p)?,
                None => LimitsSpec::Shared(JointLimits::xarm6()),
            };
            if joints == 0 {
                return Err(CliError::Config("joints must be at least 1".into()));
            }
            let limits = spec.expand(joints)?;
            let report = bench::bench(count, &limits, seed, bins)?;
            prepare(&out)?;
            write(&out.join("timings.txt"), bench::timings_text(&report))?;
            write_json(&out.join("histogram.json"), &report)?;
            Ok(serde_json::json!({ "count": report.count, "median_s": report.median_s, "accepted": report.accepted }))
        }
    }
}
