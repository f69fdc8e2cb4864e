use crate::kinematics::{distances_to_planes, ChainModel, DistanceReport};
use crate::spline::MultiSpline;

use super::bubble::Bubble;

/// Accepted spine endpoint on the spline.
#[derive(Debug, Clone, PartialEq)]
pub struct Spine {
    pub node: Vec<f64>,
    /// Absolute time at which the spline passes `node`.
    pub time: f64,
    /// Same instant in spline-local time.
    pub local_time: f64,
}

/// Spines from one root, all inside the root's bubble.
#[derive(Debug, Clone, PartialEq)]
pub struct Bur {
    pub root: Vec<f64>,
    pub root_time: f64,
    pub spines: Vec<Spine>,
    /// Last accepted node is the spline's final configuration.
    pub reached_end: bool,
}

impl Bur {
    pub fn is_empty(&self) -> bool {
        self.spines.is_empty()
    }

    pub fn last(&self) -> Option<&Spine> {
        self.spines.last()
    }

    pub fn last_node(&self) -> &[f64] {
        self.spines.last().map_or(&self.root, |s| &s.node)
    }

    pub fn last_time(&self) -> f64 {
        self.spines.last().map_or(self.root_time, |s| s.time)
    }
}

/// Bur over the tail of `spline` starting at local time `from`. Nodes are
/// taken every `dt` after the root plus the final configuration, and
/// accepted in order until the first one outside `bubble`.
pub fn compute_bur(spline: &MultiSpline, from: f64, dt: f64, bubble: &Bubble, radii: &[f64], v_obs: f64) -> Bur {
    let mut bur = Bur { root: bubble.root.clone(), root_time: spline.start_time() + from, spines: Vec::new(), reached_end: false };
    let duration = spline.duration();
    if !bubble.is_valid() || from >= duration || !(dt > 0.0) {
        return bur;
    }
    let mut node = Vec::with_capacity(spline.dof());
    let mut k = 1usize;
    loop {
        let local = from + k as f64 * dt;
        let last = local >= duration;
        let local = if last { duration } else { local };
        spline.position_into(local, &mut node);
        let time = spline.start_time() + local;
        if !bubble.contains(radii, &node, time, v_obs) {
            return bur;
        }
        bur.spines.push(Spine { node: node.clone(), time, local_time: local });
        if last {
            bur.reached_end = true;
            return bur;
        }
        k += 1;
    }
}

/// Inputs shared by every certification against one distance measurement.
#[derive(Debug, Clone, Copy)]
pub struct CertContext<'a> {
    pub model: &'a ChainModel,
    /// Nearest points and separating planes from the last measurement.
    pub report: &'a DistanceReport,
    /// Absolute time of that measurement.
    pub measured_at: f64,
    /// Worst-case obstacle speed; zero for static scenes.
    pub v_obs: f64,
    /// Spline discretization step.
    pub dt: f64,
}

impl CertContext<'_> {
    /// Per-link clearance bounds at `q` and absolute time `t` from the stored
    /// planes, shrunk by the worst-case obstacle travel since measurement.
    pub fn clearances(&self, q: &[f64], t: f64) -> Vec<f64> {
        let shrink = self.v_obs * (t - self.measured_at).max(0.0);
        distances_to_planes(self.model, q, self.report).into_iter().map(|d| (d - shrink).max(0.0)).collect()
    }
}

/// Chain of burs along a spline.
#[derive(Debug, Clone, PartialEq)]
pub struct GBur {
    pub burs: Vec<Bur>,
    pub root: Vec<f64>,
    pub terminal: Vec<f64>,
    /// Absolute time of `terminal` on the spline.
    pub terminal_time: f64,
    /// Spline-local time of `terminal`.
    pub terminal_local: f64,
    /// `terminal` is the spline's final configuration.
    pub reached: bool,
}

impl GBur {
    pub fn is_empty(&self) -> bool {
        self.burs.is_empty()
    }
}

/// Generalized bur: each bur's last node roots the next bubble, whose
/// clearances come from the stored separating planes.
pub fn compute_gbur(ctx: &CertContext, spline: &MultiSpline) -> GBur {
    let radii = ctx.model.static_radii();
    let root = spline.position_at(0.0);
    let mut gbur = GBur {
        burs: Vec::new(),
        root: root.clone(),
        terminal: root.clone(),
        terminal_time: spline.start_time(),
        terminal_local: 0.0,
        reached: spline.duration() <= 0.0,
    };
    let mut local = 0.0;
    let mut q_k = root;
    while !gbur.reached {
        let t_k = spline.start_time() + local;
        let d = ctx.clearances(&q_k, t_k);
        let bubble = Bubble::new(q_k, d, t_k);
        let bur = compute_bur(spline, local, ctx.dt, &bubble, &radii, ctx.v_obs);
        let Some(last) = bur.last() else { break };
        local = last.local_time;
        q_k = last.node.clone();
        gbur.terminal = last.node.clone();
        gbur.terminal_time = last.time;
        gbur.terminal_local = local;
        gbur.reached = bur.reached_end;
        gbur.burs.push(bur);
    }
    gbur
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Certification {
    Full,
    /// Certified up to absolute time `t_cert`.
    Prefix { t_cert: f64 },
    Rejected,
}

pub fn certify_spline(ctx: &CertContext, spline: &MultiSpline) -> Certification {
    let gbur = compute_gbur(ctx, spline);
    if gbur.reached {
        Certification::Full
    } else if gbur.is_empty() {
        Certification::Rejected
    } else {
        Certification::Prefix { t_cert: gbur.terminal_time }
    }
}
