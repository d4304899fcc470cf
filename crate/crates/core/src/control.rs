//! Gradient control inputs and the projected Euler update.
//!
//! Every control channel is `K · ∂H/∂ξ` for one state coordinate `ξ`. The
//! derivative splits into a boundary integral over the agent's own guaranteed
//! region and, for `z`, `h` and `δ`, an interior term `∂f_i/∂ξ · ∫_{W_i} φ`.
//!
//! Only the agent's own boundary moves with its state, so the boundary
//! integral runs over the exact ellipse `γ_i(t)`. Each point is weighted by
//! the jump of `max_j f_j` across it:
//!
//! | classification        | weight        |
//! |-----------------------|---------------|
//! | outside `Ω`           | 0             |
//! | free arc              | `f_i`         |
//! | inside neighbour `j`  | `f_i − f_j`   |
//! | inside a better agent | 0             |
//!
//! The weight is piecewise constant in `t`. Its breakpoints are where `γ_i`
//! crosses an edge of `Ω` (closed form) or another guaranteed region
//! (bracketed roots). Each constant piece is integrated with Gauss–Legendre
//! panels no longer than `2π/M`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{ConvexPolygon, DensityField, Ellipse, Location, Point, Shape, Vec2};
use crate::partition::Partition;
use crate::sensing::{AgentLimits, AgentState, Footprint};

/// Default number of boundary panels.
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 360;
/// Margin keeping `|h|` strictly below `h_max`.
pub const TILT_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Gains {
    pub k_q: f64,
    pub k_z: f64,
    pub k_theta: f64,
    pub k_h: f64,
    pub k_delta: f64,
}

impl Default for Gains {
    fn default() -> Self {
        Self {
            k_q: 1.0,
            k_z: 1.0,
            k_theta: 1.0,
            k_h: 1.0,
            k_delta: 1.0,
        }
    }
}

impl Gains {
    pub fn validate(&self) -> Result<()> {
        for (name, k) in [
            ("gains.k_q", self.k_q),
            ("gains.k_z", self.k_z),
            ("gains.k_theta", self.k_theta),
            ("gains.k_h", self.k_h),
            ("gains.k_delta", self.k_delta),
        ] {
            if !(k.is_finite() && k > 0.0) {
                return Err(Error::config(name, format!("gain must be positive, got {k}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ControlInput {
    pub u_q: Vec2,
    pub u_z: f64,
    pub u_theta: f64,
    pub u_h: f64,
    pub u_delta: f64,
}

impl ControlInput {
    pub const ZERO: Self = Self {
        u_q: Point::new(0.0, 0.0),
        u_z: 0.0,
        u_theta: 0.0,
        u_h: 0.0,
        u_delta: 0.0,
    };

    pub fn norm(&self) -> f64 {
        (self.u_q.norm_squared() + self.u_z.powi(2) + self.u_theta.powi(2) + self.u_h.powi(2) + self.u_delta.powi(2))
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.u_q.is_finite()
            && [self.u_z, self.u_theta, self.u_h, self.u_delta]
                .iter()
                .all(|v| v.is_finite())
    }

    /// Zeroes the pan, tilt and zoom channels.
    pub fn without_ptz(self) -> Self {
        Self {
            u_theta: 0.0,
            u_h: 0.0,
            u_delta: 0.0,
            ..self
        }
    }

    /// Divides each channel by its gain.
    pub fn unscaled(&self, g: &Gains) -> Self {
        Self {
            u_q: self.u_q * (1.0 / g.k_q),
            u_z: self.u_z / g.k_z,
            u_theta: self.u_theta / g.k_theta,
            u_h: self.u_h / g.k_h,
            u_delta: self.u_delta / g.k_delta,
        }
    }

    /// Drops components that would push a coordinate already at a bound
    /// further out, as the projection in [`project_state`] would.
    pub fn projected(&self, s: &AgentState, lims: &AgentLimits, omega: &ConvexPolygon) -> Self {
        let at = |x: f64, bound: f64| (x - bound).abs() <= 1e-12 * bound.abs().max(1.0);
        let mut u = *self;
        if (at(s.z, lims.z_max) && u.u_z > 0.0) || (at(s.z, lims.z_min) && u.u_z < 0.0) {
            u.u_z = 0.0;
        }
        if (at(s.delta, lims.delta_max) && u.u_delta > 0.0) || (at(s.delta, lims.delta_min) && u.u_delta < 0.0) {
            u.u_delta = 0.0;
        }
        let h_lim = lims.h_max - TILT_MARGIN;
        if (s.h >= h_lim && u.u_h > 0.0) || (s.h <= -h_lim && u.u_h < 0.0) {
            u.u_h = 0.0;
        }
        // Remove the outward normal component on every active face of Ω.
        for (a, b) in omega.edges() {
            let d = b - a;
            let Some(out) = Vec2::new(d.y, -d.x).normalized() else { continue };
            if (s.q - a).dot(out).abs() <= 1e-9 {
                let push = u.u_q.dot(out);
                if push > 0.0 {
                    u.u_q -= out * push;
                }
            }
        }
        u
    }
}

/// How a point of an agent's guaranteed-region boundary contributes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    OutsideOmega,
    /// Borders the neutral region.
    FreeArc,
    /// Inside neighbour `j`, the best of those covering the point, which does
    /// not strictly dominate the agent.
    DominatedByNeighbor { j: usize, f_j: f64 },
    /// Inside a region of strictly better quality.
    Suppressed,
}

impl Classification {
    /// Jump of the integrand across the boundary for agent `i`.
    fn weight(&self, i: usize, p: &Partition) -> f64 {
        let f_i = p.qualities[i].f;
        match *self {
            Classification::OutsideOmega | Classification::Suppressed => 0.0,
            Classification::FreeArc => f_i,
            Classification::DominatedByNeighbor { j, f_j } => {
                if p.classes.equal(i, j) {
                    0.0
                } else {
                    f_i - f_j
                }
            }
        }
    }
}

/// One quadrature node on `∂C_i^gs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundarySample {
    pub t: f64,
    pub point: Point,
    pub normal: Vec2,
    pub classification: Classification,
    /// `‖dγ/dt‖ · Δt`, the arc length this node stands for.
    pub arc_weight: f64,
}

/// Classifies a point on agent `i`'s boundary against `Ω` and the other
/// guaranteed regions of the partition.
pub fn classify_point(i: usize, x: Point, p: &Partition, omega: &ConvexPolygon) -> Classification {
    if omega.locate(x, 1e-12) == Location::Outside {
        return Classification::OutsideOmega;
    }
    let mut best: Option<(usize, f64)> = None;
    for (j, g) in p.guaranteed.iter().enumerate() {
        let Some(e) = g else { continue };
        if j == i || e.quadratic_form(x) > 1.0 {
            continue;
        }
        if p.classes.dominates(j, i) {
            return Classification::Suppressed;
        }
        let f_j = p.qualities[j].f;
        if best.is_none_or(|(_, f)| f_j > f) {
            best = Some((j, f_j));
        }
    }
    match best {
        None => Classification::FreeArc,
        Some((j, f_j)) => Classification::DominatedByNeighbor { j, f_j },
    }
}

/// Classification of `γ_i(t)`; `None` when agent `i` has no guaranteed region.
pub fn classify_boundary(i: usize, t: f64, p: &Partition, omega: &ConvexPolygon) -> Option<Classification> {
    p.guaranteed[i].map(|e| classify_point(i, e.point_at(t), p, omega))
}

// 3-point Gauss–Legendre on [-1, 1].
const GAUSS: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

/// Parameters where `γ(t)` crosses the line through an edge of `Ω`.
fn omega_crossings(e: &Ellipse, omega: &ConvexPolygon, out: &mut Vec<f64>) {
    let (s, c) = e.orientation.sin_cos();
    let ax = Vec2::new(c, s) * e.semi_major;
    let bx = Vec2::new(-s, c) * e.semi_minor;
    for (a, b) in omega.edges() {
        let d = b - a;
        let Some(n) = Vec2::new(d.y, -d.x).normalized() else { continue };
        // n·γ(t) − n·a = k + α cos t + β sin t
        let k = n.dot(e.center - a);
        let (alpha, beta) = (n.dot(ax), n.dot(bx));
        let r = alpha.hypot(beta);
        if r <= k.abs() {
            continue;
        }
        let phase = beta.atan2(alpha);
        let spread = (-k / r).acos();
        out.push(phase + spread);
        out.push(phase - spread);
    }
}

/// Parameters where `γ(t)` crosses the boundary of `other`, located by sign
/// changes of `Q_other(γ(t)) − 1` on a uniform grid followed by bisection.
fn ellipse_crossings(e: &Ellipse, other: &Ellipse, grid: usize, out: &mut Vec<f64>) {
    let g = |t: f64| other.quadratic_form(e.point_at(t)) - 1.0;
    let mut t0 = 0.0;
    let mut g0 = g(t0);
    for k in 1..=grid {
        let t1 = TAU * k as f64 / grid as f64;
        let g1 = g(t1);
        if (g0 <= 0.0) != (g1 <= 0.0) {
            let (mut lo, mut hi, glo) = (t0, t1, g0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if (g(mid) <= 0.0) == (glo <= 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        t0 = t1;
        g0 = g1;
    }
}

/// Quadrature nodes on agent `i`'s guaranteed-region boundary; empty when the
/// region is empty.
pub fn boundary_samples(i: usize, p: &Partition, omega: &ConvexPolygon, m: usize) -> Vec<BoundarySample> {
    let Some(e) = p.guaranteed[i] else {
        return Vec::new();
    };
    let mut breaks = vec![0.0, TAU];
    omega_crossings(&e, omega, &mut breaks);
    for (j, g) in p.guaranteed.iter().enumerate() {
        if j == i || !p.neighbors[i].contains(&j) {
            continue;
        }
        if let Some(o) = g {
            ellipse_crossings(&e, o, 2 * m, &mut breaks);
        }
    }
    for t in &mut breaks[2..] {
        *t = t.rem_euclid(TAU);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

    let max_panel = TAU / m as f64;
    let mut out = Vec::with_capacity(3 * (m + breaks.len()));
    for w in breaks.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 - t0 <= 0.0 {
            continue;
        }
        let class = classify_point(i, e.point_at(0.5 * (t0 + t1)), p, omega);
        let panels = ((t1 - t0) / max_panel).ceil().max(1.0) as usize;
        let h = (t1 - t0) / panels as f64;
        for k in 0..panels {
            let mid = t0 + (k as f64 + 0.5) * h;
            for (x, wq) in GAUSS {
                let t = mid + 0.5 * h * x;
                out.push(BoundarySample {
                    t,
                    point: e.point_at(t),
                    normal: e.normal_at(t),
                    classification: class,
                    arc_weight: e.speed_at(t) * 0.5 * h * wq,
                });
            }
        }
    }
    out
}

/// Options shared by all agents' control evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlOptions {
    pub gains: Gains,
    /// Boundary panels per agent.
    pub boundary_samples: usize,
}

impl Default for ControlOptions {
    fn default() -> Self {
        Self {
            gains: Gains::default(),
            boundary_samples: DEFAULT_BOUNDARY_SAMPLES,
        }
    }
}

/// Control input of agent `i` given the partition of the current snapshot.
pub fn control_input(
    i: usize,
    states: &[AgentState],
    p: &Partition,
    omega: &ConvexPolygon,
    density: &DensityField,
    opts: &ControlOptions,
) -> Result<ControlInput> {
    if opts.boundary_samples < 64 {
        return Err(Error::config(
            "boundary_samples",
            format!("need at least 64 boundary samples, got {}", opts.boundary_samples),
        ));
    }
    if p.guaranteed[i].is_none() {
        return Ok(ControlInput::ZERO);
    }
    let fp = Footprint::new(&states[i])?;
    let mut grad = ControlInput::ZERO;
    for bs in boundary_samples(i, p, omega, opts.boundary_samples) {
        let w = bs.classification.weight(i, p);
        if w == 0.0 {
            continue;
        }
        let jac = fp.jacobians(bs.t)?;
        let scale = w * density.value(bs.point) * bs.arc_weight;
        let n = jac.normal;
        grad.u_q += jac.u.transpose().apply(n) * scale;
        grad.u_z += jac.v.dot(n) * scale;
        grad.u_theta += jac.tau.dot(n) * scale;
        grad.u_h += jac.sigma.dot(n) * scale;
        grad.u_delta += jac.mu.dot(n) * scale;
    }
    let cell = &p.cells[i];
    if !cell.is_empty() {
        let mass = cell.mass(density);
        let q = &p.qualities[i];
        grad.u_z += q.df_dz * mass;
        grad.u_h += q.df_dh * mass;
        grad.u_delta += q.df_ddelta * mass;
    }
    let g = &opts.gains;
    let u = ControlInput {
        u_q: grad.u_q * g.k_q,
        u_z: grad.u_z * g.k_z,
        u_theta: grad.u_theta * g.k_theta,
        u_h: grad.u_h * g.k_h,
        u_delta: grad.u_delta * g.k_delta,
    };
    if !u.is_finite() {
        return Err(Error::Domain(format!("non-finite control for agent {i}: {u:?}")));
    }
    Ok(u)
}

/// Control inputs of all agents from one snapshot.
pub fn control_inputs(
    states: &[AgentState],
    p: &Partition,
    omega: &ConvexPolygon,
    density: &DensityField,
    opts: &ControlOptions,
) -> Result<Vec<ControlInput>> {
    (0..states.len())
        .into_par_iter()
        .map(|i| control_input(i, states, p, omega, density, opts))
        .collect()
}

/// Wraps an angle into `[−π, π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    if (-PI..PI).contains(&theta) {
        theta
    } else {
        (theta + PI).rem_euclid(TAU) - PI
    }
}

/// Explicit Euler step followed by projection onto the feasible set.
pub fn project_state(
    s: &AgentState,
    u: &ControlInput,
    dt: f64,
    lims: &AgentLimits,
    omega: &ConvexPolygon,
) -> AgentState {
    assert!(dt > 0.0, "dt must be positive");
    let h_lim = lims.h_max - TILT_MARGIN;
    AgentState {
        q: omega.project(s.q + u.u_q * dt),
        z: (s.z + u.u_z * dt).clamp(lims.z_min, lims.z_max),
        theta: wrap_angle(s.theta + u.u_theta * dt),
        h: (s.h + u.u_h * dt).clamp(-h_lim, h_lim),
        delta: (s.delta + u.u_delta * dt).clamp(lims.delta_min, lims.delta_max),
        r: s.r,
    }
}
