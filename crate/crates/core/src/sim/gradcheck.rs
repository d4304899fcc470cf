//! Control inputs against central differences of an independent objective.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::control::{control_input, ControlOptions, Gains};
use crate::error::Result;
use crate::geom2d::{ConvexPolygon, DensityField, Location, Shape};
use crate::objective::objective_scanline_oracle;
use crate::partition::{compute_partition, PartitionOptions};
use crate::sensing::{AgentLimits, AgentState, Footprint};

pub const CHANNELS: [&str; 6] = ["q.x", "q.y", "z", "theta", "h", "delta"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradientCheckOptions {
    /// Central-difference step.
    pub step: f64,
    /// Oracle panels across the height of `Ω`.
    pub oracle_panels: usize,
    /// Vertices per polygonized region. The interior terms use the polygon
    /// area of each cell, whose relative deficit is about `(2π/n)²/6`; where
    /// boundary and interior terms nearly cancel, that deficit shows up as a
    /// relative error of the difference, so this is set high.
    pub polygonization: usize,
    pub boundary_samples: usize,
    pub eps_f: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for GradientCheckOptions {
    fn default() -> Self {
        Self {
            step: 1e-4,
            oracle_panels: 256,
            polygonization: 1024,
            boundary_samples: 360,
            eps_f: crate::partition::DEFAULT_EPS_F,
            rel_tol: 0.02,
            abs_tol: 1e-4,
        }
    }
}

/// One control channel of one agent.
#[derive(Clone, Debug, Serialize)]
pub struct ChannelCheck {
    pub agent: usize,
    pub channel: &'static str,
    /// Control divided by its gain.
    pub analytic: f64,
    pub finite_difference: f64,
    pub passed: bool,
}

impl ChannelCheck {
    pub fn abs_error(&self) -> f64 {
        (self.analytic - self.finite_difference).abs()
    }

    pub fn rel_error(&self) -> f64 {
        self.abs_error() / self.finite_difference.abs().max(f64::MIN_POSITIVE)
    }
}

fn coordinate(s: &mut AgentState, channel: usize) -> &mut f64 {
    match channel {
        0 => &mut s.q.x,
        1 => &mut s.q.y,
        2 => &mut s.z,
        3 => &mut s.theta,
        4 => &mut s.h,
        _ => &mut s.delta,
    }
}

/// Compares every channel of every agent.
pub fn check_gradients(
    states: &[AgentState],
    lims: &[AgentLimits],
    omega: &ConvexPolygon,
    density: &DensityField,
    opts: &GradientCheckOptions,
) -> Result<Vec<ChannelCheck>> {
    let popts = PartitionOptions {
        eps_f: opts.eps_f,
        polygon_vertices: opts.polygonization,
    };
    let p = compute_partition(states, lims, omega, &popts)?;
    let copts = ControlOptions {
        gains: Gains::default(),
        boundary_samples: opts.boundary_samples,
    };
    let h = |x: &[AgentState]| objective_scanline_oracle(x, lims, omega, density, opts.oracle_panels);
    let mut out = Vec::new();
    for i in 0..states.len() {
        let u = control_input(i, states, &p, omega, density, &copts)?;
        let analytic = [u.u_q.x, u.u_q.y, u.u_z, u.u_theta, u.u_h, u.u_delta];
        for (c, name) in CHANNELS.iter().enumerate() {
            let mut plus = states.to_vec();
            *coordinate(&mut plus[i], c) += opts.step;
            let mut minus = states.to_vec();
            *coordinate(&mut minus[i], c) -= opts.step;
            let fd = (h(&plus)? - h(&minus)?) / (2.0 * opts.step);
            let err = (analytic[c] - fd).abs();
            out.push(ChannelCheck {
                agent: i,
                channel: name,
                analytic: analytic[c],
                finite_difference: fd,
                passed: err <= opts.rel_tol * fd.abs() || err <= opts.abs_tol,
            });
        }
    }
    Ok(out)
}

/// A random configuration away from the degenerate cases where the gradient
/// is not defined: states keep a margin from their limits, and no two
/// agents have nearly equal quality.
pub fn random_configuration(
    rng: &mut ChaCha8Rng,
    n: usize,
    omega: &ConvexPolygon,
    lims: &AgentLimits,
    r: f64,
) -> Vec<AgentState> {
    let bb = omega.bbox();
    let margin = |lo: f64, hi: f64| {
        let m = 0.05 * (hi - lo);
        (lo + m, hi - m)
    };
    let (z0, z1) = margin(lims.z_min, lims.z_max);
    let (d0, d1) = margin(lims.delta_min, lims.delta_max);
    'outer: loop {
        let mut out: Vec<AgentState> = Vec::with_capacity(n);
        while out.len() < n {
            let s = AgentState {
                q: crate::geom2d::Point::new(
                    rng.random_range(bb.min.x..bb.max.x),
                    rng.random_range(bb.min.y..bb.max.y),
                ),
                z: rng.random_range(z0..z1),
                theta: rng.random_range(-3.0..3.0),
                h: rng.random_range(-0.7 * lims.h_max..0.7 * lims.h_max),
                delta: rng.random_range(d0..d1),
                r,
            };
            if omega.locate(s.q, 0.0) == Location::Outside || Footprint::new(&s).is_err() {
                continue;
            }
            out.push(s);
        }
        let f: Vec<f64> = out.iter().map(|s| crate::sensing::quality(s, lims).f).collect();
        for i in 0..n {
            for j in i + 1..n {
                if (f[i] - f[j]).abs() < 1e-3 {
                    continue 'outer;
                }
            }
        }
        return out;
    }
}

/// Runs [`check_gradients`] on `samples` random configurations with one to
/// three agents each.
pub fn check_random(
    samples: usize,
    seed: u64,
    omega: &ConvexPolygon,
    lims: &AgentLimits,
    r: f64,
    density: &DensityField,
    opts: &GradientCheckOptions,
) -> Result<Vec<Vec<ChannelCheck>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|k| {
            let n = 1 + k % 3;
            let states = random_configuration(&mut rng, n, omega, lims, r);
            check_gradients(&states, &vec![*lims; n], omega, density, opts)
        })
        .collect()
}
