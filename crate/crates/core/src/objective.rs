//! The coverage-quality objective `H = ∫_Ω max_i f_i · φ`.
//!
//! [`objective_from_partition`] is the production path: quality is uniform on
//! each cell and common region, so `H` is a weighted sum of region masses.
//! The two oracles evaluate the same integral straight from the exact
//! guaranteed-region ellipses without touching any polygon boolean code:
//!
//! * [`objective_grid_oracle`] takes the pointwise maximum at every cell
//!   centre of a `resolution × resolution` grid over the bounding box of `Ω`.
//! * [`objective_scanline_oracle`] integrates each row exactly from the chords
//!   the ellipses cut on it, and places rows by Gauss–Legendre quadrature
//!   between the heights where the row integral is not smooth.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom2d::{ConvexPolygon, DensityField, Ellipse, Location, Point, Shape};
use crate::partition::Partition;
use crate::sensing::{guaranteed_region, quality, AgentLimits, AgentState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveReport {
    #[serde(rename = "H")]
    pub h: f64,
    /// `f_i · ∫_{W_i} φ`
    pub per_agent: Vec<f64>,
    /// `f^l · ∫_{W_c^l} φ`
    pub per_common: Vec<f64>,
    /// Plain area of the neutral region.
    pub neutral_area: f64,
}

/// Evaluates `H` from the cells and common regions of a partition.
pub fn objective_from_partition(p: &Partition, density: &DensityField) -> ObjectiveReport {
    let per_agent: Vec<f64> = p
        .cells
        .iter()
        .zip(&p.qualities)
        .map(|(cell, q)| if cell.is_empty() { 0.0 } else { q.f * cell.mass(density) })
        .collect();
    let per_common: Vec<f64> = p.common.iter().map(|c| c.quality * c.region.mass(density)).collect();
    ObjectiveReport {
        h: per_agent.iter().sum::<f64>() + per_common.iter().sum::<f64>(),
        per_agent,
        per_common,
        neutral_area: p.neutral.area(),
    }
}

/// Guaranteed ellipses paired with their qualities, best quality first.
fn ranked_regions(states: &[AgentState], lims: &[AgentLimits]) -> Result<Vec<(Ellipse, f64)>> {
    let mut out = Vec::with_capacity(states.len());
    for (s, l) in states.iter().zip(lims) {
        if let Some(e) = guaranteed_region(s)? {
            out.push((e, quality(s, l).f));
        }
    }
    out.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(out)
}

/// Pointwise grid evaluation of `H`.
pub fn objective_grid_oracle(
    states: &[AgentState],
    lims: &[AgentLimits],
    omega: &ConvexPolygon,
    density: &DensityField,
    resolution: usize,
) -> Result<f64> {
    assert!(resolution >= 1);
    let regions = ranked_regions(states, lims)?;
    if regions.is_empty() {
        return Ok(0.0);
    }
    let bb = omega.bbox();
    let dx = bb.width() / resolution as f64;
    let dy = bb.height() / resolution as f64;
    let rows: Vec<f64> = (0..resolution)
        .into_par_iter()
        .map(|j| {
            let y = bb.min.y + (j as f64 + 0.5) * dy;
            let mut acc = 0.0;
            for i in 0..resolution {
                let p = Point::new(bb.min.x + (i as f64 + 0.5) * dx, y);
                if omega.locate(p, 0.0) == Location::Outside {
                    continue;
                }
                // Sorted by quality, so the first container is the maximum.
                if let Some((_, f)) = regions.iter().find(|(e, _)| e.quadratic_form(p) <= 1.0) {
                    acc += f * density.value(p);
                }
            }
            acc
        })
        .collect();
    Ok(rows.iter().sum::<f64>() * dx * dy)
}

/// Row-exact evaluation of `H`, with Gauss–Legendre quadrature across rows.
///
/// The row integral is smooth in `y` except at a finite set of heights: the
/// top and bottom of each ellipse, the vertices of `Ω`, and the points where
/// two boundaries cross. Those heights split `[y_min, y_max]` into intervals.
/// Each interval is mapped through `y = y0 + (y1 − y0)(1 − cos πu)/2`, which
/// absorbs the square-root behaviour at ellipse tangents, then split into
/// panels of 5-point Gauss–Legendre. Because the nodes move with the
/// breakpoints, the result is a smooth function of the agent states, which
/// makes this the oracle to difference numerically. `panels` is roughly the
/// number of panels across the height of `Ω`.
pub fn objective_scanline_oracle(
    states: &[AgentState],
    lims: &[AgentLimits],
    omega: &ConvexPolygon,
    density: &DensityField,
    panels: usize,
) -> Result<f64> {
    assert!(panels >= 1);
    let regions = ranked_regions(states, lims)?;
    if regions.is_empty() {
        return Ok(0.0);
    }
    let bb = omega.bbox();
    let mut ys: Vec<f64> = vec![bb.min.y, bb.max.y];
    ys.extend(omega.vertices().iter().map(|v| v.y));
    for (k, (e, _)) in regions.iter().enumerate() {
        let (_, hy) = e.half_extents();
        ys.push(e.center.y - hy);
        ys.push(e.center.y + hy);
        for (a, b) in omega.edges() {
            ys.extend(segment_crossings(e, a, b));
        }
        for (o, _) in &regions[k + 1..] {
            ys.extend(ellipse_crossings(e, o));
        }
    }
    ys.retain(|y| *y >= bb.min.y && *y <= bb.max.y);
    ys.sort_by(f64::total_cmp);
    ys.dedup_by(|a, b| (*a - *b).abs() < 1e-13);

    let height = bb.height();
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    for w in ys.windows(2) {
        let (y0, y1) = (w[0], w[1]);
        let span = y1 - y0;
        if span <= 0.0 {
            continue;
        }
        let k = ((span / height) * panels as f64).ceil().max(2.0) as usize;
        for p in 0..k {
            let mid = (p as f64 + 0.5) / k as f64;
            for (x, wq) in GAUSS5 {
                let u = mid + 0.5 * x / k as f64;
                let y = y0 + span * 0.5 * (1.0 - (PI * u).cos());
                let jac = span * 0.5 * PI * (PI * u).sin();
                nodes.push((y, wq * 0.5 / k as f64 * jac));
            }
        }
    }
    let total: Vec<f64> = nodes
        .par_iter()
        .map(|&(y, wy)| wy * row_integral(&regions, omega, density, y))
        .collect();
    Ok(total.iter().sum())
}

// 5-point Gauss–Legendre on [-1, 1].
const GAUSS5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// `∫ max_i f_i φ dx` along the row at height `y`.
fn row_integral(regions: &[(Ellipse, f64)], omega: &ConvexPolygon, density: &DensityField, y: f64) -> f64 {
    let Some((xl, xr)) = omega.chord_at(y) else {
        return 0.0;
    };
    let mut covered: Vec<(f64, f64)> = Vec::new();
    let mut acc = 0.0;
    for (e, f) in regions {
        let Some((a, b)) = e.chord_at(y) else { continue };
        let (a, b) = (a.max(xl), b.min(xr));
        if b <= a {
            continue;
        }
        for (u, v) in uncovered(&covered, a, b) {
            acc += f * density.integrate_row(y, u, v);
        }
        insert_interval(&mut covered, a, b);
    }
    acc
}

/// Heights where the ellipse boundary crosses segment `ab`.
fn segment_crossings(e: &Ellipse, a: Point, b: Point) -> Vec<f64> {
    // Solve Q(a + s(b − a)) = 1 for s in [0, 1]; Q is quadratic in s.
    let q0 = e.quadratic_form(a) - 1.0;
    let qm = e.quadratic_form(a.lerp(b, 0.5)) - 1.0;
    let q1 = e.quadratic_form(b) - 1.0;
    // Q(s) − 1 = c0 + c1 s + c2 s², fitted through s = 0, ½, 1.
    let c0 = q0;
    let c2 = 2.0 * (q1 + q0 - 2.0 * qm);
    let c1 = q1 - q0 - c2;
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if c2 <= 0.0 || disc < 0.0 {
        return Vec::new();
    }
    let r = disc.sqrt();
    [(-c1 - r) / (2.0 * c2), (-c1 + r) / (2.0 * c2)]
        .into_iter()
        .filter(|s| (0.0..=1.0).contains(s))
        .map(|s| a.y + s * (b.y - a.y))
        .collect()
}

/// Heights where the boundaries of two ellipses cross.
fn ellipse_crossings(e: &Ellipse, o: &Ellipse) -> Vec<f64> {
    const GRID: usize = 720;
    let g = |t: f64| o.quadratic_form(e.point_at(t)) - 1.0;
    let mut out = Vec::new();
    let mut t0 = 0.0;
    let mut g0 = g(t0);
    for k in 1..=GRID {
        let t1 = std::f64::consts::TAU * k as f64 / GRID as f64;
        let g1 = g(t1);
        if (g0 <= 0.0) != (g1 <= 0.0) {
            let (mut lo, mut hi) = (t0, t1);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if (g(mid) <= 0.0) == (g0 <= 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(e.point_at(0.5 * (lo + hi)).y);
        }
        t0 = t1;
        g0 = g1;
    }
    out
}

/// Sub-intervals of `[a, b]` not covered by the sorted disjoint `covered` list.
fn uncovered(covered: &[(f64, f64)], a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut cursor = a;
    for &(u, v) in covered {
        if v <= cursor {
            continue;
        }
        if u >= b {
            break;
        }
        if u > cursor {
            out.push((cursor, u.min(b)));
        }
        cursor = cursor.max(v);
        if cursor >= b {
            break;
        }
    }
    if cursor < b {
        out.push((cursor, b));
    }
    out
}

fn insert_interval(covered: &mut Vec<(f64, f64)>, a: f64, b: f64) {
    covered.push((a, b));
    covered.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(covered.len());
    for &(u, v) in covered.iter() {
        match merged.last_mut() {
            Some(last) if u <= last.1 => last.1 = last.1.max(v),
            _ => merged.push((u, v)),
        }
    }
    *covered = merged;
}
