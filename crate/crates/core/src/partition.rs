//! Voronoi-free tessellation of the region of interest.
//!
//! Each agent owns the part of its guaranteed sensed region where no other
//! covering agent has equal or better quality. Overlaps between agents of
//! equal quality form common regions, credited once. Whatever no agent covers
//! is the neutral region. Together these tile `Ω`.
//!
//! Quality equality is decided with a tolerance `eps_f`: agents are grouped
//! into quality classes by single linkage on their sorted qualities (two
//! consecutive values within `eps_f` share a class), and classes are totally
//! ordered. "Dominates" and "equal" are then class comparisons, which keeps
//! the tiling exact under floating point.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::Result;
use crate::geom2d::{ellipse_to_polygon, ConvexPolygon, Ellipse, Region, DEFAULT_POLYGON_VERTICES};
use crate::sensing::{quality, AgentLimits, AgentState, Footprint, QualityValue};

/// Default tolerance for treating two qualities as equal.
pub const DEFAULT_EPS_F: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionOptions {
    pub eps_f: f64,
    /// Vertices per polygonized guaranteed region.
    pub polygon_vertices: usize,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        Self {
            eps_f: DEFAULT_EPS_F,
            polygon_vertices: DEFAULT_POLYGON_VERTICES,
        }
    }
}

/// Ordered equivalence classes of agent qualities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QualityClasses {
    rank: Vec<usize>,
}

impl QualityClasses {
    pub fn new(qualities: &[f64], eps_f: f64) -> Self {
        let mut order: Vec<usize> = (0..qualities.len()).collect();
        order.sort_by(|&a, &b| qualities[a].total_cmp(&qualities[b]).then(a.cmp(&b)));
        let mut rank = vec![0; qualities.len()];
        let mut class = 0;
        for (k, &i) in order.iter().enumerate() {
            if k > 0 && qualities[i] - qualities[order[k - 1]] > eps_f {
                class += 1;
            }
            rank[i] = class;
        }
        Self { rank }
    }

    /// Class index; higher means better quality.
    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn equal(&self, i: usize, j: usize) -> bool {
        self.rank[i] == self.rank[j]
    }

    /// Whether agent `j` has strictly better quality than agent `i`.
    pub fn dominates(&self, j: usize, i: usize) -> bool {
        self.rank[j] > self.rank[i]
    }
}

/// Overlap of equal-quality agents, counted once in the objective.
#[derive(Clone, Debug)]
pub struct CommonRegion {
    pub quality: f64,
    /// Agents whose pairwise overlaps make up the region, ascending.
    pub members: Vec<usize>,
    pub region: Region,
}

/// The tessellation of `Ω` induced by a swarm configuration.
#[derive(Clone, Debug)]
pub struct Partition {
    /// `W_i`, one per agent.
    pub cells: Vec<Region>,
    pub common: Vec<CommonRegion>,
    /// Part of `Ω` covered by no guaranteed region.
    pub neutral: Region,
    /// `N_i`: agents whose guaranteed regions overlap agent `i`'s.
    pub neighbors: Vec<BTreeSet<usize>>,
    /// Exact guaranteed regions (`None` when empty).
    pub guaranteed: Vec<Option<Ellipse>>,
    /// Polygonized guaranteed regions, not clipped to `Ω`.
    pub guaranteed_polygons: Vec<Region>,
    pub qualities: Vec<QualityValue>,
    pub classes: QualityClasses,
}

impl Partition {
    /// Total polygon area of cells, common regions and neutral region.
    pub fn tiled_area(&self) -> f64 {
        self.cells.iter().map(Region::area).sum::<f64>()
            + self.common.iter().map(|c| c.region.area()).sum::<f64>()
            + self.neutral.area()
    }
}

/// Computes cells, common regions, neutral region and neighbour sets.
pub fn compute_partition(
    states: &[AgentState],
    lims: &[AgentLimits],
    omega: &ConvexPolygon,
    opts: &PartitionOptions,
) -> Result<Partition> {
    assert_eq!(states.len(), lims.len(), "one set of limits per agent");
    let n = states.len();
    let footprints = states.iter().map(Footprint::new).collect::<Result<Vec<_>>>()?;
    let guaranteed: Vec<Option<Ellipse>> = footprints.iter().map(Footprint::guaranteed).collect();
    let polys: Vec<Region> = guaranteed
        .iter()
        .map(|g| match g {
            Some(e) => ellipse_to_polygon(e, opts.polygon_vertices),
            None => Ok(Region::empty()),
        })
        .collect::<Result<_>>()?;
    let qualities: Vec<QualityValue> = states.iter().zip(lims).map(|(s, l)| quality(s, l)).collect();
    let fvals: Vec<f64> = qualities.iter().map(|q| q.f).collect();
    let classes = QualityClasses::new(&fvals, opts.eps_f);

    let omega_region = Region::from_convex(omega);
    let clipped: Vec<Region> = polys.par_iter().map(|p| p.intersect(&omega_region)).collect();

    let cells: Vec<Region> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut cell = clipped[i].clone();
            for (j, other) in polys.iter().enumerate() {
                if j == i || cell.is_empty() || other.is_empty() {
                    continue;
                }
                if classes.rank(j) >= classes.rank(i) {
                    cell = cell.difference(other);
                }
            }
            cell
        })
        .collect();

    let mut neighbors = vec![BTreeSet::new(); n];
    let mut overlap = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if polys[i].overlaps(&polys[j]) {
                overlap[i][j] = true;
                overlap[j][i] = true;
                neighbors[i].insert(j);
                neighbors[j].insert(i);
            }
        }
    }

    let common = common_regions(&polys, &clipped, &fvals, &classes, &overlap);

    let mut neutral = omega_region;
    for p in &polys {
        neutral = neutral.difference(p);
    }

    Ok(Partition {
        cells,
        common,
        neutral,
        neighbors,
        guaranteed,
        guaranteed_polygons: polys,
        qualities,
        classes,
    })
}

fn common_regions(
    polys: &[Region],
    clipped: &[Region],
    fvals: &[f64],
    classes: &QualityClasses,
    overlap: &[Vec<bool>],
) -> Vec<CommonRegion> {
    let n = polys.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // Connected component of "equal quality and overlapping".
        let mut group = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < group.len() {
            let i = group[k];
            for j in 0..n {
                if !seen[j] && overlap[i][j] && classes.equal(i, j) {
                    seen[j] = true;
                    group.push(j);
                }
            }
            k += 1;
        }
        if group.len() < 2 {
            continue;
        }
        group.sort_unstable();
        let mut region = Region::empty();
        for (a, &i) in group.iter().enumerate() {
            for &j in &group[a + 1..] {
                if overlap[i][j] {
                    region = region.union(&clipped[i].intersect(&clipped[j]));
                }
            }
        }
        let rank = classes.rank(group[0]);
        for (k, p) in polys.iter().enumerate() {
            if classes.rank(k) > rank && !p.is_empty() {
                region = region.difference(p);
            }
        }
        if region.is_empty() {
            continue;
        }
        let quality = group.iter().map(|&i| fvals[i]).fold(f64::NEG_INFINITY, f64::max);
        out.push(CommonRegion {
            quality,
            members: group,
            region,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::{Point, Shape};

    fn omega() -> ConvexPolygon {
        ConvexPolygon::rectangle(-5.0, -5.0, 5.0, 5.0).unwrap()
    }

    fn lims() -> AgentLimits {
        AgentLimits::new(0.5, 3.0, 15f64.to_radians(), 35f64.to_radians()).unwrap()
    }

    fn level(x: f64, y: f64, z: f64) -> AgentState {
        AgentState {
            q: Point::new(x, y),
            z,
            theta: 0.0,
            h: 0.0,
            delta: 25f64.to_radians(),
            r: 0.05,
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn quality_classes_single_linkage() {
        let c = QualityClasses::new(&[0.5, 0.2, 0.5 + 5e-10, 0.9], 1e-9);
        assert!(c.equal(0, 2));
        assert!(c.dominates(0, 1));
        assert!(c.dominates(3, 0));
        assert!(!c.dominates(0, 2) && !c.dominates(2, 0));
    }

    #[test]
    fn lone_agent() {
        let s = [level(0.0, 0.0, 2.0)];
        let p = compute_partition(&s, &[lims()], &omega(), &PartitionOptions::default()).unwrap();
        let g = &p.guaranteed_polygons[0];
        assert!(rel(p.cells[0].area(), g.area()) < 1e-12);
        assert!(p.common.is_empty());
        assert!(rel(p.neutral.area(), 100.0 - g.area()) < 1e-12);
        assert!(p.neighbors[0].is_empty());
    }

    #[test]
    fn identical_agents_share_a_common_region() {
        let s = [level(0.3, 0.1, 2.0), level(0.3, 0.1, 2.0)];
        let l = [lims(), lims()];
        let p = compute_partition(&s, &l, &omega(), &PartitionOptions::default()).unwrap();
        assert!(p.cells[0].is_empty() && p.cells[1].is_empty());
        assert_eq!(p.common.len(), 1);
        assert_eq!(p.common[0].members, vec![0, 1]);
        assert_eq!(p.common[0].quality, p.qualities[0].f);
        assert!(rel(p.common[0].region.area(), p.guaranteed_polygons[0].area()) < 1e-12);
        assert!(p.neighbors[0].contains(&1) && p.neighbors[1].contains(&0));
    }

    #[test]
    fn dominant_agent_keeps_the_overlap() {
        // Lower altitude means better quality.
        let s = [level(0.0, 0.0, 1.5), level(0.8, 0.0, 2.0)];
        let l = [lims(), lims()];
        let p = compute_partition(&s, &l, &omega(), &PartitionOptions::default()).unwrap();
        assert!(p.qualities[0].f > p.qualities[1].f);
        let (g0, g1) = (&p.guaranteed_polygons[0], &p.guaranteed_polygons[1]);
        assert!(rel(p.cells[0].area(), g0.area()) < 1e-12);
        assert!(rel(p.cells[1].area(), g1.difference(g0).area()) < 1e-12);
        let covered = p.cells[0].area() + p.cells[1].area();
        assert!(rel(covered, g0.union(g1).area()) < 1e-12);
        assert!(p.common.is_empty());
        let probe = Point::new(0.5, 0.0);
        assert!(p.cells[0].contains(probe, true));
        assert!(!p.cells[1].contains(probe, false));
    }

    #[test]
    fn clipping_to_omega_and_tiling() {
        let s = [level(4.5, 4.5, 3.0), level(3.0, 4.0, 2.5), level(-1.0, -1.0, 1.0)];
        let l = [lims(); 3];
        let om = omega();
        let p = compute_partition(&s, &l, &om, &PartitionOptions::default()).unwrap();
        assert!((p.tiled_area() - om.area()).abs() <= 1e-9 * om.area());
        for c in &p.cells {
            for piece in c.pieces() {
                for &v in piece {
                    assert!(om.contains(v, false));
                }
            }
        }
    }

    #[test]
    fn empty_guaranteed_region_yields_empty_cell() {
        let mut s = level(0.0, 0.0, 0.5);
        s.delta = 15f64.to_radians();
        s.r = 0.2; // > 0.5·tan 15°
        let other = level(0.1, 0.0, 2.0);
        let p = compute_partition(&[s, other], &[lims(), lims()], &omega(), &PartitionOptions::default()).unwrap();
        assert!(p.guaranteed[0].is_none());
        assert!(p.cells[0].is_empty());
        assert!(p.neighbors[0].is_empty() && p.neighbors[1].is_empty());
    }
}
