use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ptz_coverage::control::{control_inputs, ControlOptions};
use ptz_coverage::geom2d::{ConvexPolygon, DensityField, Point, Region};
use ptz_coverage::objective::{objective_from_partition, objective_grid_oracle, objective_scanline_oracle};
use ptz_coverage::partition::{compute_partition, Partition, PartitionOptions};
use ptz_coverage::sensing::{AgentLimits, AgentState};
use ptz_coverage::sim::gradcheck::random_configuration;

fn omega() -> ConvexPolygon {
    ConvexPolygon::regular(Point::ORIGIN, 4.0, 8, 0.3).unwrap()
}

fn lims() -> AgentLimits {
    AgentLimits::with_h_max(0.3, 3.8, 15f64.to_radians(), 35f64.to_radians(), 50f64.to_radians()).unwrap()
}

fn config(seed: u64, n: usize) -> Vec<AgentState> {
    random_configuration(&mut ChaCha8Rng::seed_from_u64(seed), n, &omega(), &lims(), 0.05)
}

fn partition(states: &[AgentState], vertices: usize) -> Partition {
    let opts = PartitionOptions {
        polygon_vertices: vertices,
        ..Default::default()
    };
    compute_partition(states, &vec![lims(); states.len()], &omega(), &opts).unwrap()
}

fn sym_diff(a: &Region, b: &Region) -> f64 {
    a.difference(b).area() + b.difference(a).area()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn pieces_tile_omega_without_overlap(seed in any::<u64>(), n in 1usize..6) {
        let p = partition(&config(seed, n), 64);
        let area = omega().area();
        prop_assert!((p.tiled_area() - area).abs() <= 1e-6 * area);
        let mut pieces: Vec<&Region> = p.cells.iter().collect();
        pieces.extend(p.common.iter().map(|c| &c.region));
        pieces.push(&p.neutral);
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                prop_assert!(pieces[i].intersect(pieces[j]).area() <= 1e-9 * area);
            }
        }
        for (i, cell) in p.cells.iter().enumerate() {
            prop_assert!(cell.difference(&p.guaranteed_polygons[i]).area() <= 1e-9 * area);
            for &j in &p.neighbors[i] {
                prop_assert!(p.neighbors[j].contains(&i));
            }
        }
    }

    /// Sampled points of a cell are never strictly inside a better agent's
    /// region. The slack covers the gap between an ellipse and its inscribed
    /// polygon.
    #[test]
    fn cells_respect_quality_dominance(seed in any::<u64>(), n in 2usize..6) {
        let vertices = 64;
        let p = partition(&config(seed, n), vertices);
        let slack = (std::f64::consts::PI / vertices as f64).cos().powi(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for (i, cell) in p.cells.iter().enumerate() {
            for _ in 0..1000 / n {
                let Some(x) = cell.sample(&mut rng) else { break };
                for (j, g) in p.guaranteed.iter().enumerate() {
                    let Some(g) = g else { continue };
                    if j != i && g.quadratic_form(x) < slack - 1e-9 {
                        prop_assert!(!p.classes.dominates(j, i), "point {x:?} of cell {i} inside dominating agent {j}");
                    }
                }
            }
        }
    }

    #[test]
    fn coarse_and_fine_polygonizations_agree(seed in any::<u64>(), n in 1usize..6) {
        let states = config(seed, n);
        let (a, b) = (partition(&states, 64), partition(&states, 256));
        let mut diff: f64 = a.cells.iter().zip(&b.cells).map(|(x, y)| sym_diff(x, y)).sum();
        diff += sym_diff(&a.neutral, &b.neutral);
        let common = |p: &Partition| p.common.iter().fold(Region::empty(), |acc, c| acc.union(&c.region));
        diff += sym_diff(&common(&a), &common(&b));
        prop_assert!(diff <= 0.01 * omega().area(), "symmetric difference {diff}");
    }

    #[test]
    fn objective_report_is_consistent(seed in any::<u64>(), n in 1usize..6) {
        let p = partition(&config(seed, n), 64);
        let r = objective_from_partition(&p, &DensityField::uniform(1.0));
        let sum: f64 = r.per_agent.iter().chain(&r.per_common).sum();
        prop_assert!((r.h - sum).abs() <= 1e-12 * r.h.max(1.0));
        let best = p.qualities.iter().map(|q| q.f).fold(0.0, f64::max);
        prop_assert!(r.h >= 0.0 && r.h <= best * omega().area() * (1.0 + 1e-12));
    }

    #[test]
    fn relabelling_permutes_everything(seed in any::<u64>(), n in 2usize..5, shift in 1usize..4) {
        let states = config(seed, n);
        let perm: Vec<usize> = (0..n).map(|k| (k + shift) % n).collect();
        let moved: Vec<AgentState> = perm.iter().map(|&k| states[k]).collect();
        let density = DensityField::uniform(1.0);
        let (p, q) = (partition(&states, 64), partition(&moved, 64));
        let (hp, hq) = (objective_from_partition(&p, &density).h, objective_from_partition(&q, &density).h);
        prop_assert!((hp - hq).abs() <= 1e-9 * hp.max(1.0));
        let l = vec![lims(); n];
        let so = objective_scanline_oracle(&states, &l, &omega(), &density, 64).unwrap();
        let sm = objective_scanline_oracle(&moved, &l, &omega(), &density, 64).unwrap();
        prop_assert!((so - sm).abs() <= 1e-9 * so.max(1.0));
        let opts = ControlOptions::default();
        let up = control_inputs(&states, &p, &omega(), &density, &opts).unwrap();
        let uq = control_inputs(&moved, &q, &omega(), &density, &opts).unwrap();
        for (k, &src) in perm.iter().enumerate() {
            let (a, b) = (up[src], uq[k]);
            let scale = a.norm().max(1.0);
            let diff = [
                (a.u_q - b.u_q).norm(),
                (a.u_z - b.u_z).abs(),
                (a.u_theta - b.u_theta).abs(),
                (a.u_h - b.u_h).abs(),
                (a.u_delta - b.u_delta).abs(),
            ];
            prop_assert!(diff.iter().all(|d| *d <= 1e-9 * scale), "agent {src}: {diff:?}");
        }
    }

    /// Raising an agent's quality while its footprint stays put can only
    /// help. A wider altitude range raises `p(z)` at a fixed altitude.
    #[test]
    fn better_quality_on_the_same_footprint_never_lowers_h(seed in any::<u64>(), n in 1usize..5, k in 0usize..4) {
        let states = config(seed, n);
        let k = k % n;
        let mut l = vec![lims(); n];
        let density = DensityField::uniform(1.0);
        let before = objective_scanline_oracle(&states, &l, &omega(), &density, 64).unwrap();
        l[k].z_max += 1.0;
        let after = objective_scanline_oracle(&states, &l, &omega(), &density, 64).unwrap();
        prop_assert!(after >= before * (1.0 - 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn grid_oracle_converges(seed in any::<u64>(), n in 1usize..6) {
        let states = config(seed, n);
        let l = vec![lims(); n];
        let density = DensityField::uniform(1.0);
        let coarse = objective_grid_oracle(&states, &l, &omega(), &density, 256).unwrap();
        let fine = objective_grid_oracle(&states, &l, &omega(), &density, 512).unwrap();
        prop_assert!((coarse - fine).abs() <= 5e-3 * fine, "{coarse} vs {fine}");
    }
}
