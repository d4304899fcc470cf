//! Planar regions and their boolean algebra.
//!
//! A [`Region`] is stored as a set of pairwise interior-disjoint convex
//! pieces. Every set this crate manipulates is a boolean combination of
//! convex polygons (polygonized ellipses and the convex region of interest),
//! and on convex pieces all three boolean operations reduce to half-plane
//! splits:
//!
//! * `A ∩ B`: clip every pair of pieces against each other.
//! * `A \ B`: peel each piece of `A` along the edges of each piece of `B`;
//!   the parts on the outside of an edge are kept, the rest continues.
//! * `A ∪ B`: `A` together with `B \ A`.
//!
//! Complementary halves of a split are built from the same side distances
//! and crossing points, so neighbouring pieces share their edges exactly and
//! areas add up to rounding error. The ring view (outer boundaries and holes)
//! is derived on demand by dissolving the shared internal edges.

use std::collections::HashMap;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::density::DensityField;
use super::point::{closest_on_segment, signed_area, BBox, Point};
use super::polygon::{clean_ring, clip_convex, split_convex, ConvexPolygon};
use super::{Location, Shape, EPS};
use crate::error::{Error, Result};

/// One polygon of a region: a counter-clockwise outer ring and clockwise holes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonWithHoles {
    pub outer: Vec<Point>,
    pub holes: Vec<Vec<Point>>,
}

impl PolygonWithHoles {
    pub fn area(&self) -> f64 {
        signed_area(&self.outer) + self.holes.iter().map(|h| signed_area(h)).sum::<f64>()
    }
}

#[derive(Clone, Debug)]
struct Piece {
    ring: Vec<Point>,
    bbox: BBox,
}

impl Piece {
    fn new(ring: Vec<Point>) -> Option<Self> {
        let ring = clean_ring(ring);
        let bbox = BBox::of_points(&ring)?;
        Some(Self { ring, bbox })
    }
}

/// A planar set, possibly empty, non-convex, with holes or several components.
#[derive(Clone, Debug, Default)]
pub struct Region {
    pieces: Vec<Piece>,
    rings: OnceLock<Vec<PolygonWithHoles>>,
}

impl Region {
    pub fn empty() -> Self {
        Self::default()
    }

    fn from_pieces(pieces: Vec<Piece>) -> Self {
        Self {
            pieces,
            rings: OnceLock::new(),
        }
    }

    /// Region bounded by a convex counter-clockwise ring. Degenerate rings give
    /// the empty region.
    pub fn from_convex_ring(ring: Vec<Point>) -> Self {
        Self::from_pieces(Piece::new(ring).into_iter().collect())
    }

    pub fn from_convex(p: &ConvexPolygon) -> Self {
        Self::from_convex_ring(p.vertices().to_vec())
    }

    /// Region from a simple outer ring and simple hole rings.
    ///
    /// Ring orientation is normalized (outer counter-clockwise, holes
    /// clockwise). Holes must lie inside the outer ring.
    pub fn from_rings(outer: &[Point], holes: &[Vec<Point>]) -> Result<Self> {
        let outer_pieces = triangulate_simple(outer)?;
        let mut region = Self::from_pieces(outer_pieces);
        let outer_ccw = orient(outer, true);
        for hole in holes {
            if hole
                .iter()
                .any(|&p| locate_in_ring(&outer_ccw, p, EPS) == Location::Outside)
            {
                return Err(Error::DegenerateShape("hole is not contained in its outer ring".into()));
            }
            let hole_region = Self::from_pieces(triangulate_simple(hole)?);
            region = region.difference(&hole_region);
        }
        Ok(region)
    }

    pub fn from_polygons(polys: &[PolygonWithHoles]) -> Result<Self> {
        let mut out = Region::empty();
        for p in polys {
            out = out.union(&Self::from_rings(&p.outer, &p.holes)?);
        }
        Ok(out)
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Number of convex pieces in the internal decomposition.
    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// The convex pieces, each a counter-clockwise ring.
    pub fn pieces(&self) -> impl Iterator<Item = &[Point]> {
        self.pieces.iter().map(|p| p.ring.as_slice())
    }

    pub fn bbox(&self) -> Option<BBox> {
        self.pieces
            .iter()
            .map(|p| p.bbox)
            .reduce(|a, b| a.union(&b))
    }

    /// Exact polygon area.
    pub fn area(&self) -> f64 {
        self.pieces.iter().map(|p| signed_area(&p.ring)).sum()
    }

    /// `∫ φ` over the region.
    pub fn mass(&self, density: &DensityField) -> f64 {
        self.pieces.iter().map(|p| density.integrate_convex(&p.ring)).sum()
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mut out = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                if !a.bbox.overlaps(&b.bbox, 0.0) {
                    continue;
                }
                if let Some(p) = Piece::new(clip_convex(&a.ring, &b.ring)) {
                    out.push(p);
                }
            }
        }
        Region::from_pieces(out)
    }

    pub fn difference(&self, other: &Region) -> Region {
        let mut cur: Vec<Piece> = self.pieces.clone();
        for cut in &other.pieces {
            if cur.is_empty() {
                break;
            }
            let mut next = Vec::with_capacity(cur.len());
            for p in cur {
                subtract_convex(p, cut, &mut next);
            }
            cur = next;
        }
        Region::from_pieces(cur)
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.difference(self).pieces);
        Region::from_pieces(pieces)
    }

    /// Whether the two regions share interior area.
    pub fn overlaps(&self, other: &Region) -> bool {
        self.pieces.iter().any(|a| {
            other
                .pieces
                .iter()
                .any(|b| a.bbox.overlaps(&b.bbox, 0.0) && !clip_convex(&a.ring, &b.ring).is_empty())
        })
    }

    /// Boundary rings: outer rings counter-clockwise, holes clockwise.
    pub fn polygons(&self) -> &[PolygonWithHoles] {
        self.rings.get_or_init(|| dissolve(&self.pieces))
    }

    /// Uniform random point, or `None` for the empty region.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Point> {
        let total = self.area();
        if total <= 0.0 {
            return None;
        }
        let mut pick = rng.random::<f64>() * total;
        let triangles = self.pieces.iter().flat_map(|p| {
            let r = &p.ring;
            (1..r.len() - 1).map(move |k| (r[0], r[k], r[k + 1]))
        });
        let mut last = None;
        for tri in triangles {
            last = Some(tri);
            let a = 0.5 * (tri.1 - tri.0).cross(tri.2 - tri.0);
            if pick <= a {
                break;
            }
            pick -= a;
        }
        let (o, b, c) = last?;
        let (mut u, mut v): (f64, f64) = (rng.random(), rng.random());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        Some(o + (b - o) * u + (c - o) * v)
    }
}

impl Shape for Region {
    fn locate(&self, p: Point, tol: f64) -> Location {
        let mut touched = false;
        for piece in &self.pieces {
            let b = piece.bbox;
            if p.x < b.min.x - tol || p.x > b.max.x + tol || p.y < b.min.y - tol || p.y > b.max.y + tol {
                continue;
            }
            match locate_in_convex(&piece.ring, p, tol) {
                Location::Inside => return Location::Inside,
                Location::Boundary => touched = true,
                Location::Outside => {}
            }
        }
        if !touched {
            return Location::Outside;
        }
        // On a piece edge: either the region boundary or an internal seam.
        let on_boundary = self.polygons().iter().any(|poly| {
            std::iter::once(&poly.outer)
                .chain(poly.holes.iter())
                .any(|ring| distance_to_ring(ring, p) <= tol)
        });
        if on_boundary {
            Location::Boundary
        } else {
            Location::Inside
        }
    }
}

/// `A ∩ B`.
pub fn region_intersect(a: &Region, b: &Region) -> Region {
    a.intersect(b)
}

/// `A ∪ B`.
pub fn region_union(a: &Region, b: &Region) -> Region {
    a.union(b)
}

/// `A \ B`.
pub fn region_difference(a: &Region, b: &Region) -> Region {
    a.difference(b)
}

/// `∫_R φ`; the exact polygon area for uniform unit density.
pub fn area(r: &Region, density: &DensityField) -> f64 {
    r.mass(density)
}

fn subtract_convex(piece: Piece, cut: &Piece, out: &mut Vec<Piece>) {
    if !piece.bbox.overlaps(&cut.bbox, 0.0) {
        out.push(piece);
        return;
    }
    let n = cut.ring.len();
    // Entirely outside one cut edge: untouched, no fragmentation.
    for i in 0..n {
        let a = cut.ring[i];
        let b = cut.ring[(i + 1) % n];
        let e = b - a;
        let len = e.norm();
        if piece.ring.iter().all(|&p| e.cross(p - a) / len <= EPS) {
            out.push(piece);
            return;
        }
    }
    let mut rest = piece.ring;
    for i in 0..n {
        let (inside, outside) = split_convex(&rest, cut.ring[i], cut.ring[(i + 1) % n]);
        if let Some(p) = Piece::new(outside) {
            out.push(p);
        }
        rest = inside;
        if rest.is_empty() {
            break;
        }
    }
}

fn locate_in_convex(ring: &[Point], p: Point, tol: f64) -> Location {
    let n = ring.len();
    let mut on_edge = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        let e = b - a;
        let len = e.norm();
        if len == 0.0 {
            continue;
        }
        let d = e.cross(p - a) / len;
        if d < -tol {
            return Location::Outside;
        }
        if d <= tol {
            on_edge = true;
        }
    }
    if on_edge {
        Location::Boundary
    } else {
        Location::Inside
    }
}

fn distance_to_ring(ring: &[Point], p: Point) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let (c, _) = closest_on_segment(ring[i], ring[(i + 1) % n], p);
            c.distance(p)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Winding-number test against a single simple ring of either orientation.
fn locate_in_ring(ring: &[Point], p: Point, tol: f64) -> Location {
    if distance_to_ring(ring, p) <= tol {
        return Location::Boundary;
    }
    if winding_number(ring, p) != 0 {
        Location::Inside
    } else {
        Location::Outside
    }
}

fn winding_number(ring: &[Point], p: Point) -> i32 {
    let n = ring.len();
    let mut w = 0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        if a.y <= p.y {
            if b.y > p.y && (b - a).cross(p - a) > 0.0 {
                w += 1;
            }
        } else if b.y <= p.y && (b - a).cross(p - a) < 0.0 {
            w -= 1;
        }
    }
    w
}

fn orient(ring: &[Point], ccw: bool) -> Vec<Point> {
    let mut r = ring.to_vec();
    if (signed_area(&r) > 0.0) != ccw {
        r.reverse();
    }
    r
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    let on = |p: Point, q: Point, r: Point, o: f64| {
        o.abs() <= EPS * (q - p).norm().max(1.0)
            && r.x >= p.x.min(q.x) - EPS
            && r.x <= p.x.max(q.x) + EPS
            && r.y >= p.y.min(q.y) - EPS
            && r.y <= p.y.max(q.y) + EPS
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

fn is_simple(ring: &[Point]) -> bool {
    let n = ring.len();
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        for j in i + 1..n {
            // skip adjacent edges
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (ring[j], ring[(j + 1) % n]);
            if segments_cross(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Ear-clipping triangulation of a simple ring into convex pieces.
fn triangulate_simple(ring: &[Point]) -> Result<Vec<Piece>> {
    let mut r = clean_ring(orient(ring, true));
    if r.is_empty() {
        return Err(Error::DegenerateShape("ring has fewer than 3 distinct vertices or no area".into()));
    }
    if r.iter().any(|p| !p.is_finite()) {
        return Err(Error::DegenerateShape("non-finite ring vertex".into()));
    }
    if !is_simple(&r) {
        return Err(Error::DegenerateShape("ring is self-intersecting".into()));
    }
    if is_convex_ccw(&r) {
        return Ok(Piece::new(r).into_iter().collect());
    }
    let mut out = Vec::new();
    let mut guard = 0;
    while r.len() > 3 {
        let n = r.len();
        let mut clipped = false;
        for i in 0..n {
            let prev = r[(i + n - 1) % n];
            let cur = r[i];
            let next = r[(i + 1) % n];
            if (cur - prev).cross(next - cur) <= 0.0 {
                continue;
            }
            let tri = [prev, cur, next];
            let blocked = r.iter().enumerate().any(|(k, &p)| {
                k != i && k != (i + n - 1) % n && k != (i + 1) % n && locate_in_convex(&tri, p, 0.0) != Location::Outside
            });
            if !blocked {
                out.extend(Piece::new(tri.to_vec()));
                r.remove(i);
                clipped = true;
                break;
            }
        }
        guard += 1;
        if !clipped || guard > 10 * ring.len() {
            return Err(Error::DegenerateShape("ring could not be triangulated".into()));
        }
    }
    out.extend(Piece::new(r));
    Ok(out)
}

fn is_convex_ccw(r: &[Point]) -> bool {
    let n = r.len();
    (0..n).all(|i| (r[(i + 1) % n] - r[i]).cross(r[(i + 2) % n] - r[(i + 1) % n]) > 0.0)
}

/// Rebuilds boundary rings from the convex pieces by cancelling shared edges.
fn dissolve(pieces: &[Piece]) -> Vec<PolygonWithHoles> {
    if pieces.is_empty() {
        return Vec::new();
    }
    let snap = EPS;

    // 1. Weld vertices that coincide within `snap`.
    let mut verts: Vec<Point> = Vec::new();
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let cell = |p: Point| ((p.x / snap).floor() as i64, (p.y / snap).floor() as i64);
    let mut weld = |p: Point| -> usize {
        let (cx, cy) = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = grid.get(&(cx + dx, cy + dy)) {
                    for &id in ids {
                        if verts[id].distance(p) <= snap {
                            return id;
                        }
                    }
                }
            }
        }
        let id = verts.len();
        verts.push(p);
        grid.entry((cx, cy)).or_default().push(id);
        id
    };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for piece in pieces {
        let ids: Vec<usize> = piece.ring.iter().map(|&p| weld(p)).collect();
        for k in 0..ids.len() {
            let (a, b) = (ids[k], ids[(k + 1) % ids.len()]);
            if a != b {
                edges.push((a, b));
            }
        }
    }

    // 2. Split edges at vertices lying on their interior (T-junctions).
    let mut by_x: Vec<usize> = (0..verts.len()).collect();
    by_x.sort_by(|&a, &b| verts[a].x.total_cmp(&verts[b].x));
    let xs: Vec<f64> = by_x.iter().map(|&i| verts[i].x).collect();
    let mut split_edges: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
    for &(a, b) in &edges {
        let (pa, pb) = (verts[a], verts[b]);
        let d = pb - pa;
        let len2 = d.norm_squared();
        let lo = xs.partition_point(|&x| x < pa.x.min(pb.x) - snap);
        let hi = xs.partition_point(|&x| x <= pa.x.max(pb.x) + snap);
        let (ylo, yhi) = (pa.y.min(pb.y) - snap, pa.y.max(pb.y) + snap);
        let mut on: Vec<(f64, usize)> = Vec::new();
        for &w in &by_x[lo..hi] {
            if w == a || w == b {
                continue;
            }
            let p = verts[w];
            if p.y < ylo || p.y > yhi {
                continue;
            }
            let t = (p - pa).dot(d) / len2;
            if t <= 0.0 || t >= 1.0 {
                continue;
            }
            if (pa + d * t).distance(p) <= snap {
                on.push((t, w));
            }
        }
        if on.is_empty() {
            split_edges.push((a, b));
        } else {
            on.sort_by(|x, y| x.0.total_cmp(&y.0));
            let mut prev = a;
            for &(_, w) in &on {
                split_edges.push((prev, w));
                prev = w;
            }
            split_edges.push((prev, b));
        }
    }

    // 3. Cancel opposite edges.
    let mut count: HashMap<(usize, usize), i64> = HashMap::new();
    for &(a, b) in &split_edges {
        if a < b {
            *count.entry((a, b)).or_default() += 1;
        } else {
            *count.entry((b, a)).or_default() -= 1;
        }
    }
    let mut keys: Vec<_> = count.into_iter().filter(|&(_, c)| c != 0).collect();
    keys.sort_unstable();
    let mut directed: Vec<(usize, usize)> = Vec::new();
    for ((lo, hi), c) in keys {
        for _ in 0..c.unsigned_abs() {
            directed.push(if c > 0 { (lo, hi) } else { (hi, lo) });
        }
    }

    // 4. Chain into loops, taking the tightest left turn at shared vertices.
    let mut outgoing: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, &(a, _)) in directed.iter().enumerate() {
        outgoing.entry(a).or_default().push(k);
    }
    let mut used = vec![false; directed.len()];
    let mut loops: Vec<Vec<Point>> = Vec::new();
    for start in 0..directed.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut ring = vec![verts[directed[start].0]];
        let (mut from, mut at) = directed[start];
        let origin = directed[start].0;
        let mut steps = 0;
        while at != origin {
            ring.push(verts[at]);
            let back = verts[from] - verts[at];
            let next = outgoing.get(&at).and_then(|cands| {
                cands
                    .iter()
                    .copied()
                    .filter(|&k| !used[k])
                    .min_by(|&k1, &k2| {
                        let c1 = cw_angle(back, verts[directed[k1].1] - verts[at]);
                        let c2 = cw_angle(back, verts[directed[k2].1] - verts[at]);
                        c1.total_cmp(&c2)
                    })
            });
            let Some(k) = next else { break };
            used[k] = true;
            from = at;
            at = directed[k].1;
            steps += 1;
            if steps > directed.len() {
                break;
            }
        }
        let ring = drop_collinear(ring);
        if ring.len() >= 3 && signed_area(&ring).abs() > EPS * EPS {
            loops.push(ring);
        }
    }

    // 5. Classify and nest.
    let (mut outers, holes): (Vec<Vec<Point>>, Vec<Vec<Point>>) =
        loops.into_iter().partition(|r| signed_area(r) > 0.0);
    outers.sort_by(|a, b| signed_area(b).total_cmp(&signed_area(a)));
    let mut polys: Vec<PolygonWithHoles> = outers
        .into_iter()
        .map(|outer| PolygonWithHoles { outer, holes: Vec::new() })
        .collect();
    for hole in holes {
        let probe = interior_probe_of_hole(&hole);
        let owner = polys
            .iter()
            .enumerate()
            .filter(|(_, p)| winding_number(&p.outer, probe) != 0)
            .min_by(|(_, a), (_, b)| signed_area(&a.outer).total_cmp(&signed_area(&b.outer)))
            .map(|(i, _)| i);
        if let Some(i) = owner {
            polys[i].holes.push(hole);
        }
    }
    polys
}

/// Clockwise angle in `[0, 2π)` from `from` to `to`.
fn cw_angle(from: Point, to: Point) -> f64 {
    let a = from.cross(to).atan2(from.dot(to));
    // `a` is counter-clockwise in (−π, π]; convert.
    let cw = -a;
    if cw <= 0.0 {
        cw + std::f64::consts::TAU
    } else {
        cw
    }
}

fn drop_collinear(ring: Vec<Point>) -> Vec<Point> {
    let mut r = ring;
    loop {
        let n = r.len();
        if n < 3 {
            return r;
        }
        let mut removed = false;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let prev = r[(i + n - 1) % n];
            let cur = r[i];
            let next = r[(i + 1) % n];
            let e0 = cur - prev;
            let e1 = next - cur;
            let scale = e0.norm() * e1.norm();
            if scale > 0.0 && e0.cross(e1).abs() <= 1e-12 * scale && e0.dot(e1) > 0.0 {
                removed = true;
                continue;
            }
            out.push(cur);
        }
        r = out;
        if !removed {
            return r;
        }
    }
}

/// A point just inside the hole (on the right of its first edge).
fn interior_probe_of_hole(hole: &[Point]) -> Point {
    let (a, b) = (hole[0], hole[1]);
    let mid = a.lerp(b, 0.5);
    let len = (b - a).norm();
    let dir = (b - a) * (1.0 / len);
    mid - dir.perp() * (1e-6 * len).max(EPS * 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::Ellipse;
    use rand::SeedableRng;

    fn square(x0: f64, y0: f64, s: f64) -> Region {
        Region::from_convex(&ConvexPolygon::rectangle(x0, y0, x0 + s, y0 + s).unwrap())
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn intersect_is_idempotent() {
        let e = Ellipse::new(Point::new(0.2, 0.1), 1.3, 0.7, 0.4).unwrap();
        let a = crate::geom2d::ellipse_to_polygon(&e, 64).unwrap();
        let i = a.intersect(&a);
        assert!(rel(i.area(), a.area()) <= 1e-12);
    }

    #[test]
    fn disjoint_squares() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(3.0, 0.0, 2.0);
        assert!(a.intersect(&b).is_empty());
        assert!(rel(a.union(&b).area(), 5.0) < 1e-15);
        assert!(!a.overlaps(&b));
    }

    #[test]
    fn overlapping_strip_difference() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(0.5, 0.0, 1.0);
        assert!(rel(a.difference(&b).area(), 0.5) < 1e-15);
        assert!(rel(a.intersect(&b).area(), 0.5) < 1e-15);
        assert!(rel(a.union(&b).area(), 1.5) < 1e-15);
        let rings = a.union(&b).polygons().to_vec();
        assert_eq!(rings.len(), 1);
        assert_eq!(rings[0].outer.len(), 4);
    }

    #[test]
    fn square_with_hole() {
        let outer = square(0.0, 0.0, 1.0);
        let hole = square(0.25, 0.25, 0.5);
        let r = outer.difference(&hole);
        assert!(rel(r.area(), 0.75) < 1e-15);
        let polys = r.polygons();
        assert_eq!(polys.len(), 1);
        assert_eq!(polys[0].holes.len(), 1);
        assert!(signed_area(&polys[0].holes[0]) < 0.0);
        assert!(rel(polys[0].area(), 0.75) < 1e-12);
        assert_eq!(r.locate(Point::new(0.5, 0.5), EPS), Location::Outside);
        assert_eq!(r.locate(Point::new(0.1, 0.5), EPS), Location::Inside);
        assert_eq!(r.locate(Point::new(0.25, 0.5), EPS), Location::Boundary);
    }

    #[test]
    fn from_rings_with_hole_and_nonconvex_outer() {
        let ring = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        let hole = vec![
            Point::new(0.25, 0.25),
            Point::new(0.25, 0.75),
            Point::new(0.75, 0.75),
            Point::new(0.75, 0.25),
        ];
        let r = Region::from_rings(&ring, &[hole]).unwrap();
        assert!(rel(r.area(), 0.75) < 1e-14);

        let l_shape = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 2.0),
            Point::new(0.0, 2.0),
        ];
        let l = Region::from_rings(&l_shape, &[]).unwrap();
        assert!(rel(l.area(), 3.0) < 1e-14);
        assert_eq!(l.polygons().len(), 1);
        assert_eq!(l.polygons()[0].outer.len(), 6);

        let bowtie = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(Region::from_rings(&bowtie, &[]).is_err());
    }

    #[test]
    fn seam_points_are_interior() {
        // Union of two adjacent squares: the shared edge is not a boundary.
        let a = square(0.0, 0.0, 1.0);
        let b = square(1.0, 0.0, 1.0);
        let u = a.union(&b);
        assert_eq!(u.locate(Point::new(1.0, 0.5), EPS), Location::Inside);
        assert_eq!(u.locate(Point::new(2.0, 0.5), EPS), Location::Boundary);
        assert!(u.contains(Point::new(1.0, 0.5), true));
    }

    #[test]
    fn pinch_vertex_keeps_two_rings() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(1.0, 1.0, 1.0);
        let u = a.union(&b);
        let polys = u.polygons();
        assert_eq!(polys.len(), 2);
        assert!(polys.iter().all(|p| p.outer.len() == 4 && p.holes.is_empty()));
    }

    #[test]
    fn samples_land_inside() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let r = square(0.0, 0.0, 2.0).difference(&square(0.5, 0.5, 1.0));
        for _ in 0..500 {
            let p = r.sample(&mut rng).unwrap();
            assert!(r.contains(p, false));
        }
        assert!(Region::empty().sample(&mut rng).is_none());
    }
}
