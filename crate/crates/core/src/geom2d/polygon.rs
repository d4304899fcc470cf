use serde::{Deserialize, Serialize};

use super::point::{closest_on_segment, signed_area, BBox, Point};
use super::{Location, Shape, EPS};
use crate::error::{Error, Result};

/// A strictly convex polygon with counter-clockwise vertices.
///
/// The region of interest is always one of these.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    #[serde(skip)]
    bbox: BBox,
}

impl ConvexPolygon {
    /// Validates orientation and strict convexity.
    ///
    /// Clockwise input is rejected rather than silently reversed, so that the
    /// vertex order in a scenario file is exactly the order used internally.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::DegenerateShape(format!(
                "convex polygon needs at least 3 vertices, got {n}"
            )));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::DegenerateShape(format!("non-finite vertex {p:?}")));
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let turn = (b - a).cross(c - b);
            if turn <= 0.0 {
                return Err(Error::DegenerateShape(format!(
                    "polygon is not strictly convex and counter-clockwise at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        // Consecutive left turns can still wind more than once.
        let mut total = 0.0;
        for i in 0..n {
            let e0 = vertices[(i + 1) % n] - vertices[i];
            let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
            total += e0.cross(e1).atan2(e0.dot(e1));
        }
        if (total - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(Error::DegenerateShape("polygon winds more than once".into()));
        }
        let bbox = BBox::of_points(&vertices).expect("non-empty");
        Ok(Self { vertices, bbox })
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Self::new(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
    }

    /// Regular `n`-gon with the given circumradius, first vertex at angle `phase`.
    pub fn regular(center: Point, circumradius: f64, n: usize, phase: f64) -> Result<Self> {
        let verts = (0..n)
            .map(|k| {
                let t = phase + std::f64::consts::TAU * k as f64 / n as f64;
                center + Point::from_angle(t) * circumradius
            })
            .collect();
        Self::new(verts)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Edges as `(start, end)` pairs, interior on the left.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Euclidean-nearest point of the polygon; identity for points inside.
    pub fn project(&self, p: Point) -> Point {
        if self.locate(p, 0.0) != Location::Outside {
            return p;
        }
        let mut best = self.vertices[0];
        let mut best_d = f64::INFINITY;
        for (a, b) in self.edges() {
            let (c, _) = closest_on_segment(a, b, p);
            let d = c.distance(p);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        best
    }

    /// Horizontal chord `[x_left, x_right]` at height `y`, if any.
    pub fn chord_at(&self, y: f64) -> Option<(f64, f64)> {
        if y < self.bbox.min.y || y > self.bbox.max.y {
            return None;
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in self.edges() {
            let (y0, y1) = (a.y.min(b.y), a.y.max(b.y));
            if y < y0 || y > y1 {
                continue;
            }
            if a.y == b.y {
                lo = lo.min(a.x.min(b.x));
                hi = hi.max(a.x.max(b.x));
            } else {
                let t = (y - a.y) / (b.y - a.y);
                let x = a.x + t * (b.x - a.x);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

impl Shape for ConvexPolygon {
    fn locate(&self, p: Point, tol: f64) -> Location {
        let mut on_edge = false;
        for (a, b) in self.edges() {
            let e = b - a;
            let d = e.cross(p - a) / e.norm();
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
}

impl<'de> Deserialize<'de> for ConvexPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<[f64; 2]>,
        }
        let raw = Raw::deserialize(d)?;
        ConvexPolygon::new(raw.vertices.into_iter().map(Point::from).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// Signed distances of `ring` vertices to the directed line through `a, b`
/// (positive on the left), snapped to zero within `EPS`.
fn side_distances(ring: &[Point], a: Point, b: Point) -> Vec<f64> {
    let e = b - a;
    let len = e.norm();
    ring.iter()
        .map(|&p| {
            let d = e.cross(p - a) / len;
            if d.abs() <= EPS {
                0.0
            } else {
                d
            }
        })
        .collect()
}

/// Splits a convex ring by the directed line `a → b`.
///
/// Returns `(left, right)`. Both halves are built from one set of side
/// distances and one set of crossing points, so they share their cut edge
/// exactly.
pub(crate) fn split_convex(ring: &[Point], a: Point, b: Point) -> (Vec<Point>, Vec<Point>) {
    let d = side_distances(ring, a, b);
    if d.iter().all(|&v| v >= 0.0) {
        return (ring.to_vec(), Vec::new());
    }
    if d.iter().all(|&v| v <= 0.0) {
        return (Vec::new(), ring.to_vec());
    }
    let n = ring.len();
    let mut left = Vec::with_capacity(n + 2);
    let mut right = Vec::with_capacity(n + 2);
    for i in 0..n {
        let j = (i + 1) % n;
        let (p, dp) = (ring[i], d[i]);
        let (q, dq) = (ring[j], d[j]);
        if dp >= 0.0 {
            left.push(p);
        }
        if dp <= 0.0 {
            right.push(p);
        }
        if (dp > 0.0 && dq < 0.0) || (dp < 0.0 && dq > 0.0) {
            let x = p + (q - p) * (dp / (dp - dq));
            left.push(x);
            right.push(x);
        }
    }
    (clean_ring(left), clean_ring(right))
}

/// Keeps the part of a convex ring on the left of `a → b`.
pub(crate) fn clip_left(ring: &[Point], a: Point, b: Point) -> Vec<Point> {
    split_convex(ring, a, b).0
}

/// Intersection of two convex rings (Sutherland–Hodgman).
pub(crate) fn clip_convex(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut out = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if out.len() < 3 {
            return Vec::new();
        }
        out = clip_left(&out, clip[i], clip[(i + 1) % n]);
    }
    if out.len() < 3 {
        Vec::new()
    } else {
        out
    }
}

/// Drops repeated vertices; returns an empty ring when fewer than three remain
/// or the ring has no area.
pub(crate) fn clean_ring(mut ring: Vec<Point>) -> Vec<Point> {
    ring.dedup_by(|a, b| a.distance(*b) <= EPS * 1e-3);
    while ring.len() > 1 && ring[0].distance(ring[ring.len() - 1]) <= EPS * 1e-3 {
        ring.pop();
    }
    if ring.len() < 3 || signed_area(&ring) <= EPS * EPS {
        ring.clear();
    }
    ring
}
