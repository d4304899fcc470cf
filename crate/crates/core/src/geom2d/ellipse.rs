use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::point::{Mat2, Point};
use super::{Location, Region, Shape};
use crate::error::{Error, Result};

/// Filled ellipse `{ c + R(θ)·(u, v) : (u/a)² + (v/b)² ≤ 1 }`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    pub center: Point,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Direction of the semi-major axis, radians.
    pub orientation: f64,
}

impl Ellipse {
    /// `a ≥ b` is accepted up to a relative `1e-12`, since the two axes of a
    /// circle are usually computed along different arithmetic paths.
    pub fn new(center: Point, semi_major: f64, semi_minor: f64, orientation: f64) -> Result<Self> {
        let e = Self {
            center,
            semi_major,
            semi_minor,
            orientation,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn circle(center: Point, radius: f64) -> Result<Self> {
        Self::new(center, radius, radius, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = (self.semi_major, self.semi_minor);
        if !(a.is_finite() && b.is_finite() && self.center.is_finite() && self.orientation.is_finite()) {
            return Err(Error::DegenerateShape(format!("non-finite ellipse {self:?}")));
        }
        if a <= 0.0 || b <= 0.0 {
            return Err(Error::DegenerateShape(format!(
                "ellipse semi-axes must be positive, got a={a}, b={b}"
            )));
        }
        if b > a * (1.0 + 1e-12) {
            return Err(Error::DegenerateShape(format!(
                "semi-major axis {a} is shorter than semi-minor axis {b}"
            )));
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        PI * self.semi_major * self.semi_minor
    }

    /// `‖diag(1/a, 1/b)·Rᵀ(θ)·(p − c)‖²`; `≤ 1` inside.
    #[inline]
    pub fn quadratic_form(&self, p: Point) -> f64 {
        let local = (p - self.center).rotate(-self.orientation);
        let u = local.x / self.semi_major;
        let v = local.y / self.semi_minor;
        u * u + v * v
    }

    /// Boundary point at parameter `t`.
    #[inline]
    pub fn point_at(&self, t: f64) -> Point {
        let (s, c) = t.sin_cos();
        self.center + Point::new(self.semi_major * c, self.semi_minor * s).rotate(self.orientation)
    }

    /// Outward unit normal at parameter `t`.
    pub fn normal_at(&self, t: f64) -> Point {
        let (s, c) = t.sin_cos();
        Point::new(c / self.semi_major, s / self.semi_minor)
            .rotate(self.orientation)
            .normalized()
            .expect("positive semi-axes")
    }

    /// `‖dγ/dt‖` at parameter `t`.
    pub fn speed_at(&self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        (self.semi_major * s).hypot(self.semi_minor * c)
    }

    pub fn rotation(&self) -> Mat2 {
        Mat2::rotation(self.orientation)
    }

    /// Axis-aligned half-extents of the ellipse.
    pub fn half_extents(&self) -> (f64, f64) {
        let (s, c) = self.orientation.sin_cos();
        let (a, b) = (self.semi_major, self.semi_minor);
        ((a * c).hypot(b * s), (a * s).hypot(b * c))
    }

    /// Horizontal chord at height `y`: the `x` interval where the ellipse
    /// meets that line, if any.
    pub fn chord_at(&self, y: f64) -> Option<(f64, f64)> {
        let (s, c) = self.orientation.sin_cos();
        let ia2 = 1.0 / (self.semi_major * self.semi_major);
        let ib2 = 1.0 / (self.semi_minor * self.semi_minor);
        // Quadratic form matrix R·diag(1/a², 1/b²)·Rᵀ.
        let m11 = c * c * ia2 + s * s * ib2;
        let m12 = c * s * (ia2 - ib2);
        let m22 = s * s * ia2 + c * c * ib2;
        let dy = y - self.center.y;
        // m11·dx² + 2·m12·dy·dx + m22·dy² − 1 = 0
        let bq = m12 * dy;
        let disc = bq * bq - m11 * (m22 * dy * dy - 1.0);
        if disc <= 0.0 {
            return None;
        }
        let root = disc.sqrt();
        let x0 = (-bq - root) / m11;
        let x1 = (-bq + root) / m11;
        Some((self.center.x + x0, self.center.x + x1))
    }

    /// Inscribed convex polygon with `n_vertices` vertices on the ellipse at
    /// `t_k = 2πk/n`.
    pub fn to_polygon_ring(&self, n_vertices: usize) -> Result<Vec<Point>> {
        self.validate()?;
        if n_vertices < 4 {
            return Err(Error::DegenerateShape(format!(
                "ellipse polygonization needs at least 4 vertices, got {n_vertices}"
            )));
        }
        Ok((0..n_vertices)
            .map(|k| self.point_at(TAU * k as f64 / n_vertices as f64))
            .collect())
    }
}

impl Shape for Ellipse {
    /// Uses the exact quadratic form; `tol` is a tolerance on its value.
    fn locate(&self, p: Point, tol: f64) -> Location {
        let s = self.quadratic_form(p);
        if s < 1.0 - tol {
            Location::Inside
        } else if s <= 1.0 + tol {
            Location::Boundary
        } else {
            Location::Outside
        }
    }
}

/// Polygonizes an ellipse into a single-piece region.
///
/// Scenarios require at least 8 vertices; this lower-level routine accepts 4
/// so the inscribed square is expressible.
pub fn ellipse_to_polygon(e: &Ellipse, n_vertices: usize) -> Result<Region> {
    Ok(Region::from_convex_ring(e.to_polygon_ring(n_vertices)?))
}
