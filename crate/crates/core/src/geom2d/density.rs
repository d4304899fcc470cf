use std::path::Path;

use serde::{Deserialize, Serialize};

use super::point::{BBox, Point};
use super::polygon::clip_convex;
use crate::error::{Error, Result};

/// Importance density `φ` over the plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityField {
    Uniform { value: f64 },
    Grid(GridDensity),
}

impl Default for DensityField {
    fn default() -> Self {
        DensityField::Uniform { value: 1.0 }
    }
}

impl DensityField {
    pub fn uniform(value: f64) -> Self {
        DensityField::Uniform { value }
    }

    #[inline]
    pub fn value(&self, p: Point) -> f64 {
        match self {
            DensityField::Uniform { value } => *value,
            DensityField::Grid(g) => g.value(p),
        }
    }

    /// `∫ φ` over a convex counter-clockwise ring.
    pub fn integrate_convex(&self, ring: &[Point]) -> f64 {
        match self {
            DensityField::Uniform { value } => value * super::point::signed_area(ring),
            DensityField::Grid(g) => g.integrate_convex(ring),
        }
    }

    /// `∫ φ dx` along the horizontal segment `[x0, x1] × {y}`.
    pub fn integrate_row(&self, y: f64, x0: f64, x1: f64) -> f64 {
        match self {
            DensityField::Uniform { value } => value * (x1 - x0),
            DensityField::Grid(g) => g.integrate_row(y, x0, x1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DensityField::Uniform { value } => {
                if !(value.is_finite() && *value >= 0.0) {
                    return Err(Error::config("density.value", "must be finite and non-negative"));
                }
                Ok(())
            }
            DensityField::Grid(g) => g.validate(),
        }
    }
}

/// Rectangular grid of samples with bilinear interpolation, clamped to the
/// edge values outside the sampled extent.
///
/// `values[j * nx + i]` is the sample at `(x0 + i·dx, y0 + j·dy)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDensity {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub values: Vec<f64>,
}

impl GridDensity {
    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::config("density.grid", "nx and ny must be positive"));
        }
        if self.values.len() != self.nx * self.ny {
            return Err(Error::config(
                "density.grid",
                format!("expected {} samples, found {}", self.nx * self.ny, self.values.len()),
            ));
        }
        if !(self.dx > 0.0 && self.dy > 0.0 && self.dx.is_finite() && self.dy.is_finite()) {
            return Err(Error::config("density.grid", "dx and dy must be positive"));
        }
        if let Some(v) = self.values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::config("density.grid", format!("invalid sample {v}")));
        }
        Ok(())
    }

    /// Parses the plain-text matrix format: a header line
    /// `nx ny x0 y0 dx dy` followed by `nx·ny` whitespace-separated samples in
    /// row-major order (one row per `y`).
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let header = lines.next().ok_or("missing header line")?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 6 {
            return Err(format!("header must be `nx ny x0 y0 dx dy`, got `{header}`"));
        }
        let nx: usize = h[0].parse().map_err(|e| format!("nx: {e}"))?;
        let ny: usize = h[1].parse().map_err(|e| format!("ny: {e}"))?;
        let mut nums = [0.0; 4];
        for (k, slot) in nums.iter_mut().enumerate() {
            *slot = h[k + 2].parse().map_err(|e| format!("header field {}: {e}", k + 3))?;
        }
        let values = lines
            .flat_map(|l| l.split_whitespace())
            .map(|t| t.parse::<f64>().map_err(|e| format!("sample `{t}`: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let g = GridDensity {
            nx,
            ny,
            x0: nums[0],
            y0: nums[1],
            dx: nums[2],
            dy: nums[3],
            values,
        };
        g.validate().map_err(|e| e.to_string())?;
        Ok(g)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            message,
        })
    }

    #[inline]
    fn sample(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// Cell index and fractional offset along one axis, clamped.
    #[inline]
    fn axis(coord: f64, origin: f64, step: f64, n: usize) -> (usize, f64) {
        if n == 1 {
            return (0, 0.0);
        }
        let s = ((coord - origin) / step).clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as usize).min(n - 2);
        (i, s - i as f64)
    }

    pub fn value(&self, p: Point) -> f64 {
        let (i, s) = Self::axis(p.x, self.x0, self.dx, self.nx);
        let (j, t) = Self::axis(p.y, self.y0, self.dy, self.ny);
        let i1 = (i + 1).min(self.nx - 1);
        let j1 = (j + 1).min(self.ny - 1);
        let v00 = self.sample(i, j);
        let v10 = self.sample(i1, j);
        let v01 = self.sample(i, j1);
        let v11 = self.sample(i1, j1);
        v00 * (1.0 - s) * (1.0 - t) + v10 * s * (1.0 - t) + v01 * (1.0 - s) * t + v11 * s * t
    }

    /// Breakpoints of the piecewise-bilinear interpolant along one axis,
    /// restricted to `[lo, hi]`.
    fn breaks(lo: f64, hi: f64, origin: f64, step: f64, n: usize) -> Vec<f64> {
        let mut out = vec![lo];
        for k in 0..n {
            let x = origin + step * k as f64;
            if x > lo && x < hi {
                out.push(x);
            }
        }
        out.push(hi);
        out
    }

    /// Exact integral of the interpolant over a convex ring.
    ///
    /// On every rectangle between breakpoints the clamped interpolant has the
    /// form `A + B·u + C·v + D·u·v`, so it integrates exactly against the
    /// polygon moments of the clipped ring.
    pub fn integrate_convex(&self, ring: &[Point]) -> f64 {
        let Some(bb) = BBox::of_points(ring) else {
            return 0.0;
        };
        let xs = Self::breaks(bb.min.x, bb.max.x, self.x0, self.dx, self.nx);
        let ys = Self::breaks(bb.min.y, bb.max.y, self.y0, self.dy, self.ny);
        let mut total = 0.0;
        for wy in ys.windows(2) {
            for wx in xs.windows(2) {
                let (xa, xb, ya, yb) = (wx[0], wx[1], wy[0], wy[1]);
                if xb <= xa || yb <= ya {
                    continue;
                }
                let rect = [
                    Point::new(xa, ya),
                    Point::new(xb, ya),
                    Point::new(xb, yb),
                    Point::new(xa, yb),
                ];
                let piece = clip_convex(ring, &rect);
                if piece.is_empty() {
                    continue;
                }
                let f00 = self.value(Point::new(xa, ya));
                let f10 = self.value(Point::new(xb, ya));
                let f01 = self.value(Point::new(xa, yb));
                let f11 = self.value(Point::new(xb, yb));
                let (w, h) = (xb - xa, yb - ya);
                let m = moments(&piece, Point::new(xa, ya));
                total += f00 * m.area
                    + (f10 - f00) / w * m.u
                    + (f01 - f00) / h * m.v
                    + (f11 - f10 - f01 + f00) / (w * h) * m.uv;
            }
        }
        total
    }

    /// Exact integral along a horizontal segment (the interpolant is piecewise
    /// linear in `x` at fixed `y`).
    pub fn integrate_row(&self, y: f64, x0: f64, x1: f64) -> f64 {
        if x1 <= x0 {
            return 0.0;
        }
        let xs = Self::breaks(x0, x1, self.x0, self.dx, self.nx);
        xs.windows(2)
            .map(|w| 0.5 * (w[1] - w[0]) * (self.value(Point::new(w[0], y)) + self.value(Point::new(w[1], y))))
            .sum()
    }
}

struct Moments {
    area: f64,
    u: f64,
    v: f64,
    uv: f64,
}

/// Area, first and mixed moments of a ring in coordinates relative to `origin`.
fn moments(ring: &[Point], origin: Point) -> Moments {
    let n = ring.len();
    let mut m = Moments {
        area: 0.0,
        u: 0.0,
        v: 0.0,
        uv: 0.0,
    };
    for k in 0..n {
        let p = ring[k] - origin;
        let q = ring[(k + 1) % n] - origin;
        let c = p.x * q.y - q.x * p.y;
        m.area += c;
        m.u += (p.x + q.x) * c;
        m.v += (p.y + q.y) * c;
        m.uv += c * (p.x * q.y + 2.0 * p.x * p.y + 2.0 * q.x * q.y + q.x * p.y);
    }
    m.area /= 2.0;
    m.u /= 6.0;
    m.v /= 6.0;
    m.uv /= 24.0;
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Vec<Point> {
        vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]
    }

    #[test]
    fn constant_grid_integrates_to_value_times_area() {
        let g = GridDensity {
            nx: 5,
            ny: 5,
            x0: -0.1,
            y0: -0.1,
            dx: 0.3,
            dy: 0.3,
            values: vec![2.0; 25],
        };
        let v = g.integrate_convex(&unit_square());
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn linear_ramp_matches_analytic_integral() {
        // φ = x sampled on nodes is reproduced exactly by bilinear interpolation.
        let nx = 11;
        let ny = 3;
        let values = (0..ny)
            .flat_map(|_| (0..nx).map(|i| i as f64 * 0.1))
            .collect();
        let g = GridDensity {
            nx,
            ny,
            x0: 0.0,
            y0: 0.0,
            dx: 0.1,
            dy: 0.5,
            values,
        };
        // ∫ x over the triangle (0,0),(1,0),(0,1) = 1/6.
        let tri = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        assert!((g.integrate_convex(&tri) - 1.0 / 6.0).abs() < 1e-12);
        assert!((g.integrate_row(0.3, 0.0, 1.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bilinear_product_is_exact() {
        // φ = x·y on nodes; bilinear interpolation reproduces it exactly.
        let n = 4;
        let values = (0..n)
            .flat_map(|j| (0..n).map(move |i| (i as f64) * (j as f64) / 9.0))
            .collect();
        let g = GridDensity {
            nx: n,
            ny: n,
            x0: 0.0,
            y0: 0.0,
            dx: 1.0 / 3.0,
            dy: 1.0 / 3.0,
            values,
        };
        assert!((g.integrate_convex(&unit_square()) - 0.25).abs() < 1e-12);
        assert!((g.value(Point::new(0.5, 0.5)) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn parse_text_matrix() {
        let g = GridDensity::parse("2 2 0 0 1 1\n1 2\n3 4\n").unwrap();
        assert_eq!(g.values, vec![1.0, 2.0, 3.0, 4.0]);
        assert!((g.value(Point::new(0.5, 0.5)) - 2.5).abs() < 1e-15);
        // clamped outside the sampled extent
        assert_eq!(g.value(Point::new(-5.0, -5.0)), 1.0);
        assert!(GridDensity::parse("2 2 0 0 1 1\n1 2 3\n").is_err());
        assert!(GridDensity::parse("2 2 0 0\n").is_err());
    }
}
