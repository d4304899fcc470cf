//! Planar geometry: points, the convex region of interest, ellipses, general
//! regions with boolean operations, and density fields.

mod density;
mod ellipse;
mod point;
mod polygon;
mod region;

pub use density::{DensityField, GridDensity};
pub use ellipse::{ellipse_to_polygon, Ellipse};
pub use point::{closest_on_segment, signed_area, BBox, Mat2, Point, Vec2};
pub use polygon::ConvexPolygon;
pub use region::{area, region_difference, region_intersect, region_union, PolygonWithHoles, Region};

/// Geometric tolerance in world units for on-boundary classification and
/// degenerate-ring pruning.
pub const EPS: f64 = 1e-9;

/// Default vertex count when polygonizing ellipses.
pub const DEFAULT_POLYGON_VERTICES: usize = 64;

/// Where a point lies relative to a closed shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Point classification shared by all closed planar shapes.
pub trait Shape {
    /// Classifies `p`; points within `tol` of the boundary are `Boundary`.
    fn locate(&self, p: Point, tol: f64) -> Location;

    /// Membership with the default tolerance. `strict` excludes the boundary.
    fn contains(&self, p: Point, strict: bool) -> bool {
        match self.locate(p, EPS) {
            Location::Inside => true,
            Location::Boundary => !strict,
            Location::Outside => false,
        }
    }
}

/// Nearest point of `poly` to `p`.
pub fn project_to_polygon(poly: &ConvexPolygon, p: Point) -> Point {
    poly.project(p)
}
