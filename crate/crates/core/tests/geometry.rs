use proptest::prelude::*;

use ptz_coverage::geom2d::{
    ellipse_to_polygon, project_to_polygon, ConvexPolygon, Ellipse, Location, Point, Region, Shape,
};

fn ellipse() -> impl Strategy<Value = Ellipse> {
    (-3.0..3.0f64, -3.0..3.0f64, 0.3..3.0f64, 0.2..1.0f64, -3.2..3.2f64)
        .prop_map(|(x, y, a, ratio, th)| Ellipse::new(Point::new(x, y), a, a * ratio, th).unwrap())
}

/// Non-convex regions: unions of two polygonized ellipses.
fn region() -> impl Strategy<Value = Region> {
    (ellipse(), ellipse(), 8usize..40).prop_map(|(a, b, n)| {
        ellipse_to_polygon(&a, n)
            .unwrap()
            .union(&ellipse_to_polygon(&b, n + 3).unwrap())
    })
}

fn close(x: f64, y: f64, scale: f64) -> bool {
    (x - y).abs() <= 1e-9 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inclusion_exclusion(a in region(), b in region()) {
        let (u, i) = (a.union(&b), a.intersect(&b));
        let scale = a.area() + b.area();
        prop_assert!(close(u.area() + i.area(), a.area() + b.area(), scale));
    }

    #[test]
    fn differences_and_intersection_split_the_union(a in region(), b in region()) {
        let parts = a.difference(&b).area() + a.intersect(&b).area() + b.difference(&a).area();
        prop_assert!(close(parts, a.union(&b).area(), a.area() + b.area()));
    }

    #[test]
    fn polygon_area_grows_with_vertex_count(e in ellipse(), n in 8usize..200) {
        let lo = ellipse_to_polygon(&e, n).unwrap().area();
        let hi = ellipse_to_polygon(&e, n + 1).unwrap().area();
        prop_assert!(lo <= hi * (1.0 + 1e-12));
        prop_assert!(hi <= e.area() * (1.0 + 1e-12));
    }

    #[test]
    fn polygon_vertices_lie_on_the_ellipse(e in ellipse(), n in 8usize..64) {
        for p in e.to_polygon_ring(n).unwrap() {
            prop_assert!((e.quadratic_form(p) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_lands_in_the_polygon(
        r in 0.5..10.0f64,
        n in 3usize..12,
        phase in 0.0..6.3f64,
        x in -30.0..30.0f64,
        y in -30.0..30.0f64,
    ) {
        let poly = ConvexPolygon::regular(Point::ORIGIN, r, n, phase).unwrap();
        let p = Point::new(x, y);
        let q = project_to_polygon(&poly, p);
        prop_assert!(poly.contains(q, false));
        prop_assert!(q.distance(project_to_polygon(&poly, q)) < 1e-12);
        if poly.locate(p, 0.0) != Location::Outside {
            prop_assert_eq!(q, p);
        }
    }
}
