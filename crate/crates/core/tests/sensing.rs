use proptest::prelude::*;

use ptz_coverage::geom2d::Point;
use ptz_coverage::sensing::{quality, AgentLimits, AgentState, Footprint};

fn lims() -> AgentLimits {
    AgentLimits::with_h_max(0.3, 3.8, 15f64.to_radians(), 35f64.to_radians(), 50f64.to_radians()).unwrap()
}

/// States strictly inside the case-study limits.
fn state() -> impl Strategy<Value = AgentState> {
    let l = lims();
    (
        -5.0..5.0f64,
        -5.0..5.0f64,
        l.z_min..l.z_max,
        -3.2..3.2f64,
        -0.98 * l.h_max..0.98 * l.h_max,
        l.delta_min..l.delta_max,
        0.0..0.07f64,
    )
        .prop_map(|(x, y, z, theta, h, delta, r)| AgentState {
            q: Point::new(x, y),
            z,
            theta,
            h,
            delta,
            r,
        })
}

fn axes(s: &AgentState) -> (f64, f64) {
    let f = Footprint::new(s).unwrap();
    (f.a, f.b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn axes_grow_with_altitude_and_zoom(s in state(), dz in 1e-3..0.5f64, dd in 1e-3..0.05f64) {
        let (a, b) = axes(&s);
        let (az, bz) = axes(&AgentState { z: s.z + dz, ..s });
        prop_assert!(az > a && bz > b);
        let (ad, bd) = axes(&AgentState { delta: s.delta + dd, ..s });
        prop_assert!(ad > a && bd > b);
    }

    #[test]
    fn major_axis_grows_with_tilt(s in state(), dh in 1e-3..0.05f64) {
        let (a, _) = axes(&s);
        let h = s.h + dh.copysign(s.h);
        let (at, _) = axes(&AgentState { h, ..s });
        prop_assert!(at > a);
    }

    #[test]
    fn quality_never_improves_when_moving_away_from_the_best_setting(
        s in state(),
        dz in 0.0..0.5f64,
        dh in 0.0..0.05f64,
        dd in 0.0..0.05f64,
    ) {
        let l = lims();
        let f = quality(&s, &l).f;
        let up = |t: AgentState| quality(&t, &l).f <= f;
        let higher = up(AgentState { z: (s.z + dz).min(l.z_max), ..s });
        let steeper = up(AgentState { h: (s.h.abs() + dh).min(l.h_max).copysign(s.h), ..s });
        let wider = up(AgentState { delta: (s.delta + dd).min(l.delta_max), ..s });
        prop_assert!(higher && steeper && wider);
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn quality_partials_match_finite_differences(s in state()) {
        let l = lims();
        let q = quality(&s, &l);
        let step = 1e-5;
        let fd = |plus: AgentState, minus: AgentState| (quality(&plus, &l).f - quality(&minus, &l).f) / (2.0 * step);
        let pairs = [
            (q.df_dz, fd(AgentState { z: s.z + step, ..s }, AgentState { z: s.z - step, ..s })),
            (q.df_dh, fd(AgentState { h: s.h + step, ..s }, AgentState { h: s.h - step, ..s })),
            (q.df_ddelta, fd(AgentState { delta: s.delta + step, ..s }, AgentState { delta: s.delta - step, ..s })),
        ];
        for (analytic, numeric) in pairs {
            // Roundoff of the difference quotient is about 1e-11 absolute.
            prop_assert!((analytic - numeric).abs() <= 1e-6 * analytic.abs() + 1e-10, "{analytic} vs {numeric}");
        }
    }

    #[test]
    fn guaranteed_region_lies_in_the_pattern(s in state(), t in 0.0..6.3f64) {
        let f = Footprint::new(&s).unwrap();
        let g = f.guaranteed().unwrap();
        let p = f.boundary_point(t).unwrap();
        prop_assert!((g.quadratic_form(p) - 1.0).abs() < 1e-12);
        prop_assert!(f.pattern().quadratic_form(p) <= 1.0 + 1e-12);
    }

    #[test]
    fn level_camera_sees_a_centred_circle(s in state()) {
        let s = AgentState { h: 0.0, ..s };
        let f = Footprint::new(&s).unwrap();
        prop_assert!((f.a - f.b).abs() <= 1e-12 * s.z);
        prop_assert!(f.center.distance(s.q) <= 1e-12 * s.z);
    }
}
