//! Camera footprint geometry, the guaranteed sensed region, coverage quality,
//! and the analytic derivatives of all three with respect to the agent state.
//!
//! A camera at altitude `z` with half view-angle `δ`, tilted by `h` and panned
//! by `θ`, sees the ellipse
//!
//! ```text
//! a   = (z/2)·[tan(h+δ) − tan(h−δ)]
//! b   = z·tan δ·√(1 + m²),        m = [tan(h+δ) + tan(h−δ)]/2
//! q_c = q + z·m·w,                w = (cos θ, sin θ)
//! ```
//!
//! with semi-major axis along `w`. Under a positioning uncertainty of radius
//! `r` the guaranteed region is the concentric ellipse with semi-axes
//! `(a − r, b − r)`, empty once `r ≥ min(a, b)`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{Ellipse, Mat2, Point, Vec2};

/// Full kinematic and camera state of one agent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    /// Ground projection of the agent position.
    pub q: Point,
    /// Altitude.
    pub z: f64,
    /// Pan: orientation of the footprint's major axis, radians.
    pub theta: f64,
    /// Tilt, radians.
    pub h: f64,
    /// Half view-angle (zoom), radians.
    pub delta: f64,
    /// Positioning uncertainty radius.
    pub r: f64,
}

/// Per-agent box constraints of the state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentLimits {
    pub z_min: f64,
    pub z_max: f64,
    pub delta_min: f64,
    pub delta_max: f64,
    /// Tilt bound; the admissible tilt interval is `(−h_max, h_max)`.
    pub h_max: f64,
}

impl AgentLimits {
    /// Limits with the widest tilt bound that keeps the footprint elliptical,
    /// `h_max = π/2 − δ_max`.
    pub fn new(z_min: f64, z_max: f64, delta_min: f64, delta_max: f64) -> Result<Self> {
        Self::with_h_max(z_min, z_max, delta_min, delta_max, FRAC_PI_2 - delta_max)
    }

    pub fn with_h_max(z_min: f64, z_max: f64, delta_min: f64, delta_max: f64, h_max: f64) -> Result<Self> {
        let l = Self {
            z_min,
            z_max,
            delta_min,
            delta_max,
            h_max,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.z_min, self.z_max, self.delta_min, self.delta_max, self.h_max];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("limits", "all limits must be finite"));
        }
        if !(self.z_min > 0.0 && self.z_min < self.z_max) {
            return Err(Error::config(
                "limits.z",
                format!("need 0 < z_min < z_max, got [{}, {}]", self.z_min, self.z_max),
            ));
        }
        if !(self.delta_min > 0.0 && self.delta_min < self.delta_max && self.delta_max < FRAC_PI_2) {
            return Err(Error::config(
                "limits.zoom",
                format!(
                    "need 0 < delta_min < delta_max < 90°, got [{}, {}] rad",
                    self.delta_min, self.delta_max
                ),
            ));
        }
        if !(self.h_max > 0.0 && self.h_max <= FRAC_PI_2 - self.delta_max + 1e-12) {
            return Err(Error::config(
                "limits.tilt_max",
                format!(
                    "need 0 < h_max <= 90° − delta_max, got {} rad with delta_max {} rad",
                    self.h_max, self.delta_max
                ),
            ));
        }
        Ok(())
    }

    /// `r < z_min·tan(δ_min)`: the guaranteed region stays nonempty at every
    /// reachable state, since `min(a, b)` is smallest at `(z_min, h = 0, δ_min)`.
    pub fn validate_uncertainty(&self, r: f64) -> Result<()> {
        let bound = self.z_min * self.delta_min.tan();
        if !(r >= 0.0 && r < bound) {
            return Err(Error::config(
                "r",
                format!("uncertainty radius must satisfy 0 <= r < z_min·tan(delta_min) = {bound}, got {r}"),
            ));
        }
        Ok(())
    }

    /// Whether `s` satisfies every box constraint (closed intervals for `z`
    /// and `δ`, open for `h`), with slack `tol`.
    pub fn admits(&self, s: &AgentState, tol: f64) -> bool {
        s.z >= self.z_min - tol
            && s.z <= self.z_max + tol
            && s.delta >= self.delta_min - tol
            && s.delta <= self.delta_max + tol
            && s.h.abs() < self.h_max + tol
    }
}

/// `p(x; x_min, x_max) = ((x − x_min)² − L²)² / L⁴` with `L = x_max − x_min`.
///
/// Equals 1 at `x_min` and 0 at `x_max`.
#[inline]
pub fn quality_term(x: f64, x_min: f64, x_max: f64) -> f64 {
    let l2 = (x_max - x_min) * (x_max - x_min);
    let d = x - x_min;
    let k = d * d - l2;
    k * k / (l2 * l2)
}

/// `dp/dx = 4(x − x_min)·((x − x_min)² − L²) / L⁴`.
#[inline]
pub fn quality_term_derivative(x: f64, x_min: f64, x_max: f64) -> f64 {
    let l2 = (x_max - x_min) * (x_max - x_min);
    let d = x - x_min;
    4.0 * d * (d * d - l2) / (l2 * l2)
}

/// Coverage quality of one agent and its partial derivatives.
///
/// Quality is uniform over the guaranteed region and independent of `q` and
/// `θ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityValue {
    pub f: f64,
    pub df_dz: f64,
    pub df_dh: f64,
    pub df_ddelta: f64,
}

/// `f = [p(z; z_min, z_max) + p(h; 0, h_max) + p(δ; δ_min, δ_max)] / 3`.
///
/// The tilt term is even in `h`.
pub fn quality(s: &AgentState, lims: &AgentLimits) -> QualityValue {
    let pz = quality_term(s.z, lims.z_min, lims.z_max);
    let ph = quality_term(s.h, 0.0, lims.h_max);
    let pd = quality_term(s.delta, lims.delta_min, lims.delta_max);
    QualityValue {
        f: (pz + ph + pd) / 3.0,
        df_dz: quality_term_derivative(s.z, lims.z_min, lims.z_max) / 3.0,
        df_dh: quality_term_derivative(s.h, 0.0, lims.h_max) / 3.0,
        df_ddelta: quality_term_derivative(s.delta, lims.delta_min, lims.delta_max) / 3.0,
    }
}

/// Derivatives of the footprint scalars `(a, b, d)` with respect to one state
/// coordinate, where `d = z·m` is the centre offset along `w`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ShapePartials {
    pub a: f64,
    pub b: f64,
    pub offset: f64,
}

/// Footprint of one state, with everything needed to evaluate boundary
/// points and Jacobians at arbitrary parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Footprint {
    pub state: AgentState,
    pub a: f64,
    pub b: f64,
    /// Signed centre offset along `w`.
    pub offset: f64,
    pub center: Point,
    /// Unit direction of the major axis.
    pub w: Vec2,
    pub d_dz: ShapePartials,
    pub d_dh: ShapePartials,
    pub d_ddelta: ShapePartials,
}

impl Footprint {
    pub fn new(s: &AgentState) -> Result<Self> {
        check_regime(s)?;
        let (z, h, delta) = (s.z, s.h, s.delta);
        let tp = (h + delta).tan();
        let tm = (h - delta).tan();
        let sp = 1.0 + tp * tp;
        let sm = 1.0 + tm * tm;
        let td = delta.tan();
        let sec2d = 1.0 + td * td;

        let m = 0.5 * (tp + tm);
        let root = (1.0 + m * m).sqrt();
        let a = 0.5 * z * (tp - tm);
        let b = z * td * root;
        let offset = z * m;

        // dm/dh and dm/dδ
        let m_h = 0.5 * (sp + sm);
        let m_d = 0.5 * (sp - sm);

        let d_dz = ShapePartials {
            a: 0.5 * (tp - tm),
            b: td * root,
            offset: m,
        };
        let d_dh = ShapePartials {
            a: 0.5 * z * (sp - sm),
            b: z * td * m * m_h / root,
            offset: z * m_h,
        };
        let d_ddelta = ShapePartials {
            a: 0.5 * z * (sp + sm),
            b: z * (sec2d * root + td * m * m_d / root),
            offset: z * m_d,
        };

        if a < b * (1.0 - 1e-12) {
            return Err(Error::Domain(format!(
                "footprint semi-major {a} below semi-minor {b} for state {s:?}"
            )));
        }
        let w = Vec2::from_angle(s.theta);
        Ok(Self {
            state: *s,
            a,
            b,
            offset,
            center: s.q + w * offset,
            w,
            d_dz,
            d_dh,
            d_ddelta,
        })
    }

    /// The full sensing pattern.
    pub fn pattern(&self) -> Ellipse {
        Ellipse {
            center: self.center,
            semi_major: self.a,
            semi_minor: self.b,
            orientation: self.state.theta,
        }
    }

    /// Semi-axes of the guaranteed region, `(a − r, b − r)`.
    pub fn guaranteed_axes(&self) -> Option<(f64, f64)> {
        let r = self.state.r;
        (r < self.a.min(self.b)).then_some((self.a - r, self.b - r))
    }

    pub fn guaranteed(&self) -> Option<Ellipse> {
        self.guaranteed_axes().map(|(ga, gb)| Ellipse {
            center: self.center,
            semi_major: ga,
            semi_minor: gb,
            orientation: self.state.theta,
        })
    }

    /// `γ(t) = q_c + R(θ)·((a − r)cos t, (b − r)sin t)`.
    pub fn boundary_point(&self, t: f64) -> Result<Point> {
        let (ga, gb) = self.guaranteed_axes().ok_or_else(empty_region_error)?;
        let (st, ct) = t.sin_cos();
        Ok(self.center + self.rotate(Vec2::new(ga * ct, gb * st)))
    }

    #[inline]
    fn rotate(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.w.x * v.x - self.w.y * v.y, self.w.y * v.x + self.w.x * v.y)
    }

    /// Jacobians of `γ(t)` with respect to each state coordinate, the outward
    /// normal, and the speed `‖dγ/dt‖`.
    pub fn jacobians(&self, t: f64) -> Result<BoundaryJacobians> {
        let (ga, gb) = self.guaranteed_axes().ok_or_else(empty_region_error)?;
        let (st, ct) = t.sin_cos();
        let local = Vec2::new(ga * ct, gb * st);
        let along = |p: &ShapePartials| self.w * p.offset + self.rotate(Vec2::new(p.a * ct, p.b * st));
        let normal = self
            .rotate(Vec2::new(ct / ga, st / gb))
            .normalized()
            .expect("positive semi-axes");
        Ok(BoundaryJacobians {
            u: Mat2::IDENTITY,
            v: along(&self.d_dz),
            // d/dθ of R(θ)·local + offset·w
            tau: self.rotate(local).perp() + self.w.perp() * self.offset,
            sigma: along(&self.d_dh),
            mu: along(&self.d_ddelta),
            normal,
            speed: (ga * st).hypot(gb * ct),
        })
    }
}

/// Partial derivatives of a boundary point of the guaranteed region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryJacobians {
    /// `∂γ/∂q` (always the identity).
    pub u: Mat2,
    /// `∂γ/∂z`
    pub v: Vec2,
    /// `∂γ/∂θ`
    pub tau: Vec2,
    /// `∂γ/∂h`
    pub sigma: Vec2,
    /// `∂γ/∂δ`
    pub mu: Vec2,
    /// Outward unit normal of the guaranteed region at `γ(t)`.
    pub normal: Vec2,
    /// `‖dγ/dt‖`.
    pub speed: f64,
}

fn empty_region_error() -> Error {
    Error::DegenerateShape("guaranteed sensed region is empty".into())
}

fn check_regime(s: &AgentState) -> Result<()> {
    let finite = [s.q.x, s.q.y, s.z, s.theta, s.h, s.delta, s.r];
    if finite.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite state {s:?}")));
    }
    if s.z <= 0.0 {
        return Err(Error::Domain(format!("altitude must be positive, got {}", s.z)));
    }
    if !(s.delta > 0.0 && s.delta < FRAC_PI_2) {
        return Err(Error::Domain(format!("half view-angle {} outside (0, π/2)", s.delta)));
    }
    if s.h.abs() >= FRAC_PI_2 - s.delta {
        return Err(Error::Domain(format!(
            "tilt {} outside the elliptical regime |h| < π/2 − δ = {}",
            s.h,
            FRAC_PI_2 - s.delta
        )));
    }
    Ok(())
}

/// Sensing pattern (camera footprint) of a state.
pub fn sensing_pattern(s: &AgentState) -> Result<Ellipse> {
    Ok(Footprint::new(s)?.pattern())
}

/// Guaranteed sensed region; `Ok(None)` when `r ≥ min(a, b)`.
pub fn guaranteed_region(s: &AgentState) -> Result<Option<Ellipse>> {
    Ok(Footprint::new(s)?.guaranteed())
}

/// Point of the guaranteed-region boundary at parameter `t`.
pub fn boundary_point(s: &AgentState, t: f64) -> Result<Point> {
    Footprint::new(s)?.boundary_point(t)
}

/// Boundary Jacobians and outward normal at parameter `t`.
pub fn boundary_jacobians(s: &AgentState, t: f64) -> Result<BoundaryJacobians> {
    Footprint::new(s)?.jacobians(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::Shape;
    use std::f64::consts::PI;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    fn state(z: f64, h: f64, delta: f64, theta: f64, r: f64) -> AgentState {
        AgentState {
            q: Point::new(0.0, 0.0),
            z,
            theta,
            h,
            delta,
            r,
        }
    }

    #[test]
    fn level_camera_sees_a_circle() {
        let e = sensing_pattern(&state(1.0, 0.0, deg(30.0), 1.234, 0.0)).unwrap();
        let t30 = deg(30.0).tan();
        assert!((e.semi_major - t30).abs() < 1e-15);
        assert!((e.semi_minor - t30).abs() < 1e-15);
        assert!(e.center.norm() < 1e-15);
        assert!((t30 - 0.57735).abs() < 1e-5);
    }

    #[test]
    fn tilted_camera_closed_forms() {
        let e = sensing_pattern(&state(1.0, deg(30.0), deg(15.0), 0.0, 0.0)).unwrap();
        // hand-evaluated: a = (tan45° − tan15°)/2, offset = (tan45° + tan15°)/2
        let t15 = deg(15.0).tan();
        let a = 0.5 * (1.0 - t15);
        let off = 0.5 * (1.0 + t15);
        let b = t15 * (1.0 + off * off).sqrt();
        assert!((e.semi_major - a).abs() < 1e-14);
        assert!((e.center.x - off).abs() < 1e-14 && e.center.y.abs() < 1e-15);
        assert!((e.semi_minor - b).abs() < 1e-14);
        assert!((a - 0.36603).abs() < 1e-5);
        assert!((off - 0.63397).abs() < 1e-5);
        assert!((b - 0.31726).abs() < 1e-5);

        let flipped = sensing_pattern(&state(1.0, deg(30.0), deg(15.0), PI, 0.0)).unwrap();
        assert!((flipped.center.x + off).abs() < 1e-14);
        assert!(flipped.center.y.abs() < 1e-14);
    }

    #[test]
    fn regime_is_enforced() {
        assert!(sensing_pattern(&state(1.0, deg(60.5), deg(30.0), 0.0, 0.0)).is_err());
        assert!(sensing_pattern(&state(1.0, deg(-61.0), deg(30.0), 0.0, 0.0)).is_err());
        assert!(sensing_pattern(&state(1.0, deg(59.0), deg(30.0), 0.0, 0.0)).is_ok());
    }

    #[test]
    fn guaranteed_region_shrinks_and_vanishes() {
        let s = state(1.0, 0.0, deg(30.0), 0.0, 0.0);
        assert_eq!(guaranteed_region(&s).unwrap().unwrap(), sensing_pattern(&s).unwrap());
        let g = guaranteed_region(&AgentState { r: 0.1, ..s }).unwrap().unwrap();
        assert!((g.semi_major - (deg(30.0).tan() - 0.1)).abs() < 1e-15);
        assert!((g.semi_major - 0.47735).abs() < 1e-5);
        assert!(guaranteed_region(&AgentState { r: 0.6, ..s }).unwrap().is_none());
        assert!(boundary_point(&AgentState { r: 0.6, ..s }, 0.0).is_err());
    }

    #[test]
    fn quality_extremes() {
        let lims = AgentLimits::with_h_max(0.3, 3.8, deg(15.0), deg(35.0), deg(50.0)).unwrap();
        let best = quality(&state(0.3, 0.0, deg(15.0), 0.0, 0.0), &lims);
        assert_eq!(best.f, 1.0);
        let near_worst = quality(&state(3.8, deg(50.0) - 1e-9, deg(35.0), 0.0, 0.0), &lims);
        assert!(near_worst.f < 1e-8);
        assert_eq!(quality_term(0.3, 0.3, 3.8), 1.0);
        assert_eq!(quality_term(3.8, 0.3, 3.8), 0.0);
        assert!((quality_term(2.05, 0.3, 3.8) - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn boundary_points_and_basic_jacobians() {
        let s = AgentState {
            q: Point::new(0.4, -0.2),
            ..state(1.3, deg(20.0), deg(25.0), 0.7, 0.05)
        };
        let fp = Footprint::new(&s).unwrap();
        let g = fp.guaranteed().unwrap();
        let (ga, gb) = fp.guaranteed_axes().unwrap();
        let p0 = fp.boundary_point(0.0).unwrap();
        assert!((p0 - (fp.center + fp.w * ga)).norm() < 1e-14);
        let p1 = fp.boundary_point(PI / 2.0).unwrap();
        assert!((p1 - (fp.center + fp.w.perp() * gb)).norm() < 1e-14);
        for k in 0..32 {
            let t = k as f64 * 0.2;
            let p = fp.boundary_point(t).unwrap();
            assert!((g.quadratic_form(p) - 1.0).abs() < 1e-12);
            assert!(g.contains(p, false));
            assert_eq!(fp.jacobians(t).unwrap().u, Mat2::IDENTITY);
        }
    }

    #[test]
    fn level_camera_altitude_jacobian() {
        let delta = deg(25.0);
        let j = boundary_jacobians(&state(1.7, 0.0, delta, 0.3, 0.0), 0.0).unwrap();
        let w = Vec2::from_angle(0.3);
        assert!((j.normal - w).norm() < 1e-14);
        assert!((j.v.dot(j.normal) - delta.tan()).abs() < 1e-14);
    }

    #[test]
    fn uncertainty_validation_is_strict() {
        let lims = AgentLimits::new(0.3, 3.8, deg(15.0), deg(35.0)).unwrap();
        let bound = 0.3 * deg(15.0).tan();
        assert!(lims.validate_uncertainty(bound).is_err());
        assert!(lims.validate_uncertainty(bound * 0.99).is_ok());
        assert!(lims.validate_uncertainty(-0.1).is_err());
    }

    #[test]
    fn limits_validation() {
        assert!(AgentLimits::new(1.0, 0.5, 0.1, 0.2).is_err());
        assert!(AgentLimits::new(0.5, 1.0, 0.3, 0.2).is_err());
        assert!(AgentLimits::with_h_max(0.5, 1.0, 0.2, 0.6, FRAC_PI_2).is_err());
        let l = AgentLimits::new(0.5, 1.0, 0.2, 0.6).unwrap();
        assert!((l.h_max - (FRAC_PI_2 - 0.6)).abs() < 1e-15);
    }
}
