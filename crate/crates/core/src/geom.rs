//! Points, segments, disks and circular arcs in the plane.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Arcs whose sweep is below this are rejected as degenerate.
pub const MIN_SWEEP: f64 = 1e-12;

/// Default number of uniform samples used by [`arc_min_distance_to_origin`].
pub const DEFAULT_ARC_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(radius: f64, angle: f64) -> Self {
        Self::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn reflect_x(self) -> Self {
        Self::new(self.x, -self.y)
    }

    pub fn reflect_y(self) -> Self {
        Self::new(-self.x, self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

/// Unsigned angle in `[0, pi]` between two nonzero vectors.
pub fn angle_between(u: Point2, v: Point2) -> f64 {
    u.cross(v).abs().atan2(u.dot(v))
}

pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
    /// Set when `a == b` is intended.
    #[serde(default)]
    pub degenerate: bool,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(invalid("segment endpoints must be finite"));
        }
        if a == b {
            return Err(invalid("segment endpoints coincide; use Segment::degenerate"));
        }
        Ok(Self { a, b, degenerate: false })
    }

    pub fn degenerate(p: Point2) -> Self {
        Self { a: p, b: p, degenerate: true }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn midpoint(&self) -> Point2 {
        (self.a + self.b) * 0.5
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        let d = Self { center, radius };
        d.validate()?;
        Ok(d)
    }

    pub fn unit() -> Self {
        Self { center: Point2::ORIGIN, radius: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() {
            return Err(invalid("disk center must be finite"));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(invalid(format!("disk radius must be positive, got {}", self.radius)));
        }
        Ok(())
    }

    /// Open-disk membership.
    pub fn contains(&self, p: Point2) -> bool {
        let d = p - self.center;
        d.dot(d) < self.radius * self.radius
    }

    /// Closed-disk membership.
    pub fn contains_closed(&self, p: Point2) -> bool {
        let d = p - self.center;
        d.dot(d) <= self.radius * self.radius
    }
}

/// `(perimeter, area)` of a disk.
pub fn disk_measures(d: &Disk) -> Result<(f64, f64)> {
    d.validate()?;
    Ok((TAU * d.radius, PI * d.radius * d.radius))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Ccw,
    Cw,
}

impl Orientation {
    fn sign(self) -> f64 {
        match self {
            Orientation::Ccw => 1.0,
            Orientation::Cw => -1.0,
        }
    }
}

/// Arc of the circle `|p - center| = radius`, traversed from `start_angle` to
/// `end_angle` in the given orientation. Angles are stored in `[0, 2pi)`;
/// equal start and end angles denote the full circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularArc {
    pub center: Point2,
    pub radius: f64,
    pub start_angle: f64,
    pub end_angle: f64,
    pub orientation: Orientation,
}

impl CircularArc {
    pub fn new(
        center: Point2,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
        orientation: Orientation,
    ) -> Result<Self> {
        let arc = Self {
            center,
            radius,
            start_angle: normalize_angle(start_angle),
            end_angle: normalize_angle(end_angle),
            orientation,
        };
        arc.validate()?;
        Ok(arc)
    }

    /// Arc starting at `start_angle` with signed sweep (positive is counter-clockwise).
    pub fn from_sweep(center: Point2, radius: f64, start_angle: f64, sweep: f64) -> Result<Self> {
        if !sweep.is_finite() || sweep.abs() < MIN_SWEEP {
            return Err(invalid(format!("degenerate arc sweep {sweep}")));
        }
        if sweep.abs() > TAU {
            return Err(invalid(format!("arc sweep {sweep} exceeds a full turn")));
        }
        let orientation = if sweep > 0.0 { Orientation::Ccw } else { Orientation::Cw };
        let arc = Self::new(center, radius, start_angle, start_angle + sweep, orientation)?;
        Ok(arc)
    }

    pub fn validate(&self) -> Result<()> {
        Disk::new(self.center, self.radius)?;
        if !self.start_angle.is_finite() || !self.end_angle.is_finite() {
            return Err(invalid("arc angles must be finite"));
        }
        if self.sweep() < MIN_SWEEP {
            return Err(invalid(format!("degenerate arc sweep {}", self.sweep())));
        }
        Ok(())
    }

    /// Unsigned angular extent in `(0, 2pi]`.
    pub fn sweep(&self) -> f64 {
        let raw = match self.orientation {
            Orientation::Ccw => self.end_angle - self.start_angle,
            Orientation::Cw => self.start_angle - self.end_angle,
        };
        let s = normalize_angle(raw);
        if s == 0.0 {
            TAU
        } else {
            s
        }
    }

    pub fn length(&self) -> f64 {
        self.radius * self.sweep()
    }

    /// Angle of the point at parameter `t` in `[0, 1]`.
    pub fn angle_at(&self, t: f64) -> f64 {
        self.start_angle + self.orientation.sign() * t * self.sweep()
    }

    pub fn point_at(&self, t: f64) -> Point2 {
        self.center + Point2::polar(self.radius, self.angle_at(t))
    }

    pub fn start_point(&self) -> Point2 {
        self.point_at(0.0)
    }

    pub fn end_point(&self) -> Point2 {
        self.point_at(1.0)
    }

    /// Unit tangent at parameter `t` in the direction of traversal.
    pub fn tangent_at(&self, t: f64) -> Point2 {
        let a = self.angle_at(t);
        Point2::new(-a.sin(), a.cos()) * self.orientation.sign()
    }

    fn endpoint_tol(&self) -> f64 {
        1e-9 * self.radius.max(1.0)
    }

    /// Half-tangent at an endpoint, pointing into the arc.
    pub fn inward_half_tangent(&self, endpoint: Point2) -> Result<Point2> {
        let tol = self.endpoint_tol();
        if endpoint.dist(self.start_point()) <= tol {
            Ok(self.tangent_at(0.0))
        } else if endpoint.dist(self.end_point()) <= tol {
            Ok(self.tangent_at(1.0) * -1.0)
        } else {
            Err(invalid(format!("point ({}, {}) is not an endpoint of the arc", endpoint.x, endpoint.y)))
        }
    }

    /// Parameter in `[0, 1]` of a point lying on the arc.
    pub fn param_of(&self, p: Point2) -> Result<f64> {
        let tol = self.endpoint_tol();
        let rel = p - self.center;
        if (rel.norm() - self.radius).abs() > tol {
            return Err(invalid("point is not on the supporting circle of the arc"));
        }
        let raw = (rel.angle() - self.start_angle) * self.orientation.sign();
        let phi = normalize_angle(raw);
        let sweep = self.sweep();
        if phi <= sweep + tol / self.radius {
            Ok((phi / sweep).min(1.0))
        } else if TAU - phi <= tol / self.radius {
            Ok(0.0)
        } else {
            Err(invalid("point lies on the circle but outside the arc"))
        }
    }

    /// Reflection across the x-axis.
    pub fn reflect_x(&self) -> Self {
        let flip = match self.orientation {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
        };
        Self {
            center: self.center.reflect_x(),
            radius: self.radius,
            start_angle: normalize_angle(-self.start_angle),
            end_angle: normalize_angle(-self.end_angle),
            orientation: flip,
        }
    }
}

/// Minimum of `|p|` over the arc.
///
/// Uniform sampling of the parameter, exact endpoint evaluation, then a
/// golden-section refinement around the best sample. Returns the minimum and
/// the parameter where it is attained.
pub fn arc_min_distance_to_origin(arc: &CircularArc, samples: usize) -> Result<(f64, f64)> {
    arc.validate()?;
    if samples < 2 {
        return Err(invalid("arc sampling needs at least two samples"));
    }
    let dist = |t: f64| arc.point_at(t).norm();
    let n = samples - 1;
    let mut best_k = 0;
    let mut best = dist(0.0);
    for k in 1..=n {
        let d = dist(k as f64 / n as f64);
        if d < best {
            best = d;
            best_k = k;
        }
    }
    let mut best_t = best_k as f64 / n as f64;

    if best_k != 0 && best_k != n {
        let (mut a, mut b) = ((best_k - 1) as f64 / n as f64, (best_k + 1) as f64 / n as f64);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (dist(c), dist(d));
        for _ in 0..80 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = dist(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = dist(d);
            }
        }
        let t = 0.5 * (a + b);
        let dt = dist(t);
        if dt < best {
            best = dt;
            best_t = t;
        }
    }
    Ok((best, best_t))
}

/// Angle in `[0, pi]` between the half-tangent at `endpoint` (pointing into
/// the arc) and the segment from `endpoint` to `ray_to`.
pub fn endpoint_tangent_angle(arc: &CircularArc, endpoint: Point2, ray_to: Point2) -> Result<f64> {
    arc.validate()?;
    let t = arc.inward_half_tangent(endpoint)?;
    let v = ray_to - endpoint;
    if v.norm() == 0.0 {
        return Err(invalid("ray target coincides with the endpoint"));
    }
    Ok(angle_between(t, v))
}

/// Angle at the endpoint `p0` between the half-tangent and the chord to `p`,
/// where `p` is another point of the arc.
pub fn chord_angle_eta(arc: &CircularArc, p0: Point2, p: Point2) -> Result<f64> {
    arc.validate()?;
    let t = arc.inward_half_tangent(p0)?;
    arc.param_of(p)?;
    let v = p - p0;
    if v.norm() == 0.0 {
        return Err(invalid("chord endpoints coincide"));
    }
    Ok(angle_between(t, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn disk_measure_examples() {
        let (p, a) = disk_measures(&Disk::unit()).unwrap();
        assert!(close(p, TAU, 1e-15) && close(a, PI, 1e-15));
        let (p, a) = disk_measures(&Disk::new(Point2::ORIGIN, 0.5).unwrap()).unwrap();
        assert!(close(p, PI, 1e-15) && close(a, PI / 4.0, 1e-15));
        let (p, a) = disk_measures(&Disk::new(Point2::new(0.3, 0.1), 0.0391).unwrap()).unwrap();
        assert!(close(p, 0.245_672_545_510_722, 1e-12), "{p}");
        assert!(close(a, 0.004_802_898_264_735, 1e-12), "{a}");
    }

    #[test]
    fn disk_rejects_nonpositive_radius() {
        assert!(Disk::new(Point2::ORIGIN, 0.0).is_err());
        assert!(Disk::new(Point2::ORIGIN, -1.0).is_err());
        let bad = Disk { center: Point2::ORIGIN, radius: -0.5 };
        assert!(disk_measures(&bad).is_err());
    }

    #[test]
    fn degenerate_arcs_rejected() {
        assert!(CircularArc::from_sweep(Point2::ORIGIN, 1.0, 0.3, 1e-13).is_err());
        assert!(CircularArc::from_sweep(Point2::ORIGIN, 0.0, 0.3, 1.0).is_err());
        assert!(CircularArc::from_sweep(Point2::ORIGIN, 1.0, 0.3, 7.0).is_err());
    }

    #[test]
    fn full_circle_has_full_sweep() {
        let arc = CircularArc::from_sweep(Point2::ORIGIN, 2.0, 1.0, TAU).unwrap();
        assert!(close(arc.sweep(), TAU, 1e-12));
        assert!(close(arc.length(), 2.0 * TAU, 1e-12));
    }

    #[test]
    fn half_unit_circle_min_distance_is_one() {
        let arc = CircularArc::from_sweep(Point2::ORIGIN, 1.0, 0.0, PI).unwrap();
        let (d, t) = arc_min_distance_to_origin(&arc, DEFAULT_ARC_SAMPLES).unwrap();
        assert!(close(d, 1.0, 1e-12));
        assert!((0.0..=1.0).contains(&t));
    }

    #[test]
    fn min_distance_needs_two_samples() {
        let arc = CircularArc::from_sweep(Point2::ORIGIN, 1.0, 0.0, PI).unwrap();
        assert!(arc_min_distance_to_origin(&arc, 1).is_err());
    }

    #[test]
    fn interior_minimum_is_refined() {
        // circle through (0.5, 0) bulging toward the origin: min is interior
        let arc = CircularArc::from_sweep(Point2::new(0.8, 0.0), 0.3, PI - 1.0, 2.0).unwrap();
        let (d, t) = arc_min_distance_to_origin(&arc, 16).unwrap();
        assert!(close(d, 0.5, 1e-12), "{d}");
        assert!(close(t, 0.5, 1e-6));
    }

    #[test]
    fn tangent_angle_quarter_circle() {
        // center (1, 0), radius 1, endpoint at the origin
        let up = CircularArc::from_sweep(Point2::new(1.0, 0.0), 1.0, PI, -FRAC_PI_2).unwrap();
        let down = CircularArc::from_sweep(Point2::new(1.0, 0.0), 1.0, PI, FRAC_PI_2).unwrap();
        let o = Point2::ORIGIN;
        // tangent at the origin is vertical
        assert!(close(endpoint_tangent_angle(&up, o, Point2::new(0.0, 1.0)).unwrap(), 0.0, 1e-12));
        assert!(close(endpoint_tangent_angle(&down, o, Point2::new(0.0, 1.0)).unwrap(), PI, 1e-12));
        // the radius is perpendicular to the tangent
        assert!(close(endpoint_tangent_angle(&up, o, Point2::new(1.0, 0.0)).unwrap(), FRAC_PI_2, 1e-12));
        assert!(close(endpoint_tangent_angle(&down, o, Point2::new(-1.0, 0.0)).unwrap(), FRAC_PI_2, 1e-12));
    }

    #[test]
    fn tangent_angle_at_far_endpoint_points_back() {
        let arc = CircularArc::from_sweep(Point2::ORIGIN, 1.0, 0.0, FRAC_PI_2).unwrap();
        // at (0,1) the arc continues toward (1,0), i.e. direction +x
        let e = arc.end_point();
        let a = endpoint_tangent_angle(&arc, e, e + Point2::new(1.0, 0.0)).unwrap();
        assert!(close(a, 0.0, 1e-9));
    }

    #[test]
    fn tangent_angle_rejects_non_endpoint() {
        let arc = CircularArc::from_sweep(Point2::ORIGIN, 1.0, 0.0, PI).unwrap();
        assert!(endpoint_tangent_angle(&arc, Point2::new(0.0, 1.0), Point2::ORIGIN).is_err());
    }

    #[test]
    fn chord_angle_examples() {
        let arc = CircularArc::from_sweep(Point2::ORIGIN, 0.5, 0.0, PI).unwrap();
        let p0 = arc.start_point();
        // chord of length 0.5 on a circle of radius 0.5: central angle pi/3
        let p = Point2::polar(0.5, PI / 3.0);
        assert!(close(chord_angle_eta(&arc, p0, p).unwrap(), PI / 6.0, 1e-12));
        // diametrically opposite point
        assert!(close(chord_angle_eta(&arc, p0, arc.end_point()).unwrap(), FRAC_PI_2, 1e-12));
        // tangent limit
        let near = Point2::polar(0.5, 1e-7);
        assert!(chord_angle_eta(&arc, p0, near).unwrap() < 1e-6);
    }

    #[test]
    fn chord_angle_rejects_points_off_arc() {
        let arc = CircularArc::from_sweep(Point2::ORIGIN, 0.5, 0.0, FRAC_PI_2).unwrap();
        let p0 = arc.start_point();
        assert!(chord_angle_eta(&arc, p0, Point2::new(0.0, 0.3)).is_err());
        assert!(chord_angle_eta(&arc, p0, Point2::polar(0.5, PI)).is_err());
        assert!(chord_angle_eta(&arc, Point2::polar(0.5, 0.7), arc.end_point()).is_err());
    }

    #[test]
    fn reflect_preserves_sweep() {
        let arc = CircularArc::from_sweep(Point2::new(0.2, 0.4), 0.3, 0.5, 1.2).unwrap();
        let r = arc.reflect_x();
        assert!(close(r.sweep(), arc.sweep(), 1e-12));
        assert!(r.start_point().dist(arc.start_point().reflect_x()) < 1e-12);
        assert!(r.end_point().dist(arc.end_point().reflect_x()) < 1e-12);
    }
}
