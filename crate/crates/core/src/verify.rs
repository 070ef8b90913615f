//! Randomized and exhaustive checks of the geometric lemmas and inequality
//! chains behind the two constructions.
//!
//! Random trials draw from ChaCha8 with stream `k` for trial `k`, so reports
//! depend only on `(seed, parameters)` and not on scheduling.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cantor::{fat_cantor_length, omega_eps_measures};
use crate::domain::{DomainSpec, ObstacleKind};
use crate::error::{invalid, Error, Result};
use crate::geom::{
    angle_between, arc_min_distance_to_origin, chord_angle_eta, endpoint_tangent_angle, CircularArc, Point2,
    DEFAULT_ARC_SAMPLES,
};
use crate::interval::IntervalValue;
use crate::porous::{indices_from, porous_measures, validate_constraints, IndexPair, SequenceParams};
use crate::raster::RasterField;
use crate::solver::CheegerResult;

pub const LEMMA_TOL: f64 = 1e-9;
const MAX_ATTEMPTS: usize = 100_000;
const KEPT_FAILURES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub parameters: serde_json::Value,
    pub trials: usize,
    pub violations: usize,
    /// Smallest slack `lhs - rhs` over all checked cases; negative on violation.
    pub worst_margin: f64,
    #[serde(default)]
    pub rejected: usize,
    #[serde(default)]
    pub skipped: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn new(name: &str, parameters: serde_json::Value) -> Self {
        Self {
            name: name.into(),
            parameters,
            trials: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
            rejected: 0,
            skipped: 0,
            failures: Vec::new(),
        }
    }

    /// Counts one checked case with slack `margin`; below `-tol` it is a violation.
    pub fn record(&mut self, margin: f64, tol: f64, what: impl FnOnce() -> String) {
        self.trials += 1;
        // no negative zero in reports
        let margin = if margin == 0.0 { 0.0 } else { margin };
        self.worst_margin = self.worst_margin.min(margin);
        if margin < -tol {
            self.violations += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn log_rates(&self) {
        let drawn = self.trials + self.rejected;
        if drawn > 0 {
            log::info!(
                "{}: {} accepted, {} rejected ({:.1}% rejection), {} violations",
                self.name,
                self.trials,
                self.rejected,
                100.0 * self.rejected as f64 / drawn as f64,
                self.violations
            );
        }
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Closed-form extremes of `|p|` over an arc.
pub fn arc_distance_range(arc: &CircularArc) -> (f64, f64) {
    let a = arc.start_point().norm();
    let b = arc.end_point().norm();
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let c = arc.center.norm();
    if c > 0.0 {
        // nearest and farthest points of the full circle lie on the ray through the center
        let toward = normalize(arc.center.angle() + PI);
        let away = normalize(arc.center.angle());
        if on_arc(arc, toward) {
            lo = lo.min((c - arc.radius).abs());
        }
        if on_arc(arc, away) {
            hi = hi.max(c + arc.radius);
        }
    } else {
        lo = arc.radius;
        hi = arc.radius;
    }
    (lo, hi)
}

fn normalize(a: f64) -> f64 {
    a.rem_euclid(TAU)
}

fn on_arc(arc: &CircularArc, angle: f64) -> bool {
    let raw = match arc.orientation {
        crate::geom::Orientation::Ccw => angle - arc.start_angle,
        crate::geom::Orientation::Cw => arc.start_angle - angle,
    };
    normalize(raw) <= arc.sweep()
}

/// Convexity of the region bounded by `o -> a`, the arc `a -> b` and `b -> o`,
/// by checking that every turn has one sign and the total turning is one revolution.
pub fn sector_region_convex(arc: &CircularArc) -> bool {
    let a = arc.start_point();
    let b = arc.end_point();
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return false;
    }
    let sign = match arc.orientation {
        crate::geom::Orientation::Ccw => 1.0,
        crate::geom::Orientation::Cw => -1.0,
    };
    let turn = |u: Point2, v: Point2| -v.cross(u).atan2(u.dot(v));
    let d_oa = a;
    let t_a = arc.tangent_at(0.0);
    let t_b = arc.tangent_at(1.0);
    let d_bo = b * -1.0;
    let turns = [turn(d_oa, t_a), turn(t_b, d_bo), turn(d_bo, d_oa)];
    let eps = 1e-12;
    if turns.iter().any(|t| t * sign < -eps) {
        return false;
    }
    let total = turns.iter().sum::<f64>() + sign * arc.sweep();
    (total - sign * TAU).abs() < 1e-9
}

/// Minimum distance property of arcs of radius below 1/2 inside the annulus `1/2 <= |p| <= 1`.
pub fn check_arc_min_lemma(trials: usize, seed: u64) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let outcomes: Vec<(usize, Option<(f64, String)>)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let mut rejected = 0;
            for _ in 0..MAX_ATTEMPTS {
                // radii up to 0.6 so the r < 1/2 filter is exercised
                let r = rng.gen_range(0.01..0.6);
                if r >= 0.5 {
                    rejected += 1;
                    continue;
                }
                let rho = rng.gen_range(0.0f64..1.0).sqrt();
                let center = Point2::polar(rho, rng.gen_range(0.0..TAU));
                let start = rng.gen_range(0.0..TAU);
                let sweep = rng.gen_range(1e-6..PI) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let Ok(arc) = CircularArc::from_sweep(center, r, start, sweep) else {
                    rejected += 1;
                    continue;
                };
                let (lo, hi) = arc_distance_range(&arc);
                if lo < 0.5 || hi > 1.0 || !sector_region_convex(&arc) {
                    rejected += 1;
                    continue;
                }
                let (min, _) = arc_min_distance_to_origin(&arc, DEFAULT_ARC_SAMPLES).expect("valid arc");
                let bound = arc.start_point().norm().min(arc.end_point().norm());
                let what = format!("trial {k}: arc {arc:?} reaches {min} below endpoint distance {bound}");
                return (rejected, Some((min - bound, what)));
            }
            (rejected, None)
        })
        .collect();
    let mut rep = VerificationReport::new(
        "lemma21",
        serde_json::json!({ "trials": trials, "seed": seed, "tolerance": LEMMA_TOL }),
    );
    for (rej, out) in outcomes {
        rep.rejected += rej;
        match out {
            Some((m, what)) => rep.record(m, LEMMA_TOL, || what),
            None => rep.skipped += 1,
        }
    }
    rep.log_rates();
    Ok(rep)
}

fn disk_pixels(f: &RasterField, z: Point2, r: f64) -> impl Iterator<Item = usize> + '_ {
    let p = f.pixel;
    let i0 = (((z.x - r - f.origin.x) / p).floor().max(0.0)) as usize;
    let j0 = (((z.y - r - f.origin.y) / p).floor().max(0.0)) as usize;
    let i1 = ((((z.x + r - f.origin.x) / p).ceil()) as usize).min(f.nx);
    let j1 = ((((z.y + r - f.origin.y) / p).ceil()) as usize).min(f.ny);
    (j0..j1)
        .flat_map(move |j| (i0..i1).map(move |i| (i, j)))
        .filter_map(move |(i, j)| (f.center(i, j).dist(z) <= r).then_some(j * f.nx + i))
}

/// Density estimate for the computed set: small relative mass outside `E` in
/// `B_r(z)` forces `B_{2r/3}(z)` inside `E`, up to a one-pixel band.
pub fn check_density_estimate(
    result: &CheegerResult,
    domain: &RasterField,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let ind = &result.indicator;
    if ind.nx != domain.nx || ind.ny != domain.ny {
        return Err(invalid("result and domain grids differ"));
    }
    let set = result.set();
    let p = ind.pixel;
    let lo = ind.origin;
    let side = ind.nx as f64 * p;
    let outcomes: Vec<(bool, Option<(f64, String)>)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let z = Point2::new(
                lo.x + rng.gen_range(0.0..side),
                lo.y + rng.gen_range(0.0..side * ind.ny as f64 / ind.nx as f64),
            );
            let r = rng.gen_range(0.0..0.5);
            let cell = p * p;
            // resolution guard
            if PI * r * r / 36.0 < cell || r < 3.0 * p {
                return (false, None);
            }
            let inside_domain = disk_pixels(domain, z, r + p).all(|k| domain.values[k] >= 1.0);
            if !inside_domain {
                return (true, None);
            }
            let missing = disk_pixels(ind, z, r).filter(|&k| !set[k]).count() as f64 * cell;
            if missing > PI * r * r / 36.0 {
                return (false, None);
            }
            let inner = 2.0 * r / 3.0 - p;
            let bad = disk_pixels(ind, z, inner).filter(|&k| !set[k]).count();
            let what = format!("z = ({:.4}, {:.4}), r = {r:.4}: {bad} pixels of B_2r/3 outside E", z.x, z.y);
            (false, Some((-(bad as f64), what)))
        })
        .collect();
    let mut rep = VerificationReport::new(
        "density",
        serde_json::json!({ "trials": trials, "seed": seed, "grid": ind.nx, "band_pixels": 1 }),
    );
    for (rejected, out) in outcomes {
        match out {
            Some((m, what)) => rep.record(m, 0.5, || what),
            None if rejected => rep.rejected += 1,
            None => rep.skipped += 1,
        }
    }
    rep.log_rates();
    Ok(rep)
}

/// `B_{1/2}` inside the computed set, up to a one-pixel band.
pub fn check_half_disk_inclusion(result: &CheegerResult) -> bool {
    let set = result.set();
    let f = &result.indicator;
    disk_pixels(f, Point2::ORIGIN, 0.5 - f.pixel).all(|k| set[k])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcEndpointGeometry {
    pub p0: Point2,
    pub arc: CircularArc,
    /// Second point on the arc used for the chord angle.
    pub p: Point2,
    pub d0: f64,
    pub alpha: f64,
    pub eta: f64,
    pub xi: f64,
    /// Angles of the triangle `(p0, c, o)` at `p0`, `o` and `c`.
    pub gamma: f64,
    pub beta: f64,
    pub sigma: f64,
}

impl ArcEndpointGeometry {
    /// Angles derived from an arc starting at `p0` and a second arc point `p`.
    pub fn new(arc: CircularArc, p: Point2) -> Result<Self> {
        let p0 = arc.start_point();
        let alpha = endpoint_tangent_angle(&arc, p0, Point2::ORIGIN)?;
        let eta = chord_angle_eta(&arc, p0, p)?;
        let c = arc.center;
        let gamma = angle_between(c - p0, p0 * -1.0);
        let beta = if c.norm() == 0.0 { 0.0 } else { angle_between(p0, c) };
        Ok(Self { p0, arc, p, d0: 1.0 - p0.norm(), alpha, eta, xi: alpha - eta, gamma, beta, sigma: PI - gamma - beta })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleReport {
    pub skipped: Option<String>,
    pub alpha_margin: f64,
    pub xi_margin: f64,
    /// `d0/8 - |p - p0| / (2r)`.
    pub eta_margin: f64,
}

impl AngleReport {
    pub fn passed(&self) -> bool {
        self.skipped.is_none() && self.alpha_margin > 0.0 && self.xi_margin > 0.0 && self.eta_margin > 0.0
    }
}

fn skipped(reason: impl Into<String>) -> AngleReport {
    AngleReport { skipped: Some(reason.into()), alpha_margin: f64::NAN, xi_margin: f64::NAN, eta_margin: f64::NAN }
}

/// Lower bounds on the endpoint angles `alpha` and `xi`.
pub fn check_angle_bounds(g: &ArcEndpointGeometry) -> AngleReport {
    let r = g.arc.radius;
    if !(g.d0 > 0.0 && g.d0 < 1.0 / 3.0) {
        return skipped(format!("d0 = {} outside (0, 1/3)", g.d0));
    }
    if !(r > 1.0 / 3.0 && r < 0.5) {
        return skipped(format!("arc radius {r} outside (1/3, 1/2)"));
    }
    if g.p0.dist(g.arc.start_point()) > 1e-12 {
        return skipped("p0 is not the start of the arc");
    }
    let (lo, hi) = arc_distance_range(&g.arc);
    if lo < g.p0.norm() - 1e-12 {
        return skipped("p0 does not minimize |p| over the arc");
    }
    if hi > 1.0 + 1e-12 {
        return skipped("arc leaves the unit disk");
    }
    if 1.0 - hi >= g.d0 / 2.0 {
        return skipped("arc does not come within d0/2 of the unit circle");
    }
    let chord = g.p.dist(g.p0);
    if !(chord > 0.0 && chord < g.d0 / 12.0) {
        return skipped(format!("|p - p0| = {chord} outside (0, d0/12)"));
    }
    AngleReport {
        skipped: None,
        alpha_margin: g.alpha - (FRAC_PI_2 + g.d0 / 2.0),
        xi_margin: g.xi - (FRAC_PI_2 + g.d0 / 4.0),
        eta_margin: g.d0 / 8.0 - chord / (2.0 * r),
    }
}

/// Samples admissible endpoint geometries: an arc of radius in `(1/3, 1/2)`
/// leaving `p0` in the direction of increasing `|p|` and ending on the unit
/// circle or within `d0/2` of it.
pub fn sample_angle_geometry(rng: &mut impl Rng) -> Option<ArcEndpointGeometry> {
    let d0 = rng.gen_range(1e-4..1.0 / 3.0);
    let r = rng.gen_range(1.0 / 3.0 + 1e-9..0.5);
    let phi = rng.gen_range(0.0..TAU);
    let p0 = Point2::polar(1.0 - d0, phi);
    // center direction relative to the inward normal at p0
    let off = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
    let center = p0 + Point2::polar(r, phi + PI + off);
    let start = (p0 - center).angle();
    // orientation moving away from the origin
    let outward = |sign: f64| {
        CircularArc::from_sweep(center, r, start, sign * 1e-3).is_ok_and(|a| a.end_point().norm() > p0.norm())
    };
    let sign = if outward(1.0) {
        1.0
    } else if outward(-1.0) {
        -1.0
    } else {
        return None;
    };
    // sweep until the unit circle is reached, or stop short of it
    let sweep = first_exit_sweep(center, r, start, sign)?;
    let stop = if rng.gen_bool(0.5) { 1.0 } else { rng.gen_range(0.5..1.0) };
    let arc = CircularArc::from_sweep(center, r, start, sign * sweep * stop).ok()?;
    let t = rng.gen_range(1e-6..1.0);
    let target = t * d0 / 12.0;
    // chord length 2 r sin(theta/2) = target
    let theta = 2.0 * (target / (2.0 * r)).min(1.0).asin();
    if theta >= arc.sweep() {
        return None;
    }
    let p = center + Point2::polar(r, start + sign * theta);
    ArcEndpointGeometry::new(arc, p).ok()
}

// angle swept from `start` before the circle of radius r about `center` meets |p| = 1
fn first_exit_sweep(center: Point2, r: f64, start: f64, sign: f64) -> Option<f64> {
    // |center + r e(t)|^2 = 1  <=>  <center, e(t)> = (1 - |c|^2 - r^2) / (2r)
    let c = center.norm();
    if c == 0.0 {
        return None;
    }
    let k = (1.0 - c * c - r * r) / (2.0 * r * c);
    if k.abs() > 1.0 {
        return None;
    }
    let base = center.angle();
    let w = k.acos();
    let mut best: Option<f64> = None;
    for a in [base + w, base - w] {
        let s = normalize((a - start) * sign);
        if s > 1e-12 && best.is_none_or(|b| s < b) {
            best = Some(s);
        }
    }
    best.filter(|&s| s <= PI)
}

pub fn run_angle_suite(trials: usize, seed: u64) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let outcomes: Vec<(usize, Option<AngleReport>)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let mut rejected = 0;
            for _ in 0..MAX_ATTEMPTS {
                match sample_angle_geometry(&mut rng) {
                    Some(g) => {
                        let rep = check_angle_bounds(&g);
                        if rep.skipped.is_none() {
                            return (rejected, Some(rep));
                        }
                        rejected += 1;
                    }
                    None => rejected += 1,
                }
            }
            (rejected, None)
        })
        .collect();
    let mut rep = VerificationReport::new("angles", serde_json::json!({ "trials": trials, "seed": seed }));
    for (k, (rej, out)) in outcomes.into_iter().enumerate() {
        rep.rejected += rej;
        match out {
            Some(a) => {
                let m = a.alpha_margin.min(a.xi_margin).min(a.eta_margin);
                rep.record(m, 0.0, || format!("trial {k}: {a:?}"));
                // strict inequalities
                if m == 0.0 {
                    rep.violations += 1;
                }
            }
            None => rep.skipped += 1,
        }
    }
    rep.log_rates();
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompetitorReport {
    pub j: IndexPair,
    pub d_q0: f64,
    pub chord_pq_upper: f64,
    #[serde(rename = "deltaP_upper")]
    pub delta_p_upper: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    /// First step of the bound chain that failed, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_step: Option<String>,
}

/// Upper bound on the perimeter change of the competitor that fills the gap
/// between two boundary arcs meeting `B_j` at `p0` and `q0`.
pub fn check_competitor_gain(seq: &SequenceParams, j: IndexPair, p0: Point2, q0: Point2) -> Result<CompetitorReport> {
    let hole = seq.hole(j).ok_or_else(|| invalid(format!("sequence has no hole {j:?}")))?;
    let eps = seq.eps(j).expect("hole exists");
    let r = hole.radius;
    let mut rep = CompetitorReport {
        j,
        d_q0: 1.0 - q0.norm(),
        chord_pq_upper: f64::NAN,
        delta_p_upper: f64::NAN,
        passed: false,
        skipped: None,
        failed_step: None,
    };
    let tol = 1e-9 * r.max(1e-300);
    for (name, x) in [("p0", p0), ("q0", q0)] {
        if (x.dist(hole.center) - r).abs() > tol.max(4.0 * f64::EPSILON) {
            rep.skipped = Some(format!("{name} is not on the boundary of B_j"));
            return Ok(rep);
        }
    }
    competitor_chain(rep, eps, r, 1.0 - p0.norm(), p0.dist(q0))
}

// the bound chain in local quantities, so it stays meaningful when r_j is below the ulp of 1
fn competitor_chain(mut rep: CompetitorReport, eps: f64, r: f64, d_p0: f64, chord0: f64) -> Result<CompetitorReport> {
    let d = rep.d_q0;
    if d < eps / 2.0 {
        rep.skipped = Some(format!("d_q0 = {d:e} below eps_j/2"));
        return Ok(rep);
    }
    if d > d_p0 * (1.0 + 1e-12) {
        rep.skipped = Some("q0 is farther from the unit circle than p0".into());
        return Ok(rep);
    }
    let step = |rep: &mut CompetitorReport, ok: bool, name: &str| {
        if !ok && rep.failed_step.is_none() {
            rep.failed_step = Some(name.into());
        }
    };
    // both points lie on B_j
    let chord0 = chord0.min(2.0 * r);
    let sin_sigma = chord0 / (1.0 - d);
    step(&mut rep, sin_sigma <= 4.0 * r, "sin(sigma) <= 4 r_j");
    step(&mut rep, 4.0 * r <= eps / 16.0, "4 r_j <= eps_j/16");
    // sigma/2 <= sin(sigma) <= d/8 gives gamma > d/4 - sigma/2 >= d/8
    step(&mut rep, sin_sigma <= d / 8.0, "sin(sigma) <= d_q0/8");
    let cos_drop = d * d / 256.0;
    step(&mut rep, 2.0 * (d / 16.0).sin().powi(2) >= cos_drop, "cos(d_q0/8) <= 1 - d_q0^2/2^8");
    let leg = d / 16.0;
    rep.chord_pq_upper = 2.0 * leg * (1.0 - cos_drop) + chord0;
    // 2 pi r - 2 leg + chord_pq_upper, without the cancellation of the two leg terms
    rep.delta_p_upper = 2.0 * PI * r + chord0 - 2.0 * leg * cos_drop;
    let negative = rep.delta_p_upper < 0.0;
    step(&mut rep, negative, "deltaP_upper < 0");
    rep.passed = rep.failed_step.is_none();
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompetitorSweep {
    pub reports: Vec<CompetitorReport>,
    /// Indices where `2 r_j (pi + 1) < (eps_j/2)^3 / 2^11` fails.
    pub inequality_failures: Vec<IndexPair>,
    pub worst_ratio: f64,
}

/// Competitor bound for every hole with `j1 <= depth`, taking `p0`, `q0`
/// diametrically opposite on `B_j` along the tangential direction.
pub fn competitor_sweep(seq: &SequenceParams, depth: u32) -> Result<CompetitorSweep> {
    let mut reports = Vec::new();
    let mut inequality_failures = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    for j in indices_from(IndexPair::first(), depth) {
        let Some(hole) = seq.hole(j) else { break };
        let eps = seq.eps(j).expect("hole exists");
        let r = hole.radius;
        let lhs = 2.0 * r * (PI + 1.0);
        let rhs = (0.5 * eps).powi(3) / 2048.0;
        worst_ratio = worst_ratio.max(lhs / rhs);
        if !(lhs < rhs) {
            inequality_failures.push(j);
        }
        // the tangential diameter ends are both at |c|^2 + r^2 from the origin
        let rho = 1.0 - eps;
        let d = (2.0 * eps - eps * eps - r * r) / (1.0 + (rho * rho + r * r).sqrt());
        let rep = CompetitorReport {
            j,
            d_q0: d,
            chord_pq_upper: f64::NAN,
            delta_p_upper: f64::NAN,
            passed: false,
            skipped: None,
            failed_step: None,
        };
        reports.push(competitor_chain(rep, eps, r, d, 2.0 * r)?);
    }
    Ok(CompetitorSweep { reports, inequality_failures, worst_ratio })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhReport {
    pub kind: String,
    pub perimeter: IntervalValue,
    pub boundary_h1: IntervalValue,
    pub gap: IntervalValue,
    /// Perimeter equals the length of the topological boundary.
    pub equality: bool,
    /// Perimeter certified strictly below the boundary length.
    pub strict: bool,
}

/// Compares the perimeter with the one-dimensional measure of the topological boundary.
pub fn check_ph_property(spec: &DomainSpec) -> Result<PhReport> {
    match &spec.obstacles {
        ObstacleKind::None => {
            let p = crate::interval::PI.scale(2.0 * spec.outer.radius);
            Ok(PhReport {
                kind: "disk".into(),
                perimeter: p,
                boundary_h1: p,
                gap: IntervalValue::exact(0.0),
                equality: true,
                strict: false,
            })
        }
        ObstacleKind::CantorBumps(c) => {
            let rep = omega_eps_measures(spec)?;
            let gap = fat_cantor_length(c.epsilon, c.depth.max(40))?;
            Ok(PhReport {
                kind: "cantor_bumps".into(),
                perimeter: rep.perimeter,
                boundary_h1: rep.topo_boundary_h1,
                gap,
                equality: false,
                strict: rep.strict_inequality_certified,
            })
        }
        ObstacleKind::Holes(h) => {
            let seq = h
                .sequence
                .as_ref()
                .ok_or_else(|| Error::CertificationFailure("hole set carries no generating sequence".into()))?;
            let rep = porous_measures(spec, seq, h.depth as u32)?;
            // accumulation points of the holes lie on the outer circle, already counted
            Ok(PhReport {
                kind: "holes".into(),
                perimeter: rep.perimeter,
                boundary_h1: rep.perimeter,
                gap: IntervalValue::exact(0.0),
                equality: true,
                strict: false,
            })
        }
    }
}

/// Arithmetic behind the radius claim for `Omega_eps`: `h < 2/(1-eps)` and
/// `eps < 1/24` give `1/h > 2 eps`.
pub fn check_case3_radius(eps: f64) -> bool {
    eps > 0.0 && eps < 1.0 / 24.0 && (1.0 - eps) / 2.0 > 2.0 * eps
}

/// Smallest `dist(q, unit circle) / eps_j` over points `q` of holes with `j1 <= depth`.
pub fn min_boundary_distance_ratio(seq: &SequenceParams, depth: u32) -> Result<f64> {
    let rep = validate_constraints(seq, depth)?;
    if !rep.passed() {
        return Err(Error::Unvalidated(rep.failures()));
    }
    let mut worst = f64::INFINITY;
    for j in indices_from(IndexPair::first(), depth) {
        let Some(h) = seq.hole(j) else { break };
        let eps = seq.eps(j).expect("hole exists");
        // farthest point of B_j from the origin
        worst = worst.min((1.0 - h.center.norm() - h.radius) / eps);
    }
    Ok(worst)
}
