//! Fat Cantor set on `[-eps, eps]` and the family of lens-shaped bumps that
//! fill its removed gaps.
//!
//! At step `i` each of the `2^(i-1)` closed segments of `C_(i-1)` loses an
//! open middle gap of length `2^(1-2i) H1(C_(i-1))`. The bump placed in a
//! level-`i` gap has half-width `delta_i = 2^(-2i) H1(C_(i-1))`, so it fills
//! the gap exactly, and its boundary is four arcs of unit circles.

use serde::{Deserialize, Serialize};

use crate::domain::{DomainSpec, ObstacleKind};
use crate::error::{invalid, Error, Result};
use crate::geom::{Disk, Point2, Segment};
use crate::interval::{self, IntervalValue};

/// Upper end of the parameter range in which the domain is a minimal Cheeger set.
pub const EPS_CERTIFIED_MAX: f64 = 1.0 / 24.0;

/// Default truncation depth for domain construction.
pub const DEFAULT_DEPTH: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CantorLevel {
    pub level: usize,
    /// `H1(C_(i-1))`.
    pub length_before: f64,
    /// Half-length of every gap at this level, equal to the bump half-width.
    pub delta: f64,
    /// Length of each closed segment of `C_i`.
    pub segment_length: f64,
}

impl CantorLevel {
    pub fn gap_count(&self) -> usize {
        1 << (self.level - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub level: usize,
    /// Index within the level, `0..2^(level-1)`, left to right.
    pub index: usize,
    pub midpoint: f64,
    pub half_length: f64,
}

/// Generative data of `C^eps_N`. Segments and gaps are expanded on demand;
/// only the per-level lengths are stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CantorParams", into = "CantorParams")]
pub struct CantorStructure {
    pub epsilon: f64,
    pub depth: usize,
    levels: Vec<CantorLevel>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CantorParams {
    epsilon: f64,
    depth: usize,
}

impl TryFrom<CantorParams> for CantorStructure {
    type Error = Error;
    fn try_from(p: CantorParams) -> Result<Self> {
        cantor_iterate(p.epsilon, p.depth)
    }
}

impl From<CantorStructure> for CantorParams {
    fn from(c: CantorStructure) -> Self {
        CantorParams { epsilon: c.epsilon, depth: c.depth }
    }
}

/// Largest depth whose segments stay well above the resolution of `epsilon`.
pub fn depth_limit(epsilon: f64) -> usize {
    let floor = 16.0 * f64::EPSILON * epsilon;
    let mut length = 2.0 * epsilon;
    let mut n = 0;
    loop {
        let k = n + 1;
        let next = length * (1.0 - 0.5f64.powi(k as i32));
        let seg = next / 2f64.powi(k as i32);
        if seg < floor || k > 1000 {
            return n;
        }
        length = next;
        n = k;
    }
}

/// Runs `depth` steps of the construction on `[-epsilon, epsilon]`.
pub fn cantor_iterate(epsilon: f64, depth: usize) -> Result<CantorStructure> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if depth == 0 {
        return Err(invalid("depth must be at least 1"));
    }
    if !(epsilon < EPS_CERTIFIED_MAX) {
        log::warn!("epsilon = {epsilon} is outside (0, 1/24); minimality is not guaranteed");
    }
    let limit = depth_limit(epsilon);
    if depth > limit {
        return Err(Error::DepthLimit { depth, limit });
    }
    let mut levels = Vec::with_capacity(depth);
    let mut length = 2.0 * epsilon;
    for i in 1..=depth {
        let delta = length * 0.25f64.powi(i as i32);
        let next = length * (1.0 - 0.5f64.powi(i as i32));
        levels.push(CantorLevel { level: i, length_before: length, delta, segment_length: next / 2f64.powi(i as i32) });
        length = next;
    }
    Ok(CantorStructure { epsilon, depth, levels })
}

impl CantorStructure {
    pub fn levels(&self) -> &[CantorLevel] {
        &self.levels
    }

    /// `H1(C_N)`.
    pub fn total_length(&self) -> f64 {
        self.levels.last().map_or(2.0 * self.epsilon, |l| l.length_before * (1.0 - 0.5f64.powi(l.level as i32)))
    }

    pub fn segment_count(&self) -> usize {
        1 << self.depth
    }

    /// Number of bumps `2^N - 1`.
    pub fn gap_count(&self) -> usize {
        (1 << self.depth) - 1
    }

    /// Offset from the center of a level-`(i-1)` segment to the centers of
    /// its two children.
    fn child_offset(&self, i: usize) -> f64 {
        let l = &self.levels[i - 1];
        l.delta + 0.5 * l.segment_length
    }

    /// Center of the segment of `C_level` with position `index` (left to right).
    fn segment_center(&self, level: usize, index: usize) -> f64 {
        let mut c = 0.0;
        for k in 1..=level {
            let bit = (index >> (level - k)) & 1;
            let off = self.child_offset(k);
            c += if bit == 1 { off } else { -off };
        }
        c
    }

    /// Closed segments of `C_N`, left to right.
    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        let half = 0.5 * self.levels[self.depth - 1].segment_length;
        (0..self.segment_count()).map(move |j| {
            let c = self.segment_center(self.depth, j);
            Segment { a: Point2::new(c - half, 0.0), b: Point2::new(c + half, 0.0), degenerate: false }
        })
    }

    /// Removed gaps, level by level (left to right within a level).
    pub fn gaps(&self) -> impl Iterator<Item = Gap> + '_ {
        self.levels.iter().flat_map(move |l| {
            (0..l.gap_count()).map(move |j| Gap {
                level: l.level,
                index: j,
                midpoint: self.segment_center(l.level - 1, j),
                half_length: l.delta,
            })
        })
    }

    /// Gap of level `<= N` whose closure contains `x`, if any.
    pub fn gap_containing(&self, x: f64) -> Option<Gap> {
        if x.abs() > self.epsilon {
            return None;
        }
        let mut c = 0.0;
        let mut index = 0usize;
        for l in &self.levels {
            if (x - c).abs() <= l.delta {
                return Some(Gap { level: l.level, index, midpoint: c, half_length: l.delta });
            }
            let off = l.delta + 0.5 * l.segment_length;
            if x > c {
                c += off;
                index = 2 * index + 1;
            } else {
                c -= off;
                index *= 2;
            }
        }
        None
    }

    /// Value of the summed bump profile `f(x)` over the truncated family.
    pub fn profile(&self, x: f64) -> f64 {
        self.gap_containing(x).map_or(0.0, |g| bump_profile(g.half_length, x - g.midpoint))
    }

    /// Membership in the closed union of bumps of level `<= N`.
    pub fn in_bumps(&self, p: Point2) -> bool {
        let h = self.max_height();
        if p.y.abs() > h {
            return false;
        }
        match self.gap_containing(p.x) {
            Some(g) => p.y.abs() <= bump_profile(g.half_length, p.x - g.midpoint),
            None => false,
        }
    }

    /// Height of the tallest bump.
    pub fn max_height(&self) -> f64 {
        bump_profile(self.levels[0].delta, 0.0)
    }
}

/// Enclosure of `H1(C^eps) = 2 eps prod_(k>=1) (1 - 2^-k)` from the partial
/// product up to `depth` and two-sided bounds on the tail of the log-sum,
/// `-x/(1-x) <= log(1-x) <= -x`.
pub fn fat_cantor_length(epsilon: f64, depth: usize) -> Result<IntervalValue> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(invalid(format!("epsilon must be nonnegative, got {epsilon}")));
    }
    if depth == 0 {
        return Err(invalid("depth must be at least 1"));
    }
    if epsilon == 0.0 {
        return Ok(IntervalValue::exact(0.0));
    }
    let mut partial = 2.0 * epsilon;
    for k in 1..=depth {
        partial *= 1.0 - 0.5f64.powi(k as i32);
    }
    // each factor is exact in binary; each product adds at most half an ulp
    let partial = IntervalValue::around(partial, depth as u32 + 1);
    let tail_sum = 0.5f64.powi(depth as i32); // sum_{k>N} 2^-k
    let tail_lo = -tail_sum / (1.0 - 0.5f64.powi(depth as i32 + 1));
    let tail_hi = -tail_sum;
    let factor = IntervalValue::outward(tail_lo.exp(), tail_hi.exp());
    let factor = IntervalValue::around(factor.lo, 2).hull(IntervalValue::around(factor.hi, 2));
    Ok(partial * factor)
}

/// Upper boundary height `1 - sqrt(1 - (|x| - delta)^2)` of `F_delta` on `(-delta, delta)`.
pub fn bump_profile(delta: f64, x: f64) -> f64 {
    let ax = x.abs();
    if !(delta > 0.0) || ax >= delta {
        return 0.0;
    }
    let t = delta - ax;
    // 1 - sqrt(1 - t^2) without cancellation
    t * t / (1.0 + (1.0 - t * t).sqrt())
}

/// `4 int_0^delta (1 - sqrt(1 - t^2)) dt`, series form for small delta.
fn bump_area(delta: f64) -> f64 {
    if delta < 0.05 {
        // 1 - sqrt(1-u) = u/2 + u^2/8 + u^3/16 + 5u^4/128 + 7u^5/256 + 21u^6/1024
        const C: [f64; 6] = [0.5, 0.125, 0.0625, 5.0 / 128.0, 7.0 / 256.0, 21.0 / 1024.0];
        let d2 = delta * delta;
        let mut pow = delta * d2;
        let mut s = 0.0;
        for (k, c) in C.iter().enumerate() {
            s += c * pow / (2 * k + 3) as f64;
            pow *= d2;
        }
        4.0 * s
    } else {
        4.0 * delta - 2.0 * delta * (1.0 - delta * delta).sqrt() - 2.0 * delta.asin()
    }
}

/// Enclosure of a computed bump area: the series branch is accurate to a few
/// ulps, the closed form loses digits to cancellation of order `delta`.
fn area_enclosure(delta: f64, area: f64) -> IntervalValue {
    if delta < 0.05 {
        IntervalValue::around(area, 16)
    } else {
        let err = 16.0 * f64::EPSILON * 4.0 * delta;
        IntervalValue::outward(area - err, area + err)
    }
}

/// `(perimeter, area)` of `F_delta`. The perimeter is the length of the four
/// unit-circle arcs, `4 arcsin(delta)`.
pub fn bump_measures(delta: f64) -> Result<(f64, f64)> {
    if !(delta >= 0.0) || delta > 0.5 {
        return Err(invalid(format!("bump half-width must lie in (0, 1/2], got {delta}")));
    }
    if delta == 0.0 {
        return Ok((0.0, 0.0));
    }
    Ok((4.0 * delta.asin(), bump_area(delta)))
}

/// Unit disk minus the closed bumps of levels `<= depth`.
pub fn build_omega_eps(epsilon: f64, depth: usize) -> Result<DomainSpec> {
    let structure = cantor_iterate(epsilon, depth)?;
    Ok(DomainSpec {
        outer: Disk::unit(),
        obstacles: ObstacleKind::CantorBumps(structure),
        truncation_note: format!("bump levels > {depth} truncated; measures carry tail intervals"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaEpsReport {
    pub perimeter: IntervalValue,
    pub area: IntervalValue,
    pub topo_boundary_h1: IntervalValue,
    pub cantor_gap: IntervalValue,
    /// `P(Omega) < H1(boundary)` certified by interval separation.
    pub strict_inequality_certified: bool,
}

/// Perimeter, area and topological boundary length of the untruncated
/// domain, with rigorous intervals for the bump levels beyond the depth.
pub fn omega_eps_measures(spec: &DomainSpec) -> Result<OmegaEpsReport> {
    spec.outer.validate()?;
    let r = spec.outer.radius;
    let disk_p = interval::PI.scale(2.0 * r);
    let disk_a = interval::PI.scale(r * r);
    let c = match &spec.obstacles {
        ObstacleKind::None => {
            return Ok(OmegaEpsReport {
                perimeter: disk_p,
                area: disk_a,
                topo_boundary_h1: disk_p,
                cantor_gap: IntervalValue::exact(0.0),
                strict_inequality_certified: false,
            })
        }
        ObstacleKind::CantorBumps(c) => c,
        ObstacleKind::Holes(_) => {
            return Err(invalid("omega_eps_measures expects a Cantor-bump domain; use porous_measures"))
        }
    };

    let gap = fat_cantor_length(c.epsilon, c.depth.max(40))?;

    let mut per = IntervalValue::exact(0.0);
    let mut area = IntervalValue::exact(0.0);
    for l in c.levels() {
        let (p, a) = bump_measures(l.delta)?;
        let count = l.gap_count() as f64;
        per = per + IntervalValue::around(p * count, 4);
        area = area + area_enclosure(l.delta, a).scale(count);
    }

    let last = c.levels().last().expect("depth >= 1");
    let n = c.depth as i32;
    let l_n = IntervalValue::around(c.total_length(), c.depth as u32 + 2);
    let l_inf = gap;
    let next_delta = l_n.hi * 0.25f64.powi(n + 1);
    debug_assert!(next_delta <= last.delta);
    let root = (1.0 - next_delta * next_delta).sqrt();

    // sum_{i>N} 2^(i-1) 4 arcsin(delta_i), delta_i in [2^-2i L_inf, 2^-2i L_N]
    let scale = 2f64.powi(1 - n);
    let per_tail = IntervalValue::outward(l_inf.lo * scale, l_n.hi * scale / root);
    let per_tail = IntervalValue::around(per_tail.lo, 2).hull(IntervalValue::around(per_tail.hi, 2));

    // |F_delta| in [2 delta^3 / 3, 4 delta^3 / (3 (1 + sqrt(1 - delta^2)))]
    let geo = 2f64.powi(-5 * (n + 1)) / (1.0 - 1.0 / 32.0);
    let area_tail_lo = l_inf.lo.powi(3) / 3.0 * geo;
    let area_tail_hi = 2.0 * l_n.hi.powi(3) / (3.0 * (1.0 + root)) * geo;
    let area_tail = IntervalValue::outward(area_tail_lo * (1.0 - 1e-12), area_tail_hi * (1.0 + 1e-12));

    let perimeter = disk_p + per + per_tail;
    let area = disk_a - area - area_tail;
    let topo = perimeter + gap;
    let certified = perimeter.strictly_below(&topo);
    if !certified {
        return Err(Error::CertificationFailure(format!(
            "perimeter {perimeter} and boundary length {topo} overlap; increase the depth"
        )));
    }
    Ok(OmegaEpsReport {
        perimeter,
        area,
        topo_boundary_h1: topo,
        cantor_gap: gap,
        strict_inequality_certified: certified,
    })
}

/// Reference value of `prod_(k>=1) (1 - 2^-k)`.
pub const CANTOR_PRODUCT: f64 = 0.288_788_095_086_602_4;

/// Sum of bump perimeters over levels `<= N`, without the outer circle.
pub fn bumps_perimeter(c: &CantorStructure) -> f64 {
    c.levels().iter().map(|l| 4.0 * l.delta.asin() * l.gap_count() as f64).sum()
}

/// Sum of bump areas over levels `<= N`.
pub fn bumps_area(c: &CantorStructure) -> f64 {
    c.levels().iter().map(|l| bump_area(l.delta) * l.gap_count() as f64).sum()
}
