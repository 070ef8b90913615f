//! The porous domain: the unit disk minus a sequence of small closed disks
//! accumulating at the boundary, together with its filled family.

use std::f64::consts::PI as PI_F64;

use serde::{Deserialize, Serialize};

use crate::domain::{DomainSpec, Hole, HoleSet, ObstacleKind};
use crate::error::{invalid, Condition, Error, Result};
use crate::geom::{Disk, Point2};
use crate::interval::{IntervalValue, PI};

/// `2^-18`, the constant of the radius-versus-depth condition.
pub const RADIUS_CUBIC_FACTOR: f64 = 1.0 / 262_144.0;
/// Bound on the total radius, `1/(2^8 + 1)`.
pub const RADIUS_SUM_MAX: f64 = 1.0 / 257.0;
/// Depth decay ratio along the successor order.
pub const DEPTH_DECAY: f64 = 0.3;
/// Upper bound required of `delta`.
pub const DELTA_MAX: f64 = 1.0 / 128.0;

// slack for comparisons between quantities computed along different rounding paths
const REL_SLACK: f64 = 8.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u32; 2]", into = "[u32; 2]")]
pub struct IndexPair {
    pub j1: u32,
    pub j2: u32,
}

impl IndexPair {
    pub fn new(j1: u32, j2: u32) -> Result<Self> {
        if j1 == 0 || j2 == 0 || j2 > j1 {
            return Err(invalid(format!("index pair ({j1}, {j2}) not in J")));
        }
        Ok(Self { j1, j2 })
    }

    pub const fn first() -> Self {
        Self { j1: 1, j2: 1 }
    }

    pub fn successor(self) -> Self {
        if self.j2 == self.j1 {
            Self { j1: self.j1 + 1, j2: 1 }
        } else {
            Self { j1: self.j1, j2: self.j2 + 1 }
        }
    }

    /// 1-based position in the successor order.
    pub fn rank(self) -> u64 {
        let j1 = self.j1 as u64;
        j1 * (j1 - 1) / 2 + self.j2 as u64
    }

    pub fn from_rank(rank: u64) -> Result<Self> {
        if rank == 0 {
            return Err(invalid("rank starts at 1"));
        }
        // largest j1 with j1(j1-1)/2 < rank
        let mut j1 = (((8 * rank) as f64).sqrt() as u64).div_ceil(2);
        while j1 * (j1 - 1) / 2 >= rank {
            j1 -= 1;
        }
        while (j1 + 1) * j1 / 2 < rank {
            j1 += 1;
        }
        let j2 = rank - j1 * (j1 - 1) / 2;
        Self::new(j1 as u32, j2 as u32)
    }

    /// Angle of the hole center, `j2 pi / (2 (j1 + 1))`.
    pub fn theta(self) -> f64 {
        self.j2 as f64 * PI_F64 / (2.0 * (self.j1 as f64 + 1.0))
    }
}

impl TryFrom<[u32; 2]> for IndexPair {
    type Error = Error;
    fn try_from(v: [u32; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<IndexPair> for [u32; 2] {
    fn from(j: IndexPair) -> Self {
        [j.j1, j.j2]
    }
}

pub fn index_successor(j: IndexPair) -> IndexPair {
    j.successor()
}

/// Indices `j` with `start <= j` and `j1 <= depth`, in successor order.
pub fn indices_from(start: IndexPair, depth: u32) -> impl Iterator<Item = IndexPair> {
    std::iter::successors(Some(start), |j| Some(j.successor())).take_while(move |j| j.j1 <= depth)
}

pub fn block_len(depth: u32) -> u64 {
    depth as u64 * (depth as u64 + 1) / 2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceParams {
    /// `eps_j = eps1 decay^(rank-1)`, `r_j = radius_factor eps_j^3`.
    Geometric { eps1: f64, decay: f64, radius_factor: f64 },
    /// Finite prefix listed in successor order from `(1,1)`.
    /// `tail_decay`, when present, certifies `eps_{j+1} <= tail_decay eps_j`
    /// and the cubic radius bound beyond the listed prefix.
    Explicit {
        eps: Vec<f64>,
        radii: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail_decay: Option<f64>,
    },
}

impl SequenceParams {
    pub fn explicit(eps: Vec<f64>, radii: Vec<f64>, tail_decay: Option<f64>) -> Result<Self> {
        if eps.len() != radii.len() || eps.is_empty() {
            return Err(invalid("explicit sequence needs matching, non-empty eps and radii"));
        }
        if eps.iter().chain(&radii).any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(invalid("explicit sequence entries must be positive and finite"));
        }
        Ok(Self::Explicit { eps, radii, tail_decay })
    }

    /// Number of listed terms, `None` when the sequence is infinite.
    pub fn listed_len(&self) -> Option<u64> {
        match self {
            Self::Geometric { .. } => None,
            Self::Explicit { eps, .. } => Some(eps.len() as u64),
        }
    }

    pub fn eps(&self, j: IndexPair) -> Option<f64> {
        let k = j.rank() - 1;
        match self {
            Self::Geometric { eps1, decay, .. } => Some(eps1 * decay.powf(k as f64)),
            Self::Explicit { eps, .. } => eps.get(k as usize).copied(),
        }
    }

    pub fn radius(&self, j: IndexPair) -> Option<f64> {
        match self {
            Self::Geometric { radius_factor, .. } => self.eps(j).map(|e| radius_factor * e * e * e),
            Self::Explicit { radii, .. } => radii.get((j.rank() - 1) as usize).copied(),
        }
    }

    pub fn rho(&self, j: IndexPair) -> Option<f64> {
        self.eps(j).map(|e| 1.0 - e)
    }

    pub fn center(&self, j: IndexPair) -> Option<Point2> {
        self.rho(j).map(|rho| Point2::polar(rho, j.theta()))
    }

    pub fn hole(&self, j: IndexPair) -> Option<Disk> {
        Some(Disk { center: self.center(j)?, radius: self.radius(j)? })
    }

    /// Enclosures of `sum r_j` and `sum r_j^2` over indices with rank above `skip`.
    /// `None` when the sequence is infinite without a tail certificate.
    pub fn tail_sums(&self, skip: u64) -> Option<(IntervalValue, IntervalValue)> {
        match self {
            Self::Geometric { eps1, decay, radius_factor } => {
                let q = decay * decay * decay;
                let r1 = radius_factor * eps1 * eps1 * eps1;
                let first = r1 * q.powf(skip as f64);
                let s1 = first / (1.0 - q);
                let s2 = first * first / (1.0 - q * q);
                Some((IntervalValue::around(s1, 16), IntervalValue::around(s2, 16)))
            }
            Self::Explicit { eps, radii, tail_decay } => {
                let d = (*tail_decay)?;
                let n = eps.len() as u64;
                let mut s1 = IntervalValue::exact(0.0);
                let mut s2 = IntervalValue::exact(0.0);
                for k in skip.min(n)..n {
                    let r = radii[k as usize];
                    s1 = s1 + IntervalValue::exact(r);
                    s2 = s2 + IntervalValue::exact(r) * IntervalValue::exact(r);
                }
                // unlisted continuation: eps_k <= eps_last d^m, r <= 2^-18 eps^3
                let last = *eps.last().expect("non-empty");
                let skipped = skip.saturating_sub(n);
                let q = d * d * d;
                let first = RADIUS_CUBIC_FACTOR * last * last * last * q.powf(skipped as f64 + 1.0);
                let t1 = first / (1.0 - q) * (1.0 + REL_SLACK);
                let t2 = first * first / (1.0 - q * q) * (1.0 + REL_SLACK);
                Some((
                    IntervalValue::new(s1.lo, (s1 + IntervalValue::exact(t1)).hi).ok()?,
                    IntervalValue::new(s2.lo, (s2 + IntervalValue::exact(t2)).hi).ok()?,
                ))
            }
        }
    }

    fn tail_decay_ok(&self) -> Option<bool> {
        match self {
            Self::Geometric { decay, radius_factor, .. } => {
                Some(*decay > 0.0 && *decay <= DEPTH_DECAY && *radius_factor <= RADIUS_CUBIC_FACTOR)
            }
            Self::Explicit { tail_decay, .. } => tail_decay.map(|d| d > 0.0 && d <= DEPTH_DECAY),
        }
    }
}

pub fn default_sequences(eps1: f64, safety: f64) -> Result<SequenceParams> {
    if !(eps1 > 0.0 && eps1 < 0.25) {
        return Err(Error::InvalidParameters {
            condition: Condition::FirstDepth,
            detail: format!("eps1 = {eps1} must lie in (0, 1/4)"),
        });
    }
    if !(safety > 0.0 && safety <= 1.0) {
        return Err(invalid(format!("safety = {safety} must lie in (0, 1]")));
    }
    let seq = SequenceParams::Geometric { eps1, decay: DEPTH_DECAY, radius_factor: safety * RADIUS_CUBIC_FACTOR };
    let (sum, _) = seq.tail_sums(0).expect("geometric tails are closed form");
    if sum.hi > RADIUS_SUM_MAX {
        return Err(Error::InvalidParameters {
            condition: Condition::RadiusSum,
            detail: format!("sum of radii {} exceeds 1/257", sum.hi),
        });
    }
    Ok(seq)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub passed: bool,
    /// Smallest slack observed; negative when violated.
    pub worst_margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub depth: u32,
    pub checked_indices: u64,
    pub tail_certified: bool,
    pub checks: Vec<ConditionCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<Condition> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.condition).collect()
    }

    pub fn check(&self, c: Condition) -> Option<&ConditionCheck> {
        self.checks.iter().find(|x| x.condition == c)
    }
}

struct Tracker {
    condition: Condition,
    worst: f64,
    detail: String,
}

impl Tracker {
    fn new(condition: Condition) -> Self {
        Self { condition, worst: f64::INFINITY, detail: String::new() }
    }

    // margin is relative slack; below -REL_SLACK is a violation
    fn record(&mut self, margin: f64, what: impl FnOnce() -> String) {
        if margin < self.worst {
            self.worst = margin;
            if margin < -REL_SLACK {
                self.detail = what();
            }
        }
    }

    fn finish(self) -> ConditionCheck {
        ConditionCheck {
            condition: self.condition,
            passed: self.worst >= -REL_SLACK,
            worst_margin: self.worst,
            detail: self.detail,
        }
    }
}

/// Checks the admissibility conditions exhaustively on the blocks `j1 <= depth`;
/// tails beyond are covered by the sequence's decay certificate.
pub fn validate_constraints(seq: &SequenceParams, depth: u32) -> Result<ValidationReport> {
    if depth == 0 {
        return Err(invalid("validation depth must be at least 1"));
    }
    let mut limit = block_len(depth);
    if let Some(n) = seq.listed_len() {
        limit = limit.min(n);
    }
    let idx: Vec<IndexPair> = (1..=limit).map(|r| IndexPair::from_rank(r).expect("rank >= 1")).collect();
    let eps: Vec<f64> = idx.iter().map(|&j| seq.eps(j).expect("listed")).collect();
    let rad: Vec<f64> = idx.iter().map(|&j| seq.radius(j).expect("listed")).collect();
    // successor of the last checked index, when defined
    let next = IndexPair::from_rank(limit + 1).ok().and_then(|j| Some((seq.eps(j)?, seq.radius(j)?)));

    let tails = seq.tail_sums(0);
    let tail_certified = tails.is_some() && seq.tail_decay_ok() == Some(true);
    let mut checks = Vec::new();

    let mut t = Tracker::new(Condition::RadiusSum);
    match tails {
        Some((s1, _)) => {
            t.record((RADIUS_SUM_MAX - s1.hi) / RADIUS_SUM_MAX, || format!("sum of radii <= {} exceeds 1/257", s1.hi))
        }
        None => {
            let partial: f64 = rad.iter().sum();
            t.record((RADIUS_SUM_MAX - partial) / RADIUS_SUM_MAX, || {
                format!("partial sum of radii {partial} exceeds 1/257")
            });
        }
    }
    checks.push(t.finish());

    let first_ok = eps[0] < 0.25;
    checks.push(ConditionCheck {
        condition: Condition::FirstDepth,
        passed: first_ok,
        worst_margin: (0.25 - eps[0]) / 0.25,
        detail: if first_ok { String::new() } else { format!("eps(1,1) = {} is not below 1/4", eps[0]) },
    });

    let mut decay = Tracker::new(Condition::DepthDecay);
    let mut cubic = Tracker::new(Condition::RadiusCubic);
    let mut spacing = Tracker::new(Condition::Spacing);
    let mut contained = Tracker::new(Condition::Contained);
    for k in 0..eps.len() {
        let (e, r) = (eps[k], rad[k]);
        let bound = RADIUS_CUBIC_FACTOR * e * e * e;
        cubic.record((bound - r) / bound, || format!("r{:?} = {r:e} exceeds 2^-18 eps^3 = {bound:e}", idx[k]));
        contained.record((e - r) / e, || format!("hole {:?} reaches the unit circle", idx[k]));
        let succ = if k + 1 < eps.len() { Some((eps[k + 1], rad[k + 1])) } else { next };
        if let Some((e2, r2)) = succ {
            let lim = DEPTH_DECAY * e;
            decay.record((lim - e2) / lim, || format!("eps after {:?} is {e2:e} > 0.3 * {e:e}", idx[k]));
            let lhs = e - 2.0 * e2;
            let rhs = r + 2.0 * r2;
            spacing.record((lhs - rhs) / e, || format!("spacing fails after {:?}: {lhs:e} < {rhs:e}", idx[k]));
        }
    }
    if seq.tail_decay_ok() == Some(false) {
        decay.record(-1.0, || "tail decay exceeds 3/10 or radius factor exceeds 2^-18".into());
    }
    checks.push(decay.finish());
    checks.push(cubic.finish());
    checks.push(spacing.finish());
    checks.push(contained.finish());

    let mut disjoint = Tracker::new(Condition::Disjoint);
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            let d = center_distance(idx[a], eps[a], idx[b], eps[b]);
            let sum = rad[a] + rad[b];
            disjoint.record((d - sum) / d.max(sum), || format!("holes {:?} and {:?} overlap", idx[a], idx[b]));
        }
    }
    let mut dcheck = disjoint.finish();
    // touching closures are not disjoint
    if dcheck.worst_margin <= 0.0 {
        dcheck.passed = false;
    }
    checks.push(dcheck);

    Ok(ValidationReport { depth, checked_indices: limit, tail_certified, checks })
}

/// `|x_a - x_b|` without cancellation in the angular part.
pub fn center_distance(a: IndexPair, eps_a: f64, b: IndexPair, eps_b: f64) -> f64 {
    // dtheta = pi (a2 (b1+1) - b2 (a1+1)) / (2 (a1+1) (b1+1)), numerator exact in integers
    let num = a.j2 as i64 * (b.j1 as i64 + 1) - b.j2 as i64 * (a.j1 as i64 + 1);
    let den = 2 * (a.j1 as i64 + 1) * (b.j1 as i64 + 1);
    let half = 0.5 * PI_F64 * num as f64 / den as f64;
    let s = half.sin();
    let radial = eps_a - eps_b;
    (radial * radial + 4.0 * (1.0 - eps_a) * (1.0 - eps_b) * s * s).sqrt()
}

/// Unit disk minus the closed holes `B_j` with `start <= j` and `j1 <= depth`.
pub fn build_omega0(seq: &SequenceParams, depth: u32, start: IndexPair) -> Result<DomainSpec> {
    let report = validate_constraints(seq, depth)?;
    if !report.passed() {
        return Err(Error::Unvalidated(report.failures()));
    }
    let holes: Vec<Hole> = indices_from(start, depth)
        .map_while(|j| {
            let d = seq.hole(j)?;
            Some(Hole { index: Some(j), center: d.center, radius: d.radius })
        })
        .collect();
    let note = match seq.tail_sums(block_len(depth)) {
        Some((t, _)) => format!("holes with j1 > {depth} omitted; their radii sum to at most {:e}", t.hi),
        None => format!("holes with j1 > {depth} omitted; no tail certificate"),
    };
    Ok(DomainSpec {
        outer: Disk::unit(),
        obstacles: ObstacleKind::Holes(HoleSet { holes, sequence: Some(seq.clone()), depth: depth as usize, start }),
        truncation_note: note,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PorousReport {
    pub perimeter: IntervalValue,
    pub area: IntervalValue,
    /// Upper end of `delta_interval`.
    pub delta: f64,
    pub delta_interval: IntervalValue,
    pub delta_bound_ok: bool,
    pub h_upper: f64,
}

/// Measures of the untruncated domain whose first `depth` blocks are listed in `spec`.
pub fn porous_measures(spec: &DomainSpec, seq: &SequenceParams, depth: u32) -> Result<PorousReport> {
    let two_pi = PI.scale(2.0);
    let holes = match &spec.obstacles {
        ObstacleKind::None => {
            return Ok(PorousReport {
                perimeter: two_pi,
                area: PI,
                delta: 0.0,
                delta_interval: IntervalValue::exact(0.0),
                delta_bound_ok: true,
                h_upper: 2.0,
            })
        }
        ObstacleKind::Holes(h) => &h.holes,
        ObstacleKind::CantorBumps(_) => {
            return Err(invalid("porous_measures needs a hole domain"));
        }
    };
    let (t1, t2) = seq
        .tail_sums(block_len(depth))
        .ok_or_else(|| Error::CertificationFailure("sequence has no decay certificate for its tail".into()))?;
    if seq.tail_decay_ok() != Some(true) {
        return Err(Error::CertificationFailure("tail decay certificate exceeds 3/10".into()));
    }
    let mut s1 = t1;
    let mut s2 = t2;
    for h in holes {
        let r = IntervalValue::exact(h.radius);
        s1 = s1 + r;
        s2 = s2 + r * r;
    }
    let perimeter = two_pi + two_pi * s1;
    let area = PI - PI * s2;
    let one = IntervalValue::exact(1.0);
    let delta_interval = (s1 + s2).checked_div(one - s2)?;
    let delta = delta_interval.hi;
    Ok(PorousReport {
        perimeter,
        area,
        delta,
        delta_interval,
        delta_bound_ok: delta < DELTA_MAX,
        h_upper: 2.0 * (1.0 + delta),
    })
}

/// `P(Omega; B_s(y)) / (2s)` for `y` on the unit circle.
pub fn local_perimeter_ratio(spec: &DomainSpec, y: Point2, s: f64) -> Result<f64> {
    if spec.outer != Disk::unit() {
        return Err(invalid("local_perimeter_ratio needs the unit disk as outer boundary"));
    }
    if (y.norm() - 1.0).abs() > 1e-9 {
        return Err(invalid(format!("y = ({}, {}) is not on the unit circle", y.x, y.y)));
    }
    if !(s > 0.0 && s < 1.0 / 16.0) {
        return Err(invalid(format!("s = {s} must lie in (0, 1/16)")));
    }
    let mut length = 4.0 * (0.5 * s).asin();
    for h in spec.holes() {
        let r = h.radius;
        let d = h.center.dist(y);
        if d >= r + s {
            continue;
        }
        if d + r <= s {
            length += 2.0 * PI_F64 * r;
            continue;
        }
        let c = ((r * r + d * d - s * s) / (2.0 * r * d)).clamp(-1.0, 1.0);
        length += (2.0 * r * c.acos()).min(2.0 * PI_F64 * r);
    }
    Ok(length / (2.0 * s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn successor_branches() {
        assert_eq!(IndexPair::new(3, 1).unwrap().successor(), IndexPair::new(3, 2).unwrap());
        assert_eq!(IndexPair::new(3, 3).unwrap().successor(), IndexPair::new(4, 1).unwrap());
        assert!(IndexPair::new(2, 3).is_err());
        assert!(IndexPair::new(0, 0).is_err());
    }

    #[test]
    fn rank_round_trip() {
        for (r, j) in indices_from(IndexPair::first(), 40).enumerate() {
            assert_eq!(j.rank(), r as u64 + 1);
            assert_eq!(IndexPair::from_rank(j.rank()).unwrap(), j);
        }
    }

    #[test]
    fn index_pair_json_is_array() {
        let j = IndexPair::new(4, 2).unwrap();
        assert_eq!(serde_json::to_string(&j).unwrap(), "[4,2]");
        assert!(serde_json::from_str::<IndexPair>("[1,2]").is_err());
    }

    #[test]
    fn default_first_terms() {
        let seq = default_sequences(0.2, 1.0).unwrap();
        let j = IndexPair::first();
        assert_eq!(seq.eps(j), Some(0.2));
        let r = seq.radius(j).unwrap();
        assert!((r - 3.0517578125e-8).abs() < 1e-20);
        assert!(default_sequences(0.25, 1.0).is_err());
        assert!(default_sequences(0.2, 0.0).is_err());
    }

    #[test]
    fn forced_violations() {
        let e = vec![0.2, 0.05, 0.01];
        let mut r: Vec<f64> = e.iter().map(|x| RADIUS_CUBIC_FACTOR * x * x * x).collect();
        r[0] = 0.2f64.powi(3);
        let seq = SequenceParams::explicit(e, r, None).unwrap();
        let rep = validate_constraints(&seq, 2).unwrap();
        assert!(!rep.check(Condition::RadiusCubic).unwrap().passed);

        let seq = SequenceParams::Geometric { eps1: 0.3, decay: 0.3, radius_factor: RADIUS_CUBIC_FACTOR };
        let rep = validate_constraints(&seq, 3).unwrap();
        assert_eq!(rep.failures(), vec![Condition::FirstDepth]);
        assert!(matches!(build_omega0(&seq, 3, IndexPair::first()), Err(Error::Unvalidated(_))));
    }

    #[test]
    fn hole_counts() {
        let seq = default_sequences(0.2, 1.0).unwrap();
        let s = build_omega0(&seq, 12, IndexPair::first()).unwrap();
        assert_eq!(s.holes().len(), 78);
        let s = build_omega0(&seq, 12, IndexPair::new(2, 1).unwrap()).unwrap();
        assert_eq!(s.holes().len(), 77);
        assert!(s.contains(seq.center(IndexPair::first()).unwrap()));
        let s = build_omega0(&seq, 1, IndexPair::first()).unwrap();
        let c = s.holes()[0].center;
        assert!((c.x - 0.8 * (PI_F64 / 4.0).cos()).abs() < 1e-15);
        assert!((c.x - c.y).abs() < 1e-15);
    }

    #[test]
    fn explicit_without_certificate_cannot_be_measured() {
        let e = vec![0.2, 0.05];
        let r: Vec<f64> = e.iter().map(|x| 0.5 * RADIUS_CUBIC_FACTOR * x * x * x).collect();
        let seq = SequenceParams::explicit(e, r, None).unwrap();
        let spec = build_omega0(&seq, 2, IndexPair::first()).unwrap();
        assert!(matches!(porous_measures(&spec, &seq, 2), Err(Error::CertificationFailure(_))));
    }

    #[test]
    fn plain_disk_measures() {
        let seq = default_sequences(0.2, 1.0).unwrap();
        let rep = porous_measures(&DomainSpec::plain_disk(), &seq, 1).unwrap();
        assert_eq!(rep.h_upper, 2.0);
        assert!(rep.perimeter.contains(2.0 * PI_F64));
        assert!(rep.area.contains(PI_F64));
    }

    #[test]
    fn ratio_preconditions() {
        let spec = DomainSpec::plain_disk();
        assert!(local_perimeter_ratio(&spec, Point2::new(0.5, 0.0), 0.01).is_err());
        assert!(local_perimeter_ratio(&spec, Point2::new(1.0, 0.0), 0.07).is_err());
        let r = local_perimeter_ratio(&spec, Point2::new(1.0, 0.0), 0.01).unwrap();
        assert!((r - 1.0).abs() < 1e-4);
    }
}
