//! One entry point for the rigorous measures of any domain kind.

use serde::{Deserialize, Serialize};

use crate::cantor::omega_eps_measures;
use crate::domain::{DomainSpec, ObstacleKind};
use crate::error::{invalid, Error, Result};
use crate::interval::{self, IntervalValue};
use crate::porous::porous_measures;

pub const MEASURES_SCHEMA: &str = "cheeger-measures/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    pub schema: String,
    pub kind: String,
    pub obstacles: usize,
    pub perimeter: IntervalValue,
    pub area: IntervalValue,
    /// `H1` of the topological boundary.
    pub boundary_h1: IntervalValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cantor_gap: Option<IntervalValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strict_inequality_certified: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<IntervalValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_bound_ok: Option<bool>,
    /// Upper bound `2 (1 + delta)` on the Cheeger constant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_upper: Option<f64>,
}

pub fn measure(spec: &DomainSpec) -> Result<Measures> {
    let base = |perimeter: IntervalValue, area: IntervalValue| Measures {
        schema: MEASURES_SCHEMA.into(),
        kind: spec.kind_name().into(),
        obstacles: spec.obstacle_count(),
        perimeter,
        area,
        boundary_h1: perimeter,
        cantor_gap: None,
        strict_inequality_certified: None,
        delta: None,
        delta_bound_ok: None,
        h_upper: None,
    };
    match &spec.obstacles {
        ObstacleKind::None => {
            spec.outer.validate()?;
            let r = spec.outer.radius;
            Ok(base(interval::PI.scale(2.0 * r), interval::PI.scale(r * r)))
        }
        ObstacleKind::CantorBumps(_) => {
            let rep = omega_eps_measures(spec)?;
            Ok(Measures {
                boundary_h1: rep.topo_boundary_h1,
                cantor_gap: Some(rep.cantor_gap),
                strict_inequality_certified: Some(rep.strict_inequality_certified),
                ..base(rep.perimeter, rep.area)
            })
        }
        ObstacleKind::Holes(h) => match &h.sequence {
            Some(seq) => {
                let rep = porous_measures(spec, seq, h.depth as u32)?;
                Ok(Measures {
                    delta: Some(rep.delta_interval),
                    delta_bound_ok: Some(rep.delta_bound_ok),
                    h_upper: Some(rep.h_upper),
                    ..base(rep.perimeter, rep.area)
                })
            }
            None => {
                // holes listed explicitly: exact finite sums
                spec.validate()?;
                let holes = spec.holes();
                for (k, a) in holes.iter().enumerate() {
                    if holes[k + 1..].iter().any(|b| a.center.dist(b.center) <= a.radius + b.radius) {
                        return Err(invalid("explicit holes overlap; measures need disjoint holes"));
                    }
                }
                let r = spec.outer.radius;
                let mut p = interval::PI.scale(2.0 * r);
                let mut a = interval::PI.scale(r * r);
                for hole in spec.holes() {
                    p = p + interval::PI.scale(2.0 * hole.radius);
                    a = a - interval::PI.scale(hole.radius * hole.radius);
                }
                if !(a.lo > 0.0) {
                    return Err(Error::CertificationFailure("holes cover the disk".into()));
                }
                Ok(base(p, a))
            }
        },
    }
}
