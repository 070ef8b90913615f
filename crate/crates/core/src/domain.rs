//! Symbolic planar domains: an outer disk minus a family of closed obstacles.
//!
//! The JSON document layout is described in `docs/formats.md`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cantor::CantorStructure;
use crate::error::{invalid, Error, Result};
use crate::geom::{Disk, Point2};
use crate::porous::{IndexPair, SequenceParams};

pub const DOMAIN_SCHEMA: &str = "cheeger-domain/1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hole {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<IndexPair>,
    pub center: Point2,
    pub radius: f64,
}

impl Hole {
    pub fn disk(&self) -> Disk {
        Disk { center: self.center, radius: self.radius }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoleSet {
    pub holes: Vec<Hole>,
    /// Generating sequence, needed for certified tail bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceParams>,
    /// Largest `j1` block included.
    #[serde(default)]
    pub depth: usize,
    /// First index kept; `(1,1)` for the full porous domain.
    #[serde(default = "IndexPair::first")]
    pub start: IndexPair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObstacleKind {
    None,
    CantorBumps(CantorStructure),
    Holes(HoleSet),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub outer: Disk,
    pub obstacles: ObstacleKind,
    pub truncation_note: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainDocument {
    schema: String,
    outer: Disk,
    obstacles: ObstacleKind,
    #[serde(default)]
    truncation_note: String,
}

impl DomainSpec {
    pub fn plain_disk() -> Self {
        Self { outer: Disk::unit(), obstacles: ObstacleKind::None, truncation_note: String::new() }
    }

    /// Outer disk minus arbitrary closed disks.
    pub fn disk_with_holes(outer: Disk, holes: Vec<Disk>) -> Result<Self> {
        let spec = Self {
            outer,
            obstacles: ObstacleKind::Holes(HoleSet {
                holes: holes.into_iter().map(|d| Hole { index: None, center: d.center, radius: d.radius }).collect(),
                sequence: None,
                depth: 0,
                start: IndexPair::first(),
            }),
            truncation_note: String::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.outer.validate()?;
        match &self.obstacles {
            ObstacleKind::None => Ok(()),
            ObstacleKind::CantorBumps(c) => {
                if c.epsilon > self.outer.radius - self.outer.center.norm() {
                    return Err(invalid("Cantor bumps extend outside the outer disk"));
                }
                Ok(())
            }
            ObstacleKind::Holes(h) => {
                for hole in &h.holes {
                    hole.disk().validate()?;
                    let reach = hole.center.dist(self.outer.center) + hole.radius;
                    // holes may touch but not cross the outer circle
                    if reach > self.outer.radius * (1.0 + 4.0 * f64::EPSILON) {
                        return Err(invalid(format!(
                            "hole at ({}, {}) extends outside the outer disk",
                            hole.center.x, hole.center.y
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Membership in the open domain.
    pub fn contains(&self, p: Point2) -> bool {
        if !self.outer.contains(p) {
            return false;
        }
        match &self.obstacles {
            ObstacleKind::None => true,
            ObstacleKind::CantorBumps(c) => !c.in_bumps(p),
            ObstacleKind::Holes(h) => !h.holes.iter().any(|o| o.disk().contains_closed(p)),
        }
    }

    /// Number of obstacles in the (truncated) spec.
    pub fn obstacle_count(&self) -> usize {
        match &self.obstacles {
            ObstacleKind::None => 0,
            ObstacleKind::CantorBumps(c) => c.gap_count(),
            ObstacleKind::Holes(h) => h.holes.len(),
        }
    }

    pub fn holes(&self) -> &[Hole] {
        match &self.obstacles {
            ObstacleKind::Holes(h) => &h.holes,
            _ => &[],
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.obstacles {
            ObstacleKind::None => "none",
            ObstacleKind::CantorBumps(_) => "cantor_bumps",
            ObstacleKind::Holes(_) => "holes",
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = DomainDocument {
            schema: DOMAIN_SCHEMA.to_string(),
            outer: self.outer,
            obstacles: self.obstacles.clone(),
            truncation_note: self.truncation_note.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DomainDocument = serde_json::from_str(text)?;
        if doc.schema != DOMAIN_SCHEMA {
            return Err(invalid(format!("unsupported domain schema {:?}, expected {DOMAIN_SCHEMA:?}", doc.schema)));
        }
        let spec = Self { outer: doc.outer, obstacles: doc.obstacles, truncation_note: doc.truncation_note };
        spec.validate()?;
        Ok(spec)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()? + "\n").map_err(Error::from)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
