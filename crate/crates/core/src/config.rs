//! Run configuration read from a TOML file, with one section per module.
//!
//! ```toml
//! output_dir = "out"
//! seed = 7
//!
//! [cantor]
//! eps = 0.04
//! depth = 20
//!
//! [porous]
//! eps1 = 0.2
//! safety = 1.0
//! depth = 12
//!
//! [raster]
//! grid = 1024
//! subsamples = 4
//! max_grid = 8192
//!
//! [solver]
//! outer_tol = 1e-4
//! threshold_policy = { scan = 17 }
//!
//! [verify]
//! lemma21_trials = 10000
//!
//! [render]
//! size = 800
//! zoom = [{ center = [0.5657, 0.5657], half_width = 0.2 }]
//! ```
//!
//! Every key is optional. Unknown keys and unknown sections are errors.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::raster::{RasterOptions, DEFAULT_MAX_GRID, DEFAULT_SUBSAMPLES, MIN_GRID};
use crate::render::ZoomWindow;
use crate::solver::CheegerConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub output_dir: PathBuf,
    pub seed: u64,
    pub cantor: CantorSection,
    pub porous: PorousSection,
    pub raster: RasterSection,
    pub solver: CheegerConfig,
    pub verify: VerifySection,
    pub render: RenderSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("out"),
            seed: 7,
            cantor: CantorSection::default(),
            porous: PorousSection::default(),
            raster: RasterSection::default(),
            solver: CheegerConfig::default(),
            verify: VerifySection::default(),
            render: RenderSection::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CantorSection {
    pub eps: f64,
    pub depth: usize,
}

impl Default for CantorSection {
    fn default() -> Self {
        Self { eps: 0.04, depth: crate::cantor::DEFAULT_DEPTH }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PorousSection {
    pub eps1: f64,
    pub safety: f64,
    /// Largest `j1` of the truncation.
    pub depth: u32,
}

impl Default for PorousSection {
    fn default() -> Self {
        Self { eps1: 0.2, safety: 1.0, depth: 12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RasterSection {
    pub grid: usize,
    pub subsamples: usize,
    pub max_grid: usize,
}

impl Default for RasterSection {
    fn default() -> Self {
        Self { grid: 1024, subsamples: DEFAULT_SUBSAMPLES, max_grid: DEFAULT_MAX_GRID }
    }
}

impl RasterSection {
    pub fn options(&self) -> RasterOptions {
        RasterOptions { subsamples: self.subsamples, max_grid: self.max_grid }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub lemma21_trials: usize,
    pub angle_trials: usize,
    pub density_trials: usize,
    pub j1_max: u32,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self { lemma21_trials: 10_000, angle_trials: 1_000, density_trials: 1_000, j1_max: 12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderSection {
    /// Side of each panel in SVG user units.
    pub size: u32,
    /// Close-up windows; empty means the default triptych.
    pub zoom: Vec<ZoomWindow>,
}

impl Default for RenderSection {
    fn default() -> Self {
        Self { size: 800, zoom: Vec::new() }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.cantor.eps > 0.0 && self.cantor.eps < 0.5) || self.cantor.depth == 0 {
            return bad(format!("cantor: eps in (0, 1/2) and depth >= 1 required, got {:?}", self.cantor));
        }
        if !(self.porous.safety > 0.0 && self.porous.safety <= 1.0) || self.porous.depth == 0 {
            return bad(format!("porous: safety in (0, 1] and depth >= 1 required, got {:?}", self.porous));
        }
        if self.raster.grid < MIN_GRID || self.raster.subsamples == 0 {
            return bad(format!("raster: grid >= {MIN_GRID} and subsamples >= 1 required"));
        }
        if self.render.size < 16 {
            return bad("render: size must be at least 16".into());
        }
        for w in &self.render.zoom {
            w.validate().map_err(|e| Error::Config(format!("render.zoom: {e}")))?;
        }
        self.solver.validate().map_err(|e| Error::Config(format!("solver: {e}")))
    }
}

/// Creates `dir` if needed and checks that it is a writable directory.
pub fn prepare_output_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| invalid(format!("cannot create output directory {}: {e}", dir.display())))?;
    let probe = dir.join(".cheeger-write-test");
    std::fs::write(&probe, b"")
        .map_err(|e| invalid(format!("output directory {} is not writable: {e}", dir.display())))?;
    let _ = std::fs::remove_file(probe);
    Ok(())
}

/// Checks that `path` names an existing regular file.
pub fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(invalid(format!("input file {} does not exist", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_default() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("sed = 3").is_err());
        assert!(RunConfig::from_toml("[cantor]\nepsilon = 0.1").is_err());
        assert!(RunConfig::from_toml("[solverr]").is_err());
        assert!(RunConfig::from_toml("[solver]\nouter_tolerance = 1").is_err());
    }

    #[test]
    fn sections_parse() {
        let cfg = RunConfig::from_toml(
            "seed = 11\n[porous]\ndepth = 8\n[solver]\nthreshold_policy = { fixed = 0.5 }\ncontour = \"coverage\"\n\
             [render]\nzoom = [{ center = [0.5, 0.5], half_width = 0.1 }]\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 11);
        assert_eq!(cfg.porous.depth, 8);
        assert_eq!(cfg.render.zoom.len(), 1);
        let back = RunConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(RunConfig::from_toml("[raster]\ngrid = 10").is_err());
        assert!(RunConfig::from_toml("[solver]\nouter_tol = -1").is_err());
        assert!(RunConfig::from_toml("[render]\nzoom = [{ center = [0, 0], half_width = 0 }]").is_err());
    }
}
