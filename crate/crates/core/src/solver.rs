//! Grid Cheeger solver.
//!
//! Dinkelbach iteration on `P(E)/|E|`: each step minimizes the convex relaxation
//! `TV(u) - h |u|` over `0 <= u <= coverage` with a Chambolle-Pock primal-dual
//! scheme, then thresholds `u` and keeps the best measured ratio. Grids are
//! solved coarse to fine, each level warm-started from the previous one.
//!
//! Holes dropped by the rasterizer are not seen by the solver, so results on
//! porous domains describe the resolved truncation only.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::raster::{contour_length, ContourModel, RasterField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ThresholdPolicy {
    Fixed(f64),
    /// `levels` equally spaced thresholds in `[0.1, 0.9]`.
    Scan(usize),
}

impl ThresholdPolicy {
    pub fn levels(&self) -> Vec<f64> {
        match *self {
            Self::Fixed(t) => vec![t],
            Self::Scan(1) => vec![0.5],
            Self::Scan(n) => (0..n).map(|k| 0.1 + 0.8 * k as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SeedPolicy {
    FullDomain,
    /// Initial relaxed indicator on the finest grid.
    WarmStart(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheegerConfig {
    pub outer_tol: f64,
    pub max_outer: usize,
    /// Primal-dual iterations of the first inner solve on each level.
    pub inner_iters: usize,
    /// Relative primal-dual gap that ends an inner solve early.
    pub inner_tol: f64,
    /// Factor applied to the inner budget after every outer step.
    pub inner_growth: f64,
    pub max_inner_iters: usize,
    pub threshold_policy: ThresholdPolicy,
    pub seed_policy: SeedPolicy,
    /// Grid size below which no further coarsening happens.
    pub coarsest: usize,
    /// Crossing placement used when measuring candidate sets.
    pub contour: ContourModel,
}

impl Default for CheegerConfig {
    fn default() -> Self {
        Self {
            outer_tol: 1e-4,
            max_outer: 40,
            inner_iters: 200,
            inner_tol: 1e-3,
            inner_growth: 2.0,
            max_inner_iters: 1600,
            threshold_policy: ThresholdPolicy::Scan(17),
            seed_policy: SeedPolicy::FullDomain,
            coarsest: 128,
            contour: ContourModel::Linear,
        }
    }
}

impl CheegerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.outer_tol > 0.0 && self.outer_tol.is_finite()) {
            return Err(invalid("outer_tol must be positive"));
        }
        if self.max_outer == 0 || self.inner_iters == 0 || self.max_inner_iters < self.inner_iters {
            return Err(invalid("iteration budgets must be positive and max_inner_iters >= inner_iters"));
        }
        if !(self.inner_tol > 0.0) || !(self.inner_growth >= 1.0) {
            return Err(invalid("inner_tol must be positive and inner_growth at least 1"));
        }
        match &self.threshold_policy {
            ThresholdPolicy::Fixed(t) if !(*t > 0.0 && *t < 1.0) => {
                return Err(invalid(format!("threshold {t} outside (0, 1)")))
            }
            ThresholdPolicy::Scan(0) => return Err(invalid("threshold scan needs at least one level")),
            _ => {}
        }
        if self.coarsest < 16 {
            return Err(invalid("coarsest grid must be at least 16"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub grid: usize,
    pub h: f64,
    pub perimeter: f64,
    pub area: f64,
    pub inner_iters: usize,
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct CheegerResult {
    pub h_estimate: f64,
    /// Relaxed indicator on the input grid; the Cheeger set is `indicator >= threshold`.
    pub indicator: RasterField,
    pub threshold: f64,
    pub perimeter: f64,
    pub area: f64,
    pub ratio: f64,
    pub history: Vec<HistoryEntry>,
    pub converged: bool,
    pub outer_steps: usize,
    pub seconds: f64,
    /// Crossing placement behind `perimeter`.
    pub contour: ContourModel,
}

impl CheegerResult {
    pub fn set(&self) -> Vec<bool> {
        self.indicator.threshold(self.threshold)
    }

    /// The thresholded set as a 0/1 field.
    pub fn set_field(&self) -> RasterField {
        let v = self.set().into_iter().map(|b| if b { 1.0 } else { 0.0 }).collect();
        self.indicator.with_values(v).expect("same grid")
    }

    pub fn summary(&self, gap: Option<f64>) -> CheegerSummary {
        CheegerSummary {
            schema: "cheeger-result/1".into(),
            h_estimate: self.h_estimate,
            perimeter: self.perimeter,
            area: self.area,
            ratio: self.ratio,
            threshold: self.threshold,
            converged: self.converged,
            outer_steps: self.outer_steps,
            contour: self.contour,
            grid: self.indicator.nx,
            pixel: self.indicator.pixel,
            minimality_gap: gap,
            seconds: self.seconds,
            history: self.history.clone(),
        }
    }

    pub fn write_json(&self, path: &Path, gap: Option<f64>) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.summary(gap))?;
        std::fs::write(path, text + "\n").map_err(Error::from)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheegerSummary {
    pub schema: String,
    pub h_estimate: f64,
    pub perimeter: f64,
    pub area: f64,
    pub ratio: f64,
    pub threshold: f64,
    pub converged: bool,
    pub outer_steps: usize,
    pub contour: ContourModel,
    pub grid: usize,
    pub pixel: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimality_gap: Option<f64>,
    pub seconds: f64,
    pub history: Vec<HistoryEntry>,
}

/// `(P, A, P/A)` of `field >= threshold`.
pub fn ratio_of(field: &RasterField, threshold: f64, model: ContourModel) -> Result<(f64, f64, f64)> {
    let m = measure(field.nx, field.ny, field.pixel, |k| field.values[k], threshold, model);
    if m.area <= 0.0 {
        return Err(Error::DegenerateThreshold(format!("no pixel reaches threshold {threshold}")));
    }
    Ok((m.perimeter, m.area, m.perimeter / m.area))
}

/// `|E \u{394} Omega| / |Omega|` with `Omega` weighted by the coverage of `domain`.
pub fn minimality_gap(result: &CheegerResult, domain: &RasterField) -> Result<f64> {
    let ind = &result.indicator;
    if ind.nx != domain.nx || ind.ny != domain.ny {
        return Err(invalid("result and domain grids differ"));
    }
    let mut diff = 0.0;
    let mut total = 0.0;
    for (&u, &c) in ind.values.iter().zip(&domain.values) {
        let e = if u >= result.threshold { 1.0 } else { 0.0 };
        diff += (e - c).abs();
        total += c;
    }
    if total <= 0.0 {
        return Err(invalid("domain field is empty"));
    }
    Ok(diff / total)
}

#[derive(Clone, Copy, Debug)]
struct Measured {
    threshold: f64,
    perimeter: f64,
    area: f64,
}

impl Measured {
    fn ratio(&self) -> f64 {
        self.perimeter / self.area
    }
}

fn measure<V: Fn(usize) -> f64 + Sync>(
    nx: usize,
    ny: usize,
    pixel: f64,
    val: V,
    t: f64,
    model: ContourModel,
) -> Measured {
    let count = (0..nx * ny).into_par_iter().filter(|&k| val(k) >= t).count();
    Measured {
        threshold: t,
        perimeter: contour_length(nx, ny, &val, t, model) * pixel,
        area: count as f64 * pixel * pixel,
    }
}

// best ratio; near-ties go to the larger set
fn best_level(nx: usize, ny: usize, pixel: f64, u: &[f32], levels: &[f64], model: ContourModel) -> Option<Measured> {
    let mut best: Option<Measured> = None;
    for &t in levels {
        let m = measure(nx, ny, pixel, |k| u[k] as f64, t, model);
        if m.area <= 0.0 {
            continue;
        }
        best = match best {
            None => Some(m),
            Some(b) => {
                let (r, rb) = (m.ratio(), b.ratio());
                if r < rb * (1.0 - 1e-12) || (r <= rb * (1.0 + 1e-12) && m.area > b.area) {
                    Some(m)
                } else {
                    Some(b)
                }
            }
        };
    }
    best
}

struct Level {
    nx: usize,
    ny: usize,
    pixel: f64,
    cover: Vec<f32>,
}

struct PrimalDual {
    u: Vec<f32>,
    ubar: Vec<f32>,
    /// Dual fields stored per row as eight slices of `nx`: for each stencil
    /// (fwd, fwd), (bwd, fwd), (fwd, bwd), (bwd, bwd) its x then y component.
    p: Vec<f32>,
}

// TV is the mean over four one-sided stencils, so |K|^2 <= 2 and TAU * SIGMA = 1/2
const TAU: f32 = 0.5 * std::f32::consts::FRAC_1_SQRT_2;
const QUARTER_SIGMA: f32 = 0.25 * std::f32::consts::SQRT_2;

fn row(v: &[f32], nx: usize, j: usize) -> &[f32] {
    &v[j * nx..(j + 1) * nx]
}

/// Differences of row `j` with zero outside the grid. `gx[i]` is the backward
/// and `gx[i + 1]` the forward x difference at pixel `i`.
fn differences(u: &[f32], nx: usize, ny: usize, j: usize, gx: &mut [f32], fy: &mut [f32], by: &mut [f32]) {
    let c = row(u, nx, j);
    gx[0] = c[0];
    for i in 0..nx - 1 {
        gx[i + 1] = c[i + 1] - c[i];
    }
    gx[nx] = -c[nx - 1];
    match (j + 1 < ny).then(|| row(u, nx, j + 1)) {
        Some(up) => fy.iter_mut().zip(up).zip(c).for_each(|((f, &a), &b)| *f = a - b),
        None => fy.iter_mut().zip(c).for_each(|(f, &b)| *f = -b),
    }
    match (j > 0).then(|| row(u, nx, j - 1)) {
        Some(down) => by.iter_mut().zip(c).zip(down).for_each(|((f, &a), &b)| *f = a - b),
        None => by.copy_from_slice(c),
    }
}

/// Negative adjoint of the averaged gradient on row `j`. `e` has length `nx + 1`.
fn divergence(p: &[f32], nx: usize, ny: usize, j: usize, e: &mut [f32], out: &mut [f32]) {
    let comp = |j: usize, c: usize| &p[(8 * j + c) * nx..(8 * j + c + 1) * nx];
    let (x0, x1, x2, x3) = (comp(j, 0), comp(j, 2), comp(j, 4), comp(j, 6));
    // e[i] = forward-x fields at i - 1 plus backward-x fields at i
    e[0] = x1[0] + x3[0];
    for i in 1..nx {
        e[i] = x0[i - 1] + x2[i - 1] + x1[i] + x3[i];
    }
    e[nx] = x0[nx - 1] + x2[nx - 1];
    let (y0, y1, y2, y3) = (comp(j, 1), comp(j, 3), comp(j, 5), comp(j, 7));
    for i in 0..nx {
        out[i] = e[i + 1] - e[i] + y0[i] + y1[i] - y2[i] - y3[i];
    }
    if j > 0 {
        let (d0, d1) = (comp(j - 1, 1), comp(j - 1, 3));
        out.iter_mut().zip(d0.iter().zip(d1)).for_each(|(o, (a, b))| *o -= a + b);
    }
    if j + 1 < ny {
        let (u2, u3) = (comp(j + 1, 5), comp(j + 1, 7));
        out.iter_mut().zip(u2.iter().zip(u3)).for_each(|(o, (a, b))| *o += a + b);
    }
    out.iter_mut().for_each(|o| *o *= 0.25);
}

impl PrimalDual {
    fn new(u: Vec<f32>) -> Self {
        let n = u.len();
        Self { ubar: u.clone(), u, p: vec![0.0; 8 * n] }
    }

    fn iterate(&mut self, lv: &Level, w: f32) {
        let (nx, ny) = (lv.nx, lv.ny);
        let ubar = &self.ubar;
        self.p.par_chunks_mut(8 * nx).enumerate().for_each_init(
            || (vec![0.0; nx + 1], vec![0.0; nx], vec![0.0; nx]),
            |(gx, fy, by), (j, pr)| {
                differences(ubar, nx, ny, j, gx, fy, by);
                for (s, q) in pr.chunks_exact_mut(2 * nx).enumerate() {
                    let (qx, qy) = q.split_at_mut(nx);
                    let dx = if s & 1 == 0 { &gx[1..] } else { &gx[..nx] };
                    let dy: &[f32] = if s >> 1 == 0 { fy } else { by };
                    for ((a, b), (&gx, &gy)) in qx.iter_mut().zip(qy.iter_mut()).zip(dx.iter().zip(dy)) {
                        let x = *a + QUARTER_SIGMA * gx;
                        let y = *b + QUARTER_SIGMA * gy;
                        let f = 1.0 / (x * x + y * y).sqrt().max(1.0);
                        *a = x * f;
                        *b = y * f;
                    }
                }
            },
        );
        let p = &self.p;
        self.u.par_chunks_mut(nx).zip(self.ubar.par_chunks_mut(nx)).enumerate().for_each_init(
            || (vec![0.0; nx + 1], vec![0.0; nx]),
            |(e, div), (j, (ur, br))| {
                divergence(p, nx, ny, j, e, div);
                let cover = row(&lv.cover, nx, j);
                for (((u, b), &d), &c) in ur.iter_mut().zip(br.iter_mut()).zip(div.iter()).zip(cover) {
                    let old = *u;
                    let new = (old + TAU * (d + w)).max(0.0).min(c);
                    *u = new;
                    *b = 2.0 * new - old;
                }
            },
        );
    }

    /// Primal-dual gap divided by `w * sum(cover)`.
    fn relative_gap(&self, lv: &Level, w: f32) -> f64 {
        let (nx, ny) = (lv.nx, lv.ny);
        let (u, p) = (&self.u, &self.p);
        let (primal, dual) = (0..ny)
            .into_par_iter()
            .map(|j| {
                let (mut gx, mut fy, mut by) = (vec![0.0; nx + 1], vec![0.0; nx], vec![0.0; nx]);
                let (mut e, mut div) = (vec![0.0; nx + 1], vec![0.0; nx]);
                differences(u, nx, ny, j, &mut gx, &mut fy, &mut by);
                divergence(p, nx, ny, j, &mut e, &mut div);
                let cover = row(&lv.cover, nx, j);
                let mut tv = 0.0f64;
                let mut lin = 0.0f64;
                let mut dual = 0.0f64;
                for i in 0..nx {
                    for (dx, dy) in [(gx[i + 1], fy[i]), (gx[i], fy[i]), (gx[i + 1], by[i]), (gx[i], by[i])] {
                        tv += 0.25 * ((dx * dx + dy * dy) as f64).sqrt();
                    }
                    lin += u[j * nx + i] as f64;
                    dual += cover[i] as f64 * ((-div[i] - w) as f64).min(0.0);
                }
                (tv - w as f64 * lin, dual)
            })
            .collect::<Vec<_>>()
            .iter()
            .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let scale = w as f64 * lv.cover.iter().map(|&c| c as f64).sum::<f64>();
        (primal - dual) / scale.max(f64::MIN_POSITIVE)
    }
}

fn upsample(src: &[f32], snx: usize, sny: usize, nx: usize, ny: usize) -> Vec<f32> {
    upsample_planes(src, 1, snx, sny, nx, ny)
}

/// Nearest-neighbour upsampling of `planes` row-interleaved fields.
fn upsample_planes(src: &[f32], planes: usize, snx: usize, sny: usize, nx: usize, ny: usize) -> Vec<f32> {
    let mut out = vec![0.0; planes * nx * ny];
    for j in 0..ny {
        let sj = (j / 2).min(sny - 1);
        for c in 0..planes {
            let s = &src[(planes * sj + c) * snx..(planes * sj + c + 1) * snx];
            for (i, o) in out[(planes * j + c) * nx..(planes * j + c + 1) * nx].iter_mut().enumerate() {
                *o = s[(i / 2).min(snx - 1)];
            }
        }
    }
    out
}

fn to_level(f: &RasterField) -> Level {
    Level { nx: f.nx, ny: f.ny, pixel: f.pixel, cover: f.values.iter().map(|&v| v as f32).collect() }
}

pub fn solve_cheeger(field: &RasterField, cfg: &CheegerConfig) -> Result<CheegerResult> {
    cfg.validate()?;
    if field.is_empty() {
        return Err(invalid("domain mask is empty"));
    }
    let started = Instant::now();
    let levels_t = cfg.threshold_policy.levels();

    let mut fields = vec![field.clone()];
    while fields.last().is_some_and(|f| f.nx.min(f.ny) >= 2 * cfg.coarsest) {
        let next = fields.last().expect("non-empty").downsample();
        fields.push(next);
    }
    let mut seeds: Option<Vec<Vec<f32>>> = match &cfg.seed_policy {
        SeedPolicy::FullDomain => None,
        SeedPolicy::WarmStart(v) => {
            let seed = field.with_values(v.clone())?;
            let mut out = vec![seed.values.iter().map(|&x| x as f32).collect::<Vec<_>>()];
            let mut cur = seed;
            for _ in 1..fields.len() {
                cur = cur.downsample();
                out.push(cur.values.iter().map(|&x| x as f32).collect());
            }
            Some(out)
        }
    };

    let mut history = Vec::new();
    let mut state: Option<(PrimalDual, usize, usize)> = None;
    let mut converged = false;
    let mut outer_steps = 0;
    let mut best_u: Vec<f32> = Vec::new();
    let mut best_m: Option<Measured> = None;

    for (depth, f) in fields.iter().enumerate().rev() {
        let lv = to_level(f);
        let finest = depth == 0;
        let mut pd = match state.take() {
            None => PrimalDual::new(match seeds.as_mut() {
                Some(s) => std::mem::take(&mut s[depth]),
                None => lv.cover.clone(),
            }),
            Some((prev, snx, sny)) => {
                let mut u = upsample(&prev.u, snx, sny, lv.nx, lv.ny);
                for (x, &c) in u.iter_mut().zip(&lv.cover) {
                    *x = x.min(c);
                }
                let mut pd = PrimalDual::new(u);
                pd.p = upsample_planes(&prev.p, 8, snx, sny, lv.nx, lv.ny);
                pd
            }
        };
        // candidates: the whole domain and the warm start
        let whole = best_level(lv.nx, lv.ny, lv.pixel, &lv.cover, &levels_t, cfg.contour);
        let warm = best_level(lv.nx, lv.ny, lv.pixel, &pd.u, &levels_t, cfg.contour);
        let (mut cur_m, mut cur_u) = match (whole, warm) {
            (Some(a), Some(b)) if b.ratio() < a.ratio() => (b, pd.u.clone()),
            (Some(a), _) => (a, lv.cover.clone()),
            (None, Some(b)) => (b, pd.u.clone()),
            (None, None) => {
                return Err(Error::DegenerateThreshold(format!(
                    "no threshold in {levels_t:?} selects a nonempty set on the {}x{} grid",
                    lv.nx, lv.ny
                )))
            }
        };
        let mut h = cur_m.ratio();
        history.push(HistoryEntry {
            grid: lv.nx,
            h,
            perimeter: cur_m.perimeter,
            area: cur_m.area,
            inner_iters: 0,
            gap: f64::NAN,
        });
        let mut budget = cfg.inner_iters as f64;
        let mut level_converged = false;
        for _ in 0..cfg.max_outer {
            outer_steps += 1;
            let w = (h * lv.pixel) as f32;
            let iters = budget.round() as usize;
            let mut gap = f64::INFINITY;
            let mut done = 0;
            while done < iters {
                let chunk = 50.min(iters - done);
                for _ in 0..chunk {
                    pd.iterate(&lv, w);
                }
                done += chunk;
                gap = pd.relative_gap(&lv, w);
                if gap < cfg.inner_tol {
                    break;
                }
            }
            let cand = best_level(lv.nx, lv.ny, lv.pixel, &pd.u, &levels_t, cfg.contour);
            log::debug!(
                "grid {} h {:.6} inner {} gap {:.2e} candidate {:?}",
                lv.nx,
                h,
                done,
                gap,
                cand.map(|m| m.ratio())
            );
            let improved = cand.filter(|m| m.ratio() < h * (1.0 - 1e-12));
            match improved {
                Some(m) => {
                    let step = h - m.ratio();
                    h = m.ratio();
                    cur_m = m;
                    cur_u.clone_from(&pd.u);
                    history.push(HistoryEntry {
                        grid: lv.nx,
                        h,
                        perimeter: m.perimeter,
                        area: m.area,
                        inner_iters: done,
                        gap,
                    });
                    if step < cfg.outer_tol {
                        level_converged = true;
                        break;
                    }
                }
                None => {
                    // a loose inner solve may hide a better set; retry with more work
                    if gap < cfg.inner_tol || budget as usize >= cfg.max_inner_iters {
                        level_converged = true;
                        break;
                    }
                }
            }
            budget = (budget * cfg.inner_growth).min(cfg.max_inner_iters as f64);
        }
        if finest {
            converged = level_converged;
            best_u = cur_u;
            best_m = Some(cur_m);
        } else {
            // continue from the best set found, not the last iterate
            pd.u.clone_from(&cur_u);
            pd.ubar.clone_from(&cur_u);
            state = Some((pd, lv.nx, lv.ny));
        }
    }

    let m = best_m.expect("finest level solved");
    let indicator = field.with_values(best_u.iter().map(|&x| x as f64).collect())?;
    Ok(CheegerResult {
        h_estimate: m.ratio(),
        indicator,
        threshold: m.threshold,
        perimeter: m.perimeter,
        area: m.area,
        ratio: m.ratio(),
        history,
        converged,
        outer_steps,
        seconds: started.elapsed().as_secs_f64(),
        contour: cfg.contour,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::rasterize;
    use crate::DomainSpec;

    #[test]
    fn scan_levels() {
        let l = ThresholdPolicy::Scan(17).levels();
        assert_eq!(l.len(), 17);
        assert!((l[0] - 0.1).abs() < 1e-15 && (l[16] - 0.9).abs() < 1e-15);
        assert!((l[8] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(CheegerConfig::default().validate().is_ok());
        let bad = CheegerConfig { outer_tol: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = CheegerConfig { threshold_policy: ThresholdPolicy::Fixed(1.0), ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn empty_threshold_is_degenerate() {
        let f = rasterize(&DomainSpec::plain_disk(), 64).unwrap();
        let z = f.with_values(vec![0.0; f.values.len()]).unwrap();
        assert!(matches!(ratio_of(&z, 0.5, ContourModel::Linear), Err(Error::DegenerateThreshold(_))));
    }

    #[test]
    fn coarse_disk() {
        let f = rasterize(&DomainSpec::plain_disk(), 128).unwrap();
        let r = solve_cheeger(&f, &CheegerConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.h_estimate - 2.0).abs() < 0.05, "{}", r.h_estimate);
        let (_, _, ratio) = ratio_of(&r.indicator, r.threshold, r.contour).unwrap();
        assert_eq!(ratio, r.ratio);
    }
}
