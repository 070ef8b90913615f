//! Gray-coverage grids and discrete area / perimeter estimators.
//!
//! Pixel `(i, j)` covers `[x0 + i p, x0 + (i+1) p] x [y0 + j p, y0 + (j+1) p]`
//! and is stored at `values[j * nx + i]`.

use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{DomainSpec, Hole, ObstacleKind};
use crate::error::{invalid, Error, Result};
use crate::geom::{Disk, Point2};

pub const MIN_GRID: usize = 64;
pub const DEFAULT_SUBSAMPLES: usize = 4;
pub const DEFAULT_MAX_GRID: usize = 8192;
/// Empty pixels kept around the bounding box on every side.
pub const MARGIN: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RasterOptions {
    pub subsamples: usize,
    pub max_grid: usize,
}

impl Default for RasterOptions {
    fn default() -> Self {
        Self { subsamples: DEFAULT_SUBSAMPLES, max_grid: DEFAULT_MAX_GRID }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RasterField {
    pub nx: usize,
    pub ny: usize,
    pub pixel: f64,
    pub origin: Point2,
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
    /// Holes too small to resolve, left out of `values`.
    pub excluded: Vec<Hole>,
}

impl RasterField {
    pub fn zeros(nx: usize, ny: usize, pixel: f64, origin: Point2) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(invalid("grid dimensions must be positive"));
        }
        if !(pixel > 0.0 && pixel.is_finite()) {
            return Err(invalid(format!("pixel size {pixel} must be positive")));
        }
        Ok(Self { nx, ny, pixel, origin, values: vec![0.0; nx * ny], mask: vec![false; nx * ny], excluded: Vec::new() })
    }

    /// Field whose mask is `values > 0`; values are clamped to `[0, 1]`.
    pub fn from_values(nx: usize, ny: usize, pixel: f64, origin: Point2, values: Vec<f64>) -> Result<Self> {
        if values.len() != nx * ny {
            return Err(invalid(format!("expected {} values, got {}", nx * ny, values.len())));
        }
        let mut f = Self::zeros(nx, ny, pixel, origin)?;
        for (k, v) in values.into_iter().enumerate() {
            let v = if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 };
            f.values[k] = v;
            f.mask[k] = v > 0.0;
        }
        Ok(f)
    }

    /// Same geometry, new values restricted to this field's mask.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(invalid("value array does not match the grid"));
        }
        let values = values
            .into_iter()
            .zip(&self.mask)
            .map(|(v, &m)| if m && v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 })
            .collect();
        Ok(Self { values, ..self.clone() })
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn center(&self, i: usize, j: usize) -> Point2 {
        Point2::new(self.origin.x + (i as f64 + 0.5) * self.pixel, self.origin.y + (j as f64 + 0.5) * self.pixel)
    }

    pub fn cell_area(&self) -> f64 {
        self.pixel * self.pixel
    }

    /// `sum values * pixel^2`.
    pub fn coverage_area(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    pub fn excluded_area(&self) -> f64 {
        self.excluded.iter().map(|h| std::f64::consts::PI * h.radius * h.radius).sum()
    }

    pub fn excluded_perimeter(&self) -> f64 {
        self.excluded.iter().map(|h| 2.0 * std::f64::consts::PI * h.radius).sum()
    }

    /// Binary set `values >= t`.
    pub fn threshold(&self, t: f64) -> Vec<bool> {
        self.values.iter().map(|&v| v >= t).collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    /// Reflection `y -> -y` about the horizontal line through the grid center.
    pub fn reflect_x(&self) -> Self {
        let mut out = self.clone();
        for j in 0..self.ny {
            let src = (self.ny - 1 - j) * self.nx;
            let dst = j * self.nx;
            out.values[dst..dst + self.nx].copy_from_slice(&self.values[src..src + self.nx]);
            out.mask[dst..dst + self.nx].copy_from_slice(&self.mask[src..src + self.nx]);
        }
        out
    }

    /// Reflection `x -> -x` about the vertical line through the grid center.
    pub fn reflect_y(&self) -> Self {
        let mut out = self.clone();
        for j in 0..self.ny {
            let row = j * self.nx;
            out.values[row..row + self.nx].reverse();
            out.mask[row..row + self.nx].reverse();
        }
        out
    }

    /// Average over 2x2 blocks; odd trailing rows and columns are padded with zeros.
    pub fn downsample(&self) -> Self {
        let nx = self.nx.div_ceil(2);
        let ny = self.ny.div_ceil(2);
        let mut values = vec![0.0; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                let mut s = 0.0;
                for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    let (a, b) = (2 * i + di, 2 * j + dj);
                    if a < self.nx && b < self.ny {
                        s += self.get(a, b);
                    }
                }
                values[j * nx + i] = 0.25 * s;
            }
        }
        let mask = values.iter().map(|&v| v > 0.0).collect();
        Self { nx, ny, pixel: 2.0 * self.pixel, origin: self.origin, values, mask, excluded: self.excluded.clone() }
    }

    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        write_pgm_to(&mut w, self)?;
        w.flush()?;
        Ok(())
    }
}

/// Binary PGM (`P5`, maxval 255), top row first, with pixel size and origin
/// in a header comment.
pub fn write_pgm_to(w: &mut impl Write, f: &RasterField) -> Result<()> {
    write!(
        w,
        "P5\n# cheeger-raster pixel={:e} origin={:e},{:e}\n{} {}\n255\n",
        f.pixel, f.origin.x, f.origin.y, f.nx, f.ny
    )?;
    let mut row = vec![0u8; f.nx];
    for j in (0..f.ny).rev() {
        for (i, b) in row.iter_mut().enumerate() {
            *b = (f.get(i, j) * 255.0).round() as u8;
        }
        w.write_all(&row)?;
    }
    Ok(())
}

/// Reads a field written by `write_pgm_to`. Values come back quantized to `k/255`.
pub fn read_pgm(path: &Path) -> Result<RasterField> {
    let bytes = std::fs::read(path)?;
    parse_pgm(&bytes)
}

pub fn parse_pgm(bytes: &[u8]) -> Result<RasterField> {
    let mut lines = Vec::new();
    let mut pos = 0;
    while lines.len() < 4 {
        let end = bytes[pos..].iter().position(|&b| b == b'\n').ok_or_else(|| invalid("truncated PGM header"))?;
        lines.push(std::str::from_utf8(&bytes[pos..pos + end]).map_err(|_| invalid("PGM header is not UTF-8"))?);
        pos += end + 1;
    }
    if lines[0] != "P5" || lines[3] != "255" {
        return Err(invalid("expected a binary 8-bit PGM (P5, maxval 255)"));
    }
    let meta = lines[1]
        .strip_prefix("# cheeger-raster ")
        .ok_or_else(|| invalid("PGM lacks the cheeger-raster comment line"))?;
    let mut pixel = None;
    let mut origin = None;
    for item in meta.split_whitespace() {
        let num = |s: &str| s.parse::<f64>().map_err(|_| invalid(format!("bad number {s:?} in PGM header")));
        if let Some(v) = item.strip_prefix("pixel=") {
            pixel = Some(num(v)?);
        } else if let Some(v) = item.strip_prefix("origin=") {
            let (x, y) = v.split_once(',').ok_or_else(|| invalid("origin must be x,y"))?;
            origin = Some(Point2::new(num(x)?, num(y)?));
        }
    }
    let dims: Vec<usize> = lines[2].split_whitespace().filter_map(|s| s.parse().ok()).collect();
    let (Some(pixel), Some(origin), &[nx, ny]) = (pixel, origin, &dims[..]) else {
        return Err(invalid("incomplete PGM header"));
    };
    let data = &bytes[pos..];
    if data.len() != nx * ny {
        return Err(invalid(format!("PGM body has {} bytes, expected {}", data.len(), nx * ny)));
    }
    let mut values = vec![0.0; nx * ny];
    for (r, row) in data.chunks(nx).enumerate() {
        let j = ny - 1 - r;
        for (i, &b) in row.iter().enumerate() {
            values[j * nx + i] = b as f64 / 255.0;
        }
    }
    RasterField::from_values(nx, ny, pixel, origin, values)
}

/// Square grid of side `n` framing the axis-aligned box `[lo, hi]` with `MARGIN` empty pixels.
pub fn frame(lo: Point2, hi: Point2, n: usize) -> Result<(f64, Point2)> {
    if n <= 2 * MARGIN {
        return Err(invalid(format!("grid size {n} leaves no room inside the margin")));
    }
    let side = (hi.x - lo.x).max(hi.y - lo.y);
    if !(side > 0.0) {
        return Err(invalid("empty bounding box"));
    }
    let pixel = side / (n - 2 * MARGIN) as f64;
    let mid = (lo + hi) * 0.5;
    let half = 0.5 * n as f64 * pixel;
    Ok((pixel, Point2::new(mid.x - half, mid.y - half)))
}

#[derive(Clone, Copy, PartialEq)]
pub enum Classify {
    Inside,
    Outside,
    Mixed,
    /// known coverage fraction
    Covered(f64),
}

/// Coverage by `k x k` subsampling of `inside`, skipping pixels that `classify` decides.
pub fn rasterize_with<I, C>(
    nx: usize,
    ny: usize,
    pixel: f64,
    origin: Point2,
    k: usize,
    inside: I,
    classify: C,
) -> Result<RasterField>
where
    I: Fn(Point2) -> bool + Sync,
    C: Fn(Point2, f64) -> Classify + Sync,
{
    if k == 0 {
        return Err(invalid("subsample count must be positive"));
    }
    let mut f = RasterField::zeros(nx, ny, pixel, origin)?;
    let step = pixel / k as f64;
    let weight = 1.0 / (k * k) as f64;
    let half_diag = pixel * std::f64::consts::FRAC_1_SQRT_2;
    f.values.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
        for (i, v) in row.iter_mut().enumerate() {
            let x0 = origin.x + i as f64 * pixel;
            let y0 = origin.y + j as f64 * pixel;
            let c = Point2::new(x0 + 0.5 * pixel, y0 + 0.5 * pixel);
            *v = match classify(c, half_diag) {
                Classify::Inside => 1.0,
                Classify::Outside => 0.0,
                Classify::Covered(c) => c.clamp(0.0, 1.0),
                Classify::Mixed => {
                    let mut hits = 0usize;
                    for b in 0..k {
                        let y = y0 + (b as f64 + 0.5) * step;
                        for a in 0..k {
                            if inside(Point2::new(x0 + (a as f64 + 0.5) * step, y)) {
                                hits += 1;
                            }
                        }
                    }
                    hits as f64 * weight
                }
            };
        }
    });
    for (m, &v) in f.mask.iter_mut().zip(&f.values) {
        *m = v > 0.0;
    }
    Ok(f)
}

/// Coverage field of an arbitrary set on a square grid framing `[lo, hi]`.
pub fn rasterize_predicate<I>(lo: Point2, hi: Point2, n: usize, inside: I) -> Result<RasterField>
where
    I: Fn(Point2) -> bool + Sync,
{
    if n < MIN_GRID {
        return Err(invalid(format!("grid size {n} below the minimum {MIN_GRID}")));
    }
    let (pixel, origin) = frame(lo, hi, n)?;
    rasterize_with(n, n, pixel, origin, DEFAULT_SUBSAMPLES, inside, |_, _| Classify::Mixed)
}

pub fn rasterize(spec: &DomainSpec, n: usize) -> Result<RasterField> {
    rasterize_opts(spec, n, &RasterOptions::default())
}

pub fn rasterize_opts(spec: &DomainSpec, n: usize, opts: &RasterOptions) -> Result<RasterField> {
    if n < MIN_GRID {
        return Err(invalid(format!("grid size {n} below the minimum {MIN_GRID}")));
    }
    if n > opts.max_grid {
        return Err(Error::MemoryLimit { requested: n, max: opts.max_grid });
    }
    spec.validate()?;
    let outer = spec.outer;
    let r = outer.radius;
    let lo = Point2::new(outer.center.x - r, outer.center.y - r);
    let hi = Point2::new(outer.center.x + r, outer.center.y + r);
    let (pixel, origin) = frame(lo, hi, n)?;

    let (kept, excluded): (Vec<Hole>, Vec<Hole>) = spec.holes().iter().partition(|h| 2.0 * h.radius >= 0.5 * pixel);
    let kept_spec = match &spec.obstacles {
        ObstacleKind::Holes(hs) => {
            let mut hs = hs.clone();
            hs.holes = kept.clone();
            DomainSpec { obstacles: ObstacleKind::Holes(hs), ..spec.clone() }
        }
        _ => spec.clone(),
    };
    let bumps_box = match &spec.obstacles {
        ObstacleKind::CantorBumps(c) => Some((c.epsilon, c.max_height())),
        _ => None,
    };
    let classify = |c: Point2, hd: f64| {
        let d = c.dist(outer.center);
        if d - hd >= r {
            return Classify::Outside;
        }
        let near_outer = d + hd >= r;
        if let Some((ex, ey)) = bumps_box {
            if c.x.abs() <= ex + hd && c.y.abs() <= ey + hd {
                return Classify::Mixed;
            }
        }
        let mut touching: Vec<&Hole> = Vec::new();
        for h in &kept {
            let dh = c.dist(h.center);
            if dh + hd <= h.radius {
                return Classify::Outside;
            }
            if dh - hd <= h.radius {
                touching.push(h);
            }
        }
        if !near_outer && touching.is_empty() {
            return Classify::Inside;
        }
        let separate = touching.iter().enumerate().all(|(a, h)| {
            h.center.dist(outer.center) + h.radius <= r
                && touching[a + 1..].iter().all(|g| g.center.dist(h.center) >= g.radius + h.radius)
        });
        if !separate {
            return Classify::Mixed;
        }
        let half = 0.5 * pixel;
        let (x0, x1, y0, y1) = (c.x - half, c.x + half, c.y - half, c.y + half);
        let mut area = if near_outer { disk_rect_area(outer, x0, x1, y0, y1) } else { pixel * pixel };
        for h in touching {
            area -= disk_rect_area(h.disk(), x0, x1, y0, y1);
        }
        Classify::Covered(area / (pixel * pixel))
    };
    let mut f = rasterize_with(n, n, pixel, origin, opts.subsamples, |p| kept_spec.contains(p), classify)?;
    if !excluded.is_empty() {
        log::debug!("{} holes below half a pixel excluded from the raster", excluded.len());
    }
    f.excluded = excluded;
    Ok(f)
}

/// Exact area of `disk` intersected with the rectangle `[x0, x1] × [y0, y1]`.
pub fn disk_rect_area(disk: Disk, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let r = disk.radius;
    let (x0, x1) = ((x0 - disk.center.x).max(-r), (x1 - disk.center.x).min(r));
    let (y0, y1) = (y0 - disk.center.y, y1 - disk.center.y);
    if x0 >= x1 || y0 >= y1 || y0 >= r || y1 <= -r {
        return 0.0;
    }
    let h = |x: f64| (r * r - x * x).max(0.0).sqrt();
    // antiderivative of h
    let hint = |x: f64| 0.5 * (x * h(x) + r * r * (x / r).clamp(-1.0, 1.0).asin());
    let mut cuts = vec![x0, x1];
    for y in [y0, y1] {
        if y.abs() < r {
            let w = h(y);
            cuts.extend([-w, w]);
        }
    }
    cuts.retain(|&x| x >= x0 && x <= x1);
    cuts.sort_by(f64::total_cmp);
    let mut area = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let hm = h(0.5 * (a + b));
        let top_is_arc = hm < y1;
        let bottom_is_arc = -hm > y0;
        if hm <= y0 || -hm >= y1 {
            continue;
        }
        let top = if top_is_arc { hint(b) - hint(a) } else { y1 * (b - a) };
        let bottom = if bottom_is_arc { -(hint(b) - hint(a)) } else { y0 * (b - a) };
        area += top - bottom;
    }
    area
}

pub fn grid_area(field: &RasterField, threshold: f64) -> f64 {
    field.values.iter().filter(|&&v| v >= threshold).count() as f64 * field.cell_area()
}

pub fn grid_perimeter(field: &RasterField, threshold: f64) -> f64 {
    grid_perimeter_with(field, threshold, ContourModel::default())
}

pub fn grid_perimeter_with(field: &RasterField, threshold: f64, model: ContourModel) -> f64 {
    contour_length(field.nx, field.ny, |k| field.values[k], threshold, model) * field.pixel
}

/// How edge crossings are placed between two pixel centers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContourModel {
    /// linear interpolation of the values
    Linear,
    /// values read as box-filtered coverage of a locally straight edge
    #[default]
    Coverage,
}

// half-width, in radians, of the normal refinement search around the Sobel direction
const NORMAL_SEARCH: f64 = 0.2;

/// Length, in pixel units, of the `t`-level contour through pixel centers,
/// with zero padding outside the grid. Saddle cells are resolved by the cell average.
///
/// Pixel values are read as box-filtered coverage of a locally straight edge. The edge
/// normal starts from the Sobel direction and is refined to fit the neighbouring
/// coverages; edge crossings sit where the implied signed distance vanishes.
/// Saturated or flat neighbourhoods fall back to linear interpolation.
pub fn contour_length<V>(nx: usize, ny: usize, val: V, t: f64, model: ContourModel) -> f64
where
    V: Fn(usize) -> f64 + Sync,
{
    let at = |i: isize, j: isize| -> f64 {
        if i < 0 || j < 0 || i as usize >= nx || j as usize >= ny {
            0.0
        } else {
            val(j as usize * nx + i as usize)
        }
    };
    let grad = |i: isize, j: isize| -> (f64, f64) {
        let gx = at(i + 1, j - 1) + 2.0 * at(i + 1, j) + at(i + 1, j + 1)
            - at(i - 1, j - 1)
            - 2.0 * at(i - 1, j)
            - at(i - 1, j + 1);
        let gy = at(i - 1, j + 1) + 2.0 * at(i, j + 1) + at(i + 1, j + 1)
            - at(i - 1, j - 1)
            - 2.0 * at(i, j - 1)
            - at(i + 1, j - 1);
        (gx, gy)
    };
    let partial = |v: f64| v > 0.02 && v < 0.98;
    // unit normal at a partial pixel, pointing into the set
    let normal = |i: isize, j: isize| -> Option<(f64, f64)> {
        let (gx, gy) = grad(i, j);
        if gx.hypot(gy) < 1e-12 {
            return None;
        }
        let c0 = at(i, j);
        let mut nb = [(0.0, 0.0, 0.0); 8];
        let mut len = 0;
        for dj in -1..=1isize {
            for di in -1..=1isize {
                let v = at(i + di, j + dj);
                if (di, dj) != (0, 0) && partial(v) {
                    nb[len] = (di as f64, dj as f64, v);
                    len += 1;
                }
            }
        }
        let phi0 = gy.atan2(gx);
        if len == 0 {
            return Some((phi0.cos(), phi0.sin()));
        }
        let residual = |phi: f64| {
            let (c, s) = (phi.cos(), phi.sin());
            let (a, b) = if c.abs() >= s.abs() { (c.abs(), s.abs()) } else { (s.abs(), c.abs()) };
            let s0 = coverage_offset(c0, a, b);
            nb[..len]
                .iter()
                .map(|&(dx, dy, v)| {
                    let e = coverage_offset(v, a, b) - s0 - (c * dx + s * dy);
                    e * e
                })
                .sum::<f64>()
        };
        let (mut lo, mut hi) = (phi0 - NORMAL_SEARCH, phi0 + NORMAL_SEARCH);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut x1, mut x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        let (mut f1, mut f2) = (residual(x1), residual(x2));
        for _ in 0..40 {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = residual(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = residual(x2);
            }
        }
        let phi = 0.5 * (lo + hi);
        Some((phi.cos(), phi.sin()))
    };
    // crossing parameter from (i, j) one step along axis `ax`
    let crossing = |i: isize, j: isize, ax: u8| -> f64 {
        let (qi, qj) = if ax == 0 { (i + 1, j) } else { (i, j + 1) };
        let (vp, vq) = (at(i, j), at(qi, qj));
        let linear = ((t - vp) / (vq - vp)).clamp(0.0, 1.0);
        if model == ContourModel::Linear {
            return linear;
        }
        let estimate = |v: f64, ci: isize, cj: isize| -> Option<f64> {
            if !partial(v) {
                return None;
            }
            let (gx, gy) = normal(ci, cj)?;
            let step = if ax == 0 { gx } else { gy };
            if step.abs() < 1e-6 {
                return None;
            }
            let (a, b) = if gx.abs() >= gy.abs() { (gx.abs(), gy.abs()) } else { (gy.abs(), gx.abs()) };
            Some((coverage_offset(v, a, b) - coverage_offset(t, a, b)) / step)
        };
        match (estimate(vp, i, j), estimate(vq, qi, qj)) {
            (Some(sp), Some(sq)) => (0.5 * (1.0 - sp - sq)).clamp(0.0, 1.0),
            (Some(sp), None) => (-sp).clamp(0.0, 1.0),
            (None, Some(sq)) => (1.0 - sq).clamp(0.0, 1.0),
            (None, None) => linear,
        }
    };
    (-1..ny as isize)
        .into_par_iter()
        .map(|j| {
            let mut total = 0.0;
            for i in -1..nx as isize {
                let a = at(i, j);
                let b = at(i + 1, j);
                let c = at(i + 1, j + 1);
                let d = at(i, j + 1);
                if (a >= t) == (b >= t) && (b >= t) == (c >= t) && (c >= t) == (d >= t) {
                    continue;
                }
                let edge = |e: u8| match e {
                    0 => crossing(i, j, 0),
                    1 => crossing(i + 1, j, 1),
                    2 => crossing(i, j + 1, 0),
                    _ => crossing(i, j, 1),
                };
                total += cell_length(a, b, c, d, t, edge);
            }
            total
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

/// Signed distance from a unit pixel's center to a straight edge covering fraction `c` of it,
/// for an edge normal with components `a >= b >= 0`. Positive means the center is covered.
fn coverage_offset(c: f64, a: f64, b: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    let lower = |c: f64| -> f64 {
        let ramp = 0.5 * b / a;
        if c <= ramp {
            -0.5 * (a + b) + (2.0 * a * b * c).sqrt()
        } else {
            -0.5 * (a - b) + (c - ramp) * a
        }
    };
    if c <= 0.5 {
        lower(c)
    } else {
        -lower(1.0 - c)
    }
}

#[inline]
fn seg(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).hypot(p.1 - q.1)
}

// corners: a = (0,0), b = (1,0), c = (1,1), d = (0,1)
#[inline]
fn cell_length(a: f64, b: f64, c: f64, d: f64, t: f64, edge: impl Fn(u8) -> f64) -> f64 {
    let case = (a >= t) as u8 | ((b >= t) as u8) << 1 | ((c >= t) as u8) << 2 | ((d >= t) as u8) << 3;
    if case == 0 || case == 15 {
        return 0.0;
    }
    let bottom = || (edge(0), 0.0);
    let right = || (1.0, edge(1));
    let top = || (edge(2), 1.0);
    let left = || (0.0, edge(3));
    match case {
        1 | 14 => seg(left(), bottom()),
        2 | 13 => seg(bottom(), right()),
        4 | 11 => seg(right(), top()),
        8 | 7 => seg(top(), left()),
        3 | 12 => seg(left(), right()),
        6 | 9 => seg(bottom(), top()),
        5 | 10 => {
            let center_in = 0.25 * (a + b + c + d) >= t;
            // a,c inside with a joined interior: cut off b and d
            if (case == 5) == center_in {
                seg(bottom(), right()) + seg(top(), left())
            } else {
                seg(left(), bottom()) + seg(right(), top())
            }
        }
        _ => unreachable!(),
    }
}

/// 4-connected components of a binary grid; returns labels (0 = background) and count.
pub fn components(nx: usize, ny: usize, set: &[bool]) -> (Vec<u32>, usize) {
    let mut labels = vec![0u32; nx * ny];
    let mut count = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..nx * ny {
        if !set[start] || labels[start] != 0 {
            continue;
        }
        count += 1;
        labels[start] = count;
        queue.push_back(start);
        while let Some(k) = queue.pop_front() {
            let (i, j) = (k % nx, k / nx);
            let mut visit = |m: usize| {
                if set[m] && labels[m] == 0 {
                    labels[m] = count;
                    queue.push_back(m);
                }
            };
            if i > 0 {
                visit(k - 1);
            }
            if i + 1 < nx {
                visit(k + 1);
            }
            if j > 0 {
                visit(k - nx);
            }
            if j + 1 < ny {
                visit(k + nx);
            }
        }
    }
    (labels, count as usize)
}

/// Pixels of `a` and `b` that differ and are not within one pixel of the boundary of `a`.
pub fn differences_outside_band(nx: usize, ny: usize, a: &[bool], b: &[bool]) -> usize {
    let on_boundary = |i: usize, j: usize| {
        let v = a[j * nx + i];
        for dj in -1i64..=1 {
            for di in -1i64..=1 {
                let (x, y) = (i as i64 + di, j as i64 + dj);
                let w = if x < 0 || y < 0 || x >= nx as i64 || y >= ny as i64 {
                    false
                } else {
                    a[y as usize * nx + x as usize]
                };
                if w != v {
                    return true;
                }
            }
        }
        false
    };
    (0..nx * ny).filter(|&k| a[k] != b[k] && !on_boundary(k % nx, k / nx)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(n: usize, pixel: f64) -> RasterField {
        RasterField::from_values(n, n, pixel, Point2::ORIGIN, vec![1.0; n * n]).unwrap()
    }

    #[test]
    fn all_ones_area() {
        let f = ones(100, 0.01);
        assert!((grid_area(&f, 0.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_frame_perimeter() {
        // each corner is clipped by a half-pixel diagonal
        let n = 100;
        let p = 0.01;
        let f = ones(n, p);
        let expect = 4.0 * n as f64 * p - (4.0 - 2.0 * 2f64.sqrt()) * p;
        assert!((grid_perimeter(&f, 0.5) - expect).abs() < 1e-12);
        assert!((grid_perimeter(&f, 0.5) - 4.0 * n as f64 * p).abs() < 2.0 * p);
    }

    #[test]
    fn single_pixel() {
        let mut v = vec![0.0; 9];
        v[4] = 1.0;
        let f = RasterField::from_values(3, 3, 1.0, Point2::ORIGIN, v).unwrap();
        assert!((grid_perimeter(&f, 0.5) - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(grid_area(&f, 0.5), 1.0);
    }

    #[test]
    fn saddle_rule() {
        let r2 = 2f64.sqrt();
        // linear crossings for corners (1, 0, 1, 0)
        let low = |e: u8| if e == 0 || e == 3 { 0.6 } else { 0.4 };
        let high = |e: u8| if e == 0 || e == 3 { 0.4 } else { 0.6 };
        // joined diagonal: the outside corners are cut off
        assert!((cell_length(1.0, 0.0, 1.0, 0.0, 0.4, low) - 0.8 * r2).abs() < 1e-12);
        // separated diagonal: the inside corners are cut off
        assert!((cell_length(1.0, 0.0, 1.0, 0.0, 0.6, high) - 0.8 * r2).abs() < 1e-12);
        assert!((cell_length(0.0, 1.0, 0.0, 1.0, 0.4, high) - 0.8 * r2).abs() < 1e-12);
    }

    #[test]
    fn disk_perimeter_and_area() {
        let f = rasterize(&DomainSpec::plain_disk(), 256).unwrap();
        let p = grid_perimeter(&f, 0.5);
        assert!((p / (2.0 * std::f64::consts::PI) - 1.0).abs() < 1e-4, "{p}");
        assert!((f.coverage_area() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn exact_pixel_area() {
        let d = Disk::unit();
        assert!((disk_rect_area(d, -2.0, 2.0, -2.0, 2.0) - std::f64::consts::PI).abs() < 1e-14);
        assert!((disk_rect_area(d, 0.0, 2.0, 0.0, 2.0) - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
        assert_eq!(disk_rect_area(d, 0.0, 0.5, 0.0, 0.5), 0.25);
        assert_eq!(disk_rect_area(d, 1.0, 2.0, 0.0, 1.0), 0.0);
        // segment cut by x > 0.5
        let seg = std::f64::consts::PI / 3.0 - 0.75f64.sqrt() / 2.0;
        assert!((disk_rect_area(d, 0.5, 1.0, -1.0, 1.0) - seg).abs() < 1e-14);
    }

    #[test]
    fn coverage_offset_inverts_box_filter() {
        assert_eq!(coverage_offset(0.5, 1.0, 0.0), 0.0);
        assert!((coverage_offset(0.8, 1.0, 0.0) - 0.3).abs() < 1e-15);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // 45 degree edge through a corner
        assert!((coverage_offset(0.0, r, r) + r).abs() < 1e-15);
        assert!((coverage_offset(0.125, r, r) + 0.5 * r).abs() < 1e-12);
        assert!((coverage_offset(1.0, r, r) - r).abs() < 1e-15);
    }

    #[test]
    fn empty_spec_field_is_zero() {
        let f = rasterize_predicate(Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0), 64, |_| false).unwrap();
        assert!(f.values.iter().all(|&v| v == 0.0));
        assert!(f.is_empty());
    }

    #[test]
    fn guards() {
        let spec = DomainSpec::plain_disk();
        assert!(rasterize(&spec, 32).is_err());
        let opts = RasterOptions { max_grid: 128, ..Default::default() };
        assert!(matches!(rasterize_opts(&spec, 256, &opts), Err(Error::MemoryLimit { .. })));
    }

    #[test]
    fn reflections_and_components() {
        let f = rasterize(&DomainSpec::plain_disk(), 64).unwrap();
        let close = |g: &RasterField| g.values.iter().zip(&f.values).all(|(a, b)| (a - b).abs() < 1e-12);
        assert!(close(&f.reflect_x()));
        assert!(close(&f.reflect_y()));
        let (_, c) = components(f.nx, f.ny, &f.threshold(0.5));
        assert_eq!(c, 1);
    }

    #[test]
    fn downsample_preserves_coverage_area() {
        let f = rasterize(&DomainSpec::plain_disk(), 128).unwrap();
        let g = f.downsample();
        assert_eq!(g.nx, 64);
        assert!((g.coverage_area() - f.coverage_area()).abs() < 1e-12);
    }

    #[test]
    fn pgm_header() {
        let f = rasterize(&DomainSpec::plain_disk(), 64).unwrap();
        let mut buf = Vec::new();
        write_pgm_to(&mut buf, &f).unwrap();
        assert!(buf.starts_with(b"P5\n"));
        let g = parse_pgm(&buf).unwrap();
        assert_eq!((g.nx, g.ny, g.pixel, g.origin), (f.nx, f.ny, f.pixel, f.origin));
        assert!(g.values.iter().zip(&f.values).all(|(a, b)| (a - b).abs() <= 0.5 / 255.0 + 1e-12));
        let body = 64 * 64;
        assert!(buf.len() > body);
        assert_eq!(buf[buf.len() - body..].len(), body);
    }
}
