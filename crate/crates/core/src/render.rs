//! Deterministic SVG figures of domains, bumps, close-ups and solver sets.
//!
//! Coordinates are written in panel pixels with three decimals, so equal
//! inputs give byte-identical files. Features smaller than [`MIN_FEATURE_PX`]
//! are drawn as fixed-size markers so that they stay visible.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cantor::{bump_profile, CantorStructure};
use crate::domain::{DomainSpec, ObstacleKind};
use crate::error::{invalid, Result};
use crate::geom::{Disk, Point2};
use crate::raster::RasterField;

/// Radius, in panel pixels, below which a hole is drawn as a marker.
pub const MIN_FEATURE_PX: f64 = 0.75;
/// Bumps narrower than this many panel pixels are not drawn.
const MIN_BUMP_PX: f64 = 0.05;
const PANEL_GAP: f64 = 16.0;

const STYLE: &str = "\
.domain{fill:#d9d9d9;stroke:#000;stroke-width:1}\
.hole{fill:#fff;stroke:#000;stroke-width:0.75}\
.marker{fill:#c0392b;stroke:none}\
.bump{fill:#fff;stroke:#000;stroke-width:0.75}\
.set{fill:#1f77b4;fill-opacity:0.45;stroke:none}\
.frame{fill:none;stroke:#666;stroke-width:0.5}\
.label{font:12px sans-serif;fill:#333}";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZoomWindow {
    pub center: [f64; 2],
    pub half_width: f64,
}

impl ZoomWindow {
    pub fn new(center: Point2, half_width: f64) -> Result<Self> {
        let w = Self { center: [center.x, center.y], half_width };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(invalid(format!("zoom half-width must be positive, got {}", self.half_width)));
        }
        if !self.center.iter().all(|c| c.is_finite()) {
            return Err(invalid("zoom center must be finite"));
        }
        Ok(())
    }

    fn center(&self) -> Point2 {
        Point2::new(self.center[0], self.center[1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub svg: String,
    pub warnings: Vec<String>,
}

impl Figure {
    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        for w in &self.warnings {
            log::warn!("{w}");
        }
        std::fs::write(path, &self.svg).map_err(Into::into)
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Affine map from a plane rectangle to a panel of pixels, with y pointing down.
#[derive(Debug, Clone, Copy)]
struct View {
    x0: f64,
    y1: f64,
    x1: f64,
    y0: f64,
    scale: f64,
}

impl View {
    fn new(x0: f64, x1: f64, y0: f64, y1: f64, size: f64) -> Self {
        let scale = size / (x1 - x0).max(y1 - y0);
        Self { x0, y1, x1, y0, scale }
    }

    fn width(&self) -> f64 {
        (self.x1 - self.x0) * self.scale
    }

    fn height(&self) -> f64 {
        (self.y1 - self.y0) * self.scale
    }

    fn px(&self, p: Point2) -> (f64, f64) {
        ((p.x - self.x0) * self.scale, (self.y1 - p.y) * self.scale)
    }

    fn sees_box(&self, lo: Point2, hi: Point2) -> bool {
        hi.x >= self.x0 && lo.x <= self.x1 && hi.y >= self.y0 && lo.y <= self.y1
    }

    fn sees_disk(&self, d: Disk) -> bool {
        let cx = d.center.x.clamp(self.x0, self.x1);
        let cy = d.center.y.clamp(self.y0, self.y1);
        let near = d.center.dist(Point2::new(cx, cy)) <= d.radius;
        // a view entirely inside the disk shows no boundary
        let corners = [(self.x0, self.y0), (self.x1, self.y0), (self.x0, self.y1), (self.x1, self.y1)];
        let swallowed = corners.iter().all(|&(x, y)| d.center.dist(Point2::new(x, y)) < d.radius);
        near && !swallowed
    }
}

struct Panel {
    body: String,
    view: View,
}

impl Panel {
    fn new(view: View) -> Self {
        Self { body: String::new(), view }
    }

    fn circle(&mut self, d: Disk, class: &str) {
        let (cx, cy) = self.view.px(d.center);
        let r = d.radius * self.view.scale;
        let (r, class) = if class == "hole" && r < MIN_FEATURE_PX { (MIN_FEATURE_PX, "marker") } else { (r, class) };
        let _ = writeln!(self.body, r#"<circle class="{class}" cx="{}" cy="{}" r="{}"/>"#, num(cx), num(cy), num(r));
    }

    fn disk_domain(&mut self, d: Disk) {
        if self.view.sees_disk(d) {
            self.circle(d, "domain");
        } else if d.contains(Point2::new(self.view.x0, self.view.y0)) {
            // the whole panel lies inside the domain
            let _ = writeln!(
                self.body,
                r#"<rect class="domain" x="0.000" y="0.000" width="{}" height="{}" stroke="none"/>"#,
                num(self.view.width()),
                num(self.view.height())
            );
        }
    }

    /// Lens `|x - m| <= delta, |y| <= f_delta(x - m)` bounded by four unit arcs.
    fn bump(&mut self, m: f64, delta: f64) {
        let h = bump_profile(delta, 0.0);
        let pts = [Point2::new(m - delta, 0.0), Point2::new(m, h), Point2::new(m + delta, 0.0), Point2::new(m, -h)];
        let r = num(self.view.scale);
        let p: Vec<(f64, f64)> = pts.iter().map(|&q| self.view.px(q)).collect();
        let _ = write!(self.body, r#"<path class="bump" d="M{},{}"#, num(p[0].0), num(p[0].1));
        for k in 1..=4 {
            let q = p[k % 4];
            let _ = write!(self.body, " A{r},{r} 0 0 1 {},{}", num(q.0), num(q.1));
        }
        self.body.push_str(r#" Z"/>"#);
        self.body.push('\n');
    }

    fn cantor(&mut self, c: &CantorStructure) {
        let mut drawn = 0usize;
        for l in c.levels() {
            if l.delta * self.view.scale < MIN_BUMP_PX {
                break;
            }
            let h = bump_profile(l.delta, 0.0);
            for g in c.gaps().filter(|g| g.level == l.level) {
                let lo = Point2::new(g.midpoint - l.delta, -h);
                let hi = Point2::new(g.midpoint + l.delta, h);
                if self.view.sees_box(lo, hi) {
                    self.bump(g.midpoint, l.delta);
                    drawn += 1;
                }
            }
        }
        let _ = writeln!(self.body, "<!-- {drawn} bumps drawn -->");
    }

    fn domain(&mut self, spec: &DomainSpec) {
        self.disk_domain(spec.outer);
        match &spec.obstacles {
            ObstacleKind::None => {}
            ObstacleKind::CantorBumps(c) => self.cantor(c),
            ObstacleKind::Holes(_) => {
                for h in spec.holes() {
                    let d = h.disk();
                    let lo = Point2::new(d.center.x - d.radius, d.center.y - d.radius);
                    let hi = Point2::new(d.center.x + d.radius, d.center.y + d.radius);
                    if self.view.sees_box(lo, hi) {
                        self.circle(d, "hole");
                    }
                }
            }
        }
    }

    /// Thresholded set as one rectangle per run of pixels in a row.
    fn set(&mut self, field: &RasterField, threshold: f64) {
        let p = field.pixel;
        for j in 0..field.ny {
            let mut i = 0;
            while i < field.nx {
                if field.get(i, j) < threshold {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < field.nx && field.get(i, j) >= threshold {
                    i += 1;
                }
                let lo = Point2::new(field.origin.x + start as f64 * p, field.origin.y + j as f64 * p);
                let hi = Point2::new(field.origin.x + i as f64 * p, lo.y + p);
                if !self.view.sees_box(lo, hi) {
                    continue;
                }
                let (x, y) = self.view.px(Point2::new(lo.x, hi.y));
                let _ = writeln!(
                    self.body,
                    r#"<rect class="set" x="{}" y="{}" width="{}" height="{}"/>"#,
                    num(x),
                    num(y),
                    num((hi.x - lo.x) * self.view.scale),
                    num(p * self.view.scale)
                );
            }
        }
    }

    fn finish(self, x: f64, label: Option<&str>) -> String {
        let (w, h) = (self.view.width(), self.view.height());
        let mut s = format!(
            r#"<svg x="{}" y="0.000" width="{}" height="{}" viewBox="0 0 {} {}">"#,
            num(x),
            num(w),
            num(h),
            num(w),
            num(h)
        );
        s.push('\n');
        s.push_str(&self.body);
        let _ = writeln!(s, r#"<rect class="frame" x="0.000" y="0.000" width="{}" height="{}"/>"#, num(w), num(h));
        if let Some(text) = label {
            let _ = writeln!(s, r#"<text class="label" x="6.000" y="16.000">{text}</text>"#);
        }
        s.push_str("</svg>\n");
        s
    }
}

fn document(title: &str, width: f64, height: f64, panels: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(width),
        num(height),
        num(width),
        num(height)
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let _ = writeln!(s, "<style>{STYLE}</style>");
    for p in panels {
        s.push_str(p);
    }
    s.push_str("</svg>\n");
    s
}

fn full_view(spec: &DomainSpec, size: f64) -> View {
    let d = spec.outer;
    let m = d.radius * 1.05;
    View::new(d.center.x - m, d.center.x + m, d.center.y - m, d.center.y + m, size)
}

/// Intersects a zoom window with the framed outer disk, warning when it had to be clipped.
fn window_view(spec: &DomainSpec, w: &ZoomWindow, size: f64, warnings: &mut Vec<String>) -> Result<View> {
    w.validate()?;
    let c = w.center();
    let d = spec.outer;
    let (bx0, bx1) = (d.center.x - d.radius, d.center.x + d.radius);
    let (by0, by1) = (d.center.y - d.radius, d.center.y + d.radius);
    let (x0, x1) = (c.x - w.half_width, c.x + w.half_width);
    let (y0, y1) = (c.y - w.half_width, c.y + w.half_width);
    let clipped = (x0.max(bx0), x1.min(bx1), y0.max(by0), y1.min(by1));
    if clipped != (x0, x1, y0, y1) || !d.contains_closed(c) {
        warnings.push(format!(
            "zoom window centered at ({}, {}) with half-width {} leaves the unit disk; clipped",
            c.x, c.y, w.half_width
        ));
    }
    if !(clipped.0 < clipped.1 && clipped.2 < clipped.3) {
        return Err(invalid("zoom window does not meet the domain"));
    }
    Ok(View::new(clipped.0, clipped.1, clipped.2, clipped.3, size))
}

/// Whole domain in one panel.
pub fn render_domain(spec: &DomainSpec, size: u32) -> Result<Figure> {
    spec.validate()?;
    let view = full_view(spec, size as f64);
    let mut panel = Panel::new(view);
    panel.domain(spec);
    let svg =
        document(&format!("domain ({})", spec.kind_name()), view.width(), view.height(), &[panel.finish(0.0, None)]);
    Ok(Figure { svg, warnings: Vec::new() })
}

/// Side-by-side close-ups, one panel per window.
pub fn render_triptych(spec: &DomainSpec, windows: &[ZoomWindow], size: u32) -> Result<Figure> {
    spec.validate()?;
    if windows.is_empty() {
        return Err(invalid("at least one zoom window is required"));
    }
    let mut warnings = Vec::new();
    let mut panels = Vec::new();
    let mut x = 0.0;
    let mut height: f64 = 0.0;
    for w in windows {
        let view = window_view(spec, w, size as f64, &mut warnings)?;
        let mut panel = Panel::new(view);
        panel.domain(spec);
        let label = format!("half-width {:.3e}", w.half_width);
        panels.push(panel.finish(x, Some(&label)));
        x += view.width() + PANEL_GAP;
        height = height.max(view.height());
    }
    let svg = document(&format!("close-ups ({})", spec.kind_name()), x - PANEL_GAP, height, &panels);
    Ok(Figure { svg, warnings })
}

/// Three nested windows around the first obstacle.
pub fn default_triptych(spec: &DomainSpec) -> Vec<ZoomWindow> {
    let (c, wide, narrow) = match &spec.obstacles {
        ObstacleKind::Holes(_) if !spec.holes().is_empty() => {
            let h = &spec.holes()[0];
            (h.center, 0.25, 8.0 * h.radius)
        }
        ObstacleKind::CantorBumps(cs) => (Point2::ORIGIN, 1.2 * cs.epsilon, 0.05 * cs.epsilon),
        _ => (Point2::new(spec.outer.center.x + 0.9 * spec.outer.radius, spec.outer.center.y), 0.1, 0.004),
    };
    let mid = (wide * narrow).sqrt();
    [wide, mid, narrow].iter().map(|&w| ZoomWindow { center: [c.x, c.y], half_width: w }).collect()
}

/// A single bump `F_delta` with its four arcs.
pub fn render_bump(delta: f64, size: u32) -> Result<Figure> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(invalid(format!("bump half-width must lie in (0, 1/2], got {delta}")));
    }
    let h = bump_profile(delta, 0.0);
    let m = 1.15 * delta.max(h);
    let view = View::new(-m, m, -m, m, size as f64);
    let mut panel = Panel::new(view);
    panel.bump(0.0, delta);
    let (ax, ay) = view.px(Point2::new(-m, 0.0));
    let (bx, _) = view.px(Point2::new(m, 0.0));
    let _ = writeln!(
        panel.body,
        r#"<line class="frame" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
        num(ax),
        num(ay),
        num(bx),
        num(ay)
    );
    let label = format!("delta = {delta}");
    let svg = document("F_delta", view.width(), view.height(), &[panel.finish(0.0, Some(&label))]);
    Ok(Figure { svg, warnings: Vec::new() })
}

/// Domain with a thresholded solver field drawn over it.
pub fn render_overlay(spec: &DomainSpec, field: &RasterField, threshold: f64, size: u32) -> Result<Figure> {
    spec.validate()?;
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(invalid(format!("threshold must lie in (0, 1), got {threshold}")));
    }
    let view = full_view(spec, size as f64);
    let mut panel = Panel::new(view);
    panel.domain(spec);
    panel.set(field, threshold);
    let svg = document("solver set", view.width(), view.height(), &[panel.finish(0.0, None)]);
    Ok(Figure { svg, warnings: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_disk_is_one_circle() {
        let f = render_domain(&DomainSpec::plain_disk(), 400).unwrap();
        assert_eq!(f.svg.matches("<circle").count(), 1);
        assert!(f.svg.contains(r#"r="190.476""#));
        assert!(!f.svg.contains("<path"));
    }

    #[test]
    fn deterministic() {
        let spec = crate::cantor::build_omega_eps(0.04, 20).unwrap();
        assert_eq!(render_domain(&spec, 600).unwrap(), render_domain(&spec, 600).unwrap());
    }

    #[test]
    fn window_outside_is_clipped_with_warning() {
        let spec = DomainSpec::plain_disk();
        let w = ZoomWindow::new(Point2::new(1.0, 0.0), 0.5).unwrap();
        let f = render_triptych(&spec, &[w], 200).unwrap();
        assert_eq!(f.warnings.len(), 1);
        assert!(f.svg.contains(r#"width="100.000" height="200.000""#));
        let far = ZoomWindow::new(Point2::new(3.0, 0.0), 0.5).unwrap();
        assert!(render_triptych(&spec, &[far], 200).is_err());
    }

    #[test]
    fn bump_has_four_arcs() {
        let f = render_bump(0.3, 300).unwrap();
        assert_eq!(f.svg.matches(" A").count(), 4);
    }

    #[test]
    fn tiny_holes_become_markers() {
        let seq = crate::porous::default_sequences(0.2, 1.0).unwrap();
        let spec = crate::porous::build_omega0(&seq, 2, crate::porous::IndexPair::first()).unwrap();
        let f = render_domain(&spec, 400).unwrap();
        assert_eq!(f.svg.matches(r#"class="marker""#).count(), 3);
        let close = render_triptych(&spec, &default_triptych(&spec), 300).unwrap();
        assert!(close.svg.contains(r#"class="hole""#));
    }
}
