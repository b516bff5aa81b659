use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::problem::ReferenceFront;

const PANEL: f64 = 480.0;
const LEFT: f64 = 56.0;
const TOP: f64 = 24.0;
const PLOT: f64 = 400.0;
const FRONT_COLOR: &str = "#d62728";
const PARTICLE_COLOR: &str = "#1f77b4";

/// Affine map from data coordinates to SVG pixels.
///
/// `x ↦ left + (x − x₀)/(x₁ − x₀)·width` and
/// `y ↦ top + height − (y − y₀)/(y₁ − y₀)·height`, so larger `y` is drawn
/// higher. Data ranges are the bounding box of everything drawn, widened by
/// 5% on each side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlotFrame {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    let span = hi - lo;
    if span > 0.0 {
        (lo - 0.05 * span, hi + 0.05 * span)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

impl PlotFrame {
    /// Frame of the panel whose left edge is at `offset` pixels.
    pub fn fit(points: &[(f64, f64)], offset: f64) -> Self {
        let fold = |f: fn(&(f64, f64)) -> f64| {
            points.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
        };
        let (x0, x1) = fold(|p| p.0);
        let (y0, y1) = fold(|p| p.1);
        Self {
            x_range: padded(x0, x1),
            y_range: padded(y0, y1),
            left: offset + LEFT,
            top: TOP,
            width: PLOT,
            height: PLOT,
        }
    }

    pub fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        (self.left + (x - x0) / (x1 - x0) * self.width, self.top + self.height - (y - y0) / (y1 - y0) * self.height)
    }
}

fn axes(out: &mut String, frame: &PlotFrame, x_label: &str, y_label: &str) {
    let (l, t, w, h) = (frame.left, frame.top, frame.width, frame.height);
    let _ = writeln!(out, r#"<rect x="{l:.2}" y="{t:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="black"/>"#);
    let _ =
        writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x_label}</text>"#, l + w / 2.0, t + h + 36.0);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">{y_label}</text>"#,
        l - 40.0,
        t + h / 2.0,
        l - 40.0,
        t + h / 2.0
    );
    for (v, px) in [(frame.x_range.0, l), (frame.x_range.1, l + w)] {
        let _ = writeln!(
            out,
            r#"<text x="{px:.2}" y="{:.2}" font-size="11" text-anchor="middle">{v:.2}</text>"#,
            t + h + 16.0
        );
    }
    for (v, py) in [(frame.y_range.0, t + h), (frame.y_range.1, t)] {
        let _ = writeln!(out, r#"<text x="{:.2}" y="{py:.2}" font-size="11" text-anchor="end">{v:.2}</text>"#, l - 6.0);
    }
}

fn dots(out: &mut String, frame: &PlotFrame, pts: &[(f64, f64)], r: f64, color: &str) {
    for &(x, y) in pts {
        let (px, py) = frame.map(x, y);
        let _ = writeln!(out, r#"<circle cx="{px:.2}" cy="{py:.2}" r="{r}" fill="{color}"/>"#);
    }
}

/// Polylines through each front segment, ordered by the first coordinate.
fn front_lines(out: &mut String, frame: &PlotFrame, front: &ReferenceFront) {
    for s in 0..front.num_segments() {
        let mut seg: Vec<(f64, f64)> = front
            .points
            .iter()
            .zip(&front.segment_labels)
            .filter(|(_, &l)| l == s)
            .map(|(p, _)| (p[0], p[1]))
            .collect();
        seg.sort_by(|a, b| a.0.total_cmp(&b.0));
        if seg.len() == 1 {
            dots(out, frame, &seg, 1.5, FRONT_COLOR);
            continue;
        }
        let coords: Vec<String> = seg
            .iter()
            .map(|&(x, y)| {
                let (px, py) = frame.map(x, y);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{FRONT_COLOR}" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
    }
}

/// Axonometric projection of a point already scaled to the unit cube.
fn axonometric(p: [f64; 3]) -> (f64, f64) {
    let (c, s) = (std::f64::consts::FRAC_PI_6.cos(), std::f64::consts::FRAC_PI_6.sin());
    ((p[0] - p[1]) * c, p[2] - (p[0] + p[1]) * s)
}

fn unit_cube_scaler(all: &[&Vec<f64>]) -> impl Fn(&[f64]) -> [f64; 3] {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in all {
        for j in 0..3 {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    move |p: &[f64]| {
        let mut q = [0.0; 3];
        for j in 0..3 {
            let span = hi[j] - lo[j];
            q[j] = if span > 0.0 { (p[j] - lo[j]) / span } else { 0.5 };
        }
        q
    }
}

/// Scatter of `points` (blue) over the reference front (red).
///
/// Two objectives give one panel. Three objectives give an axonometric view
/// next to a top-down `(f₁, f₂)` view.
pub fn render_scatter(points: &[Vec<f64>], front: &ReferenceFront) -> Result<String> {
    let m = front.points.first().or(points.first()).map_or(2, Vec::len);
    if let Some(bad) = points.iter().chain(&front.points).find(|p| p.len() != m) {
        return Err(Error::Dimension { expected: m, got: bad.len() });
    }
    let mut out = String::new();
    match m {
        2 => {
            let _ = writeln!(
                out,
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PANEL}" height="{PANEL}" viewBox="0 0 {PANEL} {PANEL}" font-family="sans-serif">"#
            );
            let pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
            let all: Vec<(f64, f64)> = front.points.iter().map(|p| (p[0], p[1])).chain(pts.iter().copied()).collect();
            let frame = PlotFrame::fit(&all, 0.0);
            axes(&mut out, &frame, "f₁", "f₂");
            front_lines(&mut out, &frame, front);
            dots(&mut out, &frame, &pts, 3.0, PARTICLE_COLOR);
        }
        3 => {
            let _ = writeln!(
                out,
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{PANEL}" viewBox="0 0 {} {PANEL}" font-family="sans-serif">"#,
                2.0 * PANEL,
                2.0 * PANEL
            );
            let everything: Vec<&Vec<f64>> = front.points.iter().chain(points).collect();
            let scale = unit_cube_scaler(&everything);
            let proj = |p: &Vec<f64>| axonometric(scale(p));
            let corners = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
            let mut all: Vec<(f64, f64)> = everything.iter().map(|p| proj(p)).collect();
            all.extend(corners.iter().map(|&c| axonometric(c)));
            let frame = PlotFrame::fit(&all, 0.0);
            let (ox, oy) = {
                let (u, v) = axonometric(corners[0]);
                frame.map(u, v)
            };
            for (corner, label) in corners[1..].iter().zip(["f₁", "f₂", "f₃"]) {
                let (u, v) = axonometric(*corner);
                let (px, py) = frame.map(u, v);
                let _ = writeln!(out, r#"<line x1="{ox:.2}" y1="{oy:.2}" x2="{px:.2}" y2="{py:.2}" stroke="gray"/>"#);
                let _ = writeln!(out, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, py - 6.0);
            }
            let front_2d: Vec<(f64, f64)> = front.points.iter().map(proj).collect();
            let pts_2d: Vec<(f64, f64)> = points.iter().map(proj).collect();
            dots(&mut out, &frame, &front_2d, 1.0, FRONT_COLOR);
            dots(&mut out, &frame, &pts_2d, 3.0, PARTICLE_COLOR);

            let top_front: Vec<(f64, f64)> = front.points.iter().map(|p| (p[0], p[1])).collect();
            let top_pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
            let all_top: Vec<(f64, f64)> = top_front.iter().chain(&top_pts).copied().collect();
            let top = PlotFrame::fit(&all_top, PANEL);
            axes(&mut out, &top, "f₁", "f₂");
            dots(&mut out, &top, &top_front, 1.0, FRONT_COLOR);
            dots(&mut out, &top, &top_pts, 3.0, PARTICLE_COLOR);
        }
        _ => return Err(Error::UnsupportedDimension {
            m,
            hint:
                "scatter plots cover two or three objectives; export metrics.csv and plot pairwise projections instead",
        }),
    }
    out.push_str("</svg>\n");
    Ok(out)
}
