//! SVG 1.1 figures: the chart domain of ℝX with ℝC and plane sections, and
//! the affine picture of a hyperelliptic curve.

use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use sepsemi_core::hyper::HyperellipticCurve;
use sepsemi_core::quadric::Chart;
use sepsemi_core::topology::{OrientationAssignment, PlaneSection, RealLocus};

const W: f64 = 720.0;
const H: f64 = 480.0;
const MARGIN: f64 = 30.0;
const COLORS: [&str; 6] = ["#c0392b", "#2471a3", "#229954", "#8e44ad", "#d68910", "#17a589"];

/// Accumulates an SVG document in a fixed viewport with a data box.
struct Canvas {
    out: String,
    x: (f64, f64),
    y: (f64, f64),
}

impl Canvas {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r##"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">
<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="#888" stroke-width="1"/>"##,
            W - 2.0 * MARGIN,
            H - 2.0 * MARGIN
        );
        Canvas { out, x, y }
    }

    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let sx = MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (W - 2.0 * MARGIN);
        let sy = H - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (H - 2.0 * MARGIN);
        (sx, sy)
    }

    /// Polyline pieces; `dashed` for auxiliary curves.
    fn path(&mut self, pieces: &[Vec<(f64, f64)>], color: &str, width: f64, dashed: bool) {
        let mut d = String::new();
        for piece in pieces.iter().filter(|p| p.len() > 1) {
            for (i, &(x, y)) in piece.iter().enumerate() {
                let (a, b) = self.px(x, y);
                let _ = write!(d, "{}{a:.2},{b:.2} ", if i == 0 { "M" } else { "L" });
            }
        }
        if d.is_empty() {
            return;
        }
        let dash = if dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            self.out,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="{width}"{dash}/>"#,
            d.trim_end()
        );
    }

    /// A filled arrowhead at (x, y) pointing along (dx, dy) in data units.
    fn arrow(&mut self, x: f64, y: f64, dx: f64, dy: f64, color: &str) {
        let (a, b) = self.px(x, y);
        let (c, d) = self.px(x + dx, y + dy);
        let (ux, uy) = (c - a, d - b);
        let n = (ux * ux + uy * uy).sqrt();
        if n == 0.0 || !n.is_finite() {
            return;
        }
        let (ux, uy) = (ux / n, uy / n);
        let s = 7.0;
        let tip = (a + s * ux, b + s * uy);
        let l = (a - s * ux + 0.6 * s * uy, b - s * uy - 0.6 * s * ux);
        let r = (a - s * ux - 0.6 * s * uy, b - s * uy + 0.6 * s * ux);
        let _ = writeln!(
            self.out,
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{color}"/>"#,
            tip.0, tip.1, l.0, l.1, r.0, r.1
        );
    }

    fn text(&mut self, x: f64, y: f64, s: &str) {
        let (a, b) = self.px(x, y);
        let _ = writeln!(self.out, r#"<text x="{a:.2}" y="{b:.2}" font-family="sans-serif" font-size="12">{s}</text>"#);
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

/// Splits a chart polyline where it wraps around the domain.
fn split_wraps(pts: &[(f64, f64)], periodic_v: bool) -> Vec<Vec<(f64, f64)>> {
    let mut out: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    for (i, &p) in pts.iter().enumerate() {
        if i > 0 {
            let q = pts[i - 1];
            let jump_v = if periodic_v { PI } else { 1.0 };
            if (p.0 - q.0).abs() > PI || (p.1 - q.1).abs() > jump_v {
                out.push(Vec::new());
            }
        }
        out.last_mut().expect("nonempty").push(p);
    }
    out
}

/// Sections drawn in a chart figure.
pub struct SectionStyle<'a> {
    pub section: &'a PlaneSection,
    /// D-sections are solid, auxiliary ones dashed.
    pub auxiliary: bool,
}

/// The chart domain with ℝC, the given sections and one arrow per arc of
/// the orientation (or along the traversal when none is given).
pub fn chart_figure(
    locus: &RealLocus,
    sections: &[SectionStyle<'_>],
    orientation: Option<&OrientationAssignment>,
) -> String {
    let kind = locus.quadric.kind;
    let chart = Chart::new(kind);
    let mut cv = Canvas::new((0.0, TAU), chart.v_range());
    for s in sections {
        let mut pieces = Vec::new();
        for poly in &s.section.d1 {
            let pts: Vec<(f64, f64)> = poly.iter().chain(poly.first()).map(|y| chart.inverse(y)).collect();
            pieces.extend(split_wraps(&pts, chart.v_periodic()));
        }
        if let Some(line) = &s.section.d0 {
            let pts: Vec<(f64, f64)> =
                (0..=400).map(|k| line.point(PI * k as f64 / 400.0)).map(|y| chart.inverse(&y)).collect();
            pieces.extend(split_wraps(&pts, chart.v_periodic()));
        }
        let width = if s.section.d0.is_some() { 3.0 } else { 1.5 };
        cv.path(&pieces, "#333", width, s.auxiliary);
    }
    for lp in &locus.loops {
        let color = COLORS[lp.component % COLORS.len()];
        let mut pts = lp.chart.clone();
        pts.extend(lp.chart.first());
        cv.path(&split_wraps(&pts, chart.v_periodic()), color, 2.0, false);
        // arrows at the midpoints of the arcs of the orientation
        let marks: Vec<(f64, i8)> = match orientation.and_then(|o| o.loops.get(lp.component)) {
            Some(lo) if !lo.crossings.is_empty() => {
                let k = lo.crossings.len();
                (0..k)
                    .map(|j| {
                        let a = lo.crossings[j].arc;
                        let mut b = lo.crossings[(j + 1) % k].arc;
                        if b <= a {
                            b += lo.length;
                        }
                        (((a + b) / 2.0) % lo.length, lo.signs[j])
                    })
                    .collect()
            }
            Some(lo) => (0..3).map(|j| (lo.length * (j as f64 + 0.25) / 3.0, lo.signs[0])).collect(),
            None => (0..3).map(|j| (lp.length * (j as f64 + 0.25) / 3.0, 1)).collect(),
        };
        for (s, sg) in marks {
            let i = lp.arc.partition_point(|&a| a < s).min(lp.chart.len() - 1);
            let j = (i + 1) % lp.chart.len();
            let (p, q) = (lp.chart[i], lp.chart[j]);
            let (du, dv) = (q.0 - p.0, q.1 - p.1);
            if du.abs() > PI || dv.abs() > PI {
                continue;
            }
            let sg = sg as f64;
            cv.arrow(p.0, p.1, sg * du, sg * dv, color);
        }
        let (u, v) = lp.chart[0];
        cv.text(u, v, &format!("c{}", lp.component + 1));
    }
    cv.finish()
}

/// The affine picture of y² = F(x) over `x_range`, with vertical lines at
/// `sections` (solid) and `auxiliary` (dashed) and arrows of the
/// orientation.
pub fn hyper_figure(
    h: &HyperellipticCurve,
    x_range: (f64, f64),
    sections: &[f64],
    auxiliary: &[f64],
    orientation: Option<&OrientationAssignment>,
) -> String {
    let n = 600;
    let xs: Vec<f64> = (0..=n).map(|k| x_range.0 + (x_range.1 - x_range.0) * k as f64 / n as f64).collect();
    let ymax = xs.iter().map(|&x| h.y(x, true)).fold(0.0f64, f64::max).min(1e3) * 1.1;
    let mut cv = Canvas::new(x_range, (-ymax, ymax));
    for (xs_, dashed) in [(sections, false), (auxiliary, true)] {
        for &x in xs_ {
            cv.path(&[vec![(x, -ymax), (x, ymax)]], "#333", 1.5, dashed);
        }
    }
    for (b, upper) in [(0, true), (1, false)] {
        let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x, h.y(x, upper).clamp(-ymax, ymax))).collect();
        let color = COLORS[if h.is_odd() { b } else { 0 }];
        cv.path(&[pts], color, 2.0, false);
        for k in 1..4 {
            let x = x_range.0 + (x_range.1 - x_range.0) * k as f64 / 4.0;
            let y = h.y(x, upper);
            let (c, s) = h.position(x, y);
            let sg = orientation.and_then(|o| o.sign_at(c, s).ok()).unwrap_or(1) as f64;
            let dx = 1e-3 * (x_range.1 - x_range.0);
            cv.arrow(x, y, sg * dx, sg * (h.y(x + dx, upper) - y), color);
        }
    }
    cv.finish()
}
