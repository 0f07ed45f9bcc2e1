//! Standalone SVG scatter plots of Pareto fronts.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const BASELINE_COLOR: &str = "#555555";

/// One named set of points.
pub struct Series {
    pub label: String,
    pub points: Vec<[f64; 2]>,
}

/// Per-axis affine map `v -> (v - lo) / span`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normalization {
    pub lo: [f64; 2],
    pub span: [f64; 2],
}

impl Normalization {
    /// Scale so `points` span exactly `[0, 1]` on each axis. A zero-extent
    /// axis is only shifted.
    pub fn spanning(points: &[[f64; 2]]) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let span = [0, 1].map(|k| if hi[k] > lo[k] { hi[k] - lo[k] } else { 1.0 });
        Normalization { lo, span }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        [(p[0] - self.lo[0]) / self.span[0], (p[1] - self.lo[1]) / self.span[1]]
    }
}

fn marker(shape: usize, x: f64, y: f64, color: &str, data: &str) -> String {
    let r = 4.5;
    match shape % 5 {
        0 => format!(r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="none" stroke="{color}" stroke-width="1.5" {data}/>"#),
        1 => format!(
            r#"<rect x="{:.2}" y="{:.2}" width="{}" height="{}" fill="none" stroke="{color}" stroke-width="1.5" {data}/>"#,
            x - r,
            y - r,
            2.0 * r,
            2.0 * r
        ),
        2 => format!(
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="none" stroke="{color}" stroke-width="1.5" {data}/>"#,
            x,
            y - r,
            x - r,
            y + r,
            x + r,
            y + r
        ),
        3 => format!(
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="none" stroke="{color}" stroke-width="1.5" {data}/>"#,
            x,
            y - r,
            x + r,
            y,
            x,
            y + r,
            x - r,
            y
        ),
        _ => format!(
            r#"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="{color}" stroke-width="1.5" {data}/>"#,
            x - r,
            y - r,
            x + r,
            y + r,
            x - r,
            y + r,
            x + r,
            y - r
        ),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    (0..=4).map(|i| lo + (hi - lo) * i as f64 / 4.0).collect()
}

/// Render `series` (and the baseline first, if any) after mapping every point
/// through `norm`.
pub fn render_svg(
    axes: [&str; 2],
    baseline: Option<&Series>,
    series: &[Series],
    norm: Option<Normalization>,
) -> String {
    let map = |p: [f64; 2]| norm.map_or(p, |n| n.apply(p));
    let all: Vec<[f64; 2]> = baseline
        .into_iter()
        .chain(series)
        .flat_map(|s| s.points.iter().map(|&p| map(p)))
        .collect();
    let mut extent = Normalization::spanning(&all);
    for k in 0..2 {
        let pad = 0.05 * extent.span[k];
        extent.lo[k] -= pad;
        extent.span[k] += 2.0 * pad;
    }
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let to_px = |p: [f64; 2]| {
        let u = extent.apply(p);
        [LEFT + u[0] * plot_w, TOP + (1.0 - u[1]) * plot_h]
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    )
    .unwrap();

    let (x_lo, x_hi) = (extent.lo[0], extent.lo[0] + extent.span[0]);
    let (y_lo, y_hi) = (extent.lo[1], extent.lo[1] + extent.span[1]);
    for t in ticks(x_lo, x_hi) {
        let [px, _] = to_px([t, y_lo]);
        let y0 = TOP + plot_h;
        writeln!(svg, r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, y0 + 5.0).unwrap();
        writeln!(svg, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{t:.3}</text>"#, y0 + 18.0).unwrap();
    }
    for t in ticks(y_lo, y_hi) {
        let [_, py] = to_px([x_lo, t]);
        writeln!(svg, r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/>"#, LEFT - 5.0).unwrap();
        writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{t:.3}</text>"#, LEFT - 8.0, py + 4.0).unwrap();
    }
    let suffix = if norm.is_some() { " (normalized)" } else { "" };
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}{suffix}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(axes[0])
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text transform="translate(20 {:.2}) rotate(-90)" text-anchor="middle">{}{suffix}</text>"#,
        TOP + plot_h / 2.0,
        escape(axes[1])
    )
    .unwrap();

    let mut legend = Vec::new();
    if let Some(b) = baseline {
        writeln!(svg, r#"<g class="series" data-label="{}">"#, escape(&b.label)).unwrap();
        for &p in &b.points {
            let q = map(p);
            let [x, y] = to_px(q);
            let data = format!(r#"class="point" data-series="baseline" data-x="{}" data-y="{}""#, q[0], q[1]);
            writeln!(
                svg,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{BASELINE_COLOR}" {data}/>"#
            )
            .unwrap();
        }
        svg.push_str("</g>\n");
        legend.push((None, BASELINE_COLOR, b.label.as_str()));
    }
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        writeln!(svg, r#"<g class="series" data-label="{}">"#, escape(&s.label)).unwrap();
        for &p in &s.points {
            let q = map(p);
            let [x, y] = to_px(q);
            let data = format!(r#"class="point" data-series="{i}" data-x="{}" data-y="{}""#, q[0], q[1]);
            svg.push_str(&marker(i, x, y, color, &data));
            svg.push('\n');
        }
        svg.push_str("</g>\n");
        legend.push((Some(i), color, s.label.as_str()));
    }

    let lx = WIDTH - RIGHT + 15.0;
    for (row, (shape, color, label)) in legend.into_iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * row as f64;
        match shape {
            Some(i) => svg.push_str(&marker(i, lx, y, color, r#"class="legend""#)),
            None => write!(svg, r#"<circle cx="{lx}" cy="{y}" r="3" fill="{color}" class="legend"/>"#).unwrap(),
        }
        writeln!(svg, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 12.0, y + 4.0, escape(label)).unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}
