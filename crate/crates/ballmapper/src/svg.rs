//! Static SVG rendering of a laid-out graph.

use std::fmt::Write;

use ballmapper_core::mapper::{BallMapperGraph, Coloring, Position};
use ballmapper_core::Error;

use crate::dot::{ball_color, hex, ramp};
use crate::error::AppResult;
use crate::json::check_coloring;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;
const MAX_RADIUS: f64 = 18.0;
const MIN_RADIUS: f64 = 3.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Fit the layout into an 800x600 canvas. Circle area tracks ball size;
/// with a coloring, a legend bar shows the scale bounds.
pub fn render_svg(graph: &BallMapperGraph, positions: &[Position], coloring: Option<&Coloring>) -> AppResult<String> {
    if positions.len() != graph.ball_count() {
        return Err(
            Error::Consistency(format!("{} positions for {} balls", positions.len(), graph.ball_count())).into()
        );
    }
    if let Some(c) = coloring {
        check_coloring(graph, c)?;
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in positions {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let legend = if coloring.is_some() { 40.0 } else { 0.0 };
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let scale = ((WIDTH - 2.0 * MARGIN) / span).min((HEIGHT - 2.0 * MARGIN - legend) / span);
    let centre = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    let to_px =
        |p: &Position| [WIDTH / 2.0 + (p[0] - centre[0]) * scale, (HEIGHT - legend) / 2.0 - (p[1] - centre[1]) * scale];
    let max_size = graph.balls().iter().map(|b| b.size()).max().unwrap_or(1) as f64;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
    out.push_str("<g stroke=\"#555555\" stroke-width=\"1.5\">\n");
    for &(a, b) in graph.edges() {
        let (pa, pb) = (to_px(&positions[a as usize - 1]), to_px(&positions[b as usize - 1]));
        writeln!(out, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, pa[0], pa[1], pb[0], pb[1]).unwrap();
    }
    out.push_str("</g>\n<g stroke=\"#222222\" stroke-width=\"0.8\" font-family=\"sans-serif\" font-size=\"9\">\n");
    for (b, p) in graph.balls().iter().zip(positions) {
        let px = to_px(p);
        let r = MIN_RADIUS + (MAX_RADIUS - MIN_RADIUS) * (b.size() as f64 / max_size).sqrt();
        writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="{}"><title>ball {} (size {})</title></circle>"#,
            px[0],
            px[1],
            r,
            ball_color(coloring, b.id),
            b.id,
            b.size()
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" stroke="none" text-anchor="middle">{}</text>"#,
            px[0],
            px[1] - r - 2.0,
            b.id
        )
        .unwrap();
    }
    out.push_str("</g>\n");
    if let Some(c) = coloring {
        let (x0, y0, w) = (MARGIN, HEIGHT - 30.0, 200.0);
        out.push_str("<defs><linearGradient id=\"ramp\">");
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            write!(out, r#"<stop offset="{t}" stop-color="{}"/>"#, hex(ramp(t))).unwrap();
        }
        out.push_str("</linearGradient></defs>\n");
        writeln!(out, r#"<rect x="{x0}" y="{y0}" width="{w}" height="10" fill="url(#ramp)"/>"#).unwrap();
        writeln!(
            out,
            r#"<text x="{x0}" y="{}" font-family="sans-serif" font-size="10">{} {}</text>"#,
            y0 - 4.0,
            escape(&c.label),
            c.scale_min
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
            x0 + w,
            y0 - 4.0,
            c.scale_max
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
