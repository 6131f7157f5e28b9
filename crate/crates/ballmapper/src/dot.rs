//! Graphviz export and the shared color ramp.

use std::fmt::Write;

use ballmapper_core::mapper::{BallMapperGraph, Coloring};

use crate::error::AppResult;
use crate::json::check_coloring;

/// Rainbow stops from the bottom of the scale (red) to the top (blue).
pub const RAMP_STOPS: [(f64, [u8; 3]); 5] = [
    (0.0, [0xff, 0x00, 0x00]),
    (0.25, [0xff, 0xff, 0x00]),
    (0.5, [0x00, 0xff, 0x00]),
    (0.75, [0x00, 0xff, 0xff]),
    (1.0, [0x00, 0x00, 0xff]),
];

/// Fill for balls without a value.
pub const ABSENT_COLOR: &str = "#bfbfbf";

/// Linear interpolation between neighbouring stops; `t` is clamped to `[0, 1]`.
pub fn ramp(t: f64) -> [u8; 3] {
    let t = if t.is_nan() { 0.5 } else { t.clamp(0.0, 1.0) };
    let i = RAMP_STOPS.windows(2).position(|w| t <= w[1].0).unwrap_or(RAMP_STOPS.len() - 2);
    let ((t0, c0), (t1, c1)) = (RAMP_STOPS[i], RAMP_STOPS[i + 1]);
    let f = (t - t0) / (t1 - t0);
    std::array::from_fn(|k| (c0[k] as f64 + (c1[k] as f64 - c0[k] as f64) * f).round() as u8)
}

pub fn hex(rgb: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2])
}

/// Fill color of one ball under a coloring.
pub fn ball_color(coloring: Option<&Coloring>, ball_id: u32) -> String {
    match coloring.and_then(|c| c.value(ball_id).map(|v| c.normalized(v))) {
        Some(t) => hex(ramp(t)),
        None => ABSENT_COLOR.into(),
    }
}

/// Node width in inches, growing with the square root of the member count
/// so that node area tracks ball size.
pub fn node_width(size: usize, max_size: usize) -> f64 {
    0.3 + 0.9 * (size as f64 / max_size.max(1) as f64).sqrt()
}

/// Undirected DOT with one node per ball and one `a -- b` line per edge.
pub fn export_dot(graph: &BallMapperGraph, coloring: Option<&Coloring>) -> AppResult<String> {
    if let Some(c) = coloring {
        check_coloring(graph, c)?;
    }
    let max_size = graph.balls().iter().map(|b| b.size()).max().unwrap_or(1);
    let mut out = String::from("graph ballmapper {\n");
    if let Some(c) = coloring {
        let label = format!("{} [{}, {}]", c.label, c.scale_min, c.scale_max).replace('"', "\\\"");
        writeln!(out, "  label=\"{label}\";").unwrap();
    }
    out.push_str("  node [shape=circle, style=filled, fixedsize=true, fontsize=10];\n");
    for b in graph.balls() {
        writeln!(
            out,
            "  {} [label=\"{}\", width={:.4}, fillcolor=\"{}\", tooltip=\"size {}\"];",
            b.id,
            b.id,
            node_width(b.size(), max_size),
            ball_color(coloring, b.id),
            b.size()
        )
        .unwrap();
    }
    for (a, b) in graph.edges() {
        writeln!(out, "  {a} -- {b};").unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_hits_the_stops() {
        for (t, rgb) in RAMP_STOPS {
            assert_eq!(ramp(t), rgb);
        }
        assert_eq!(ramp(-3.0), [0xff, 0, 0]);
        assert_eq!(ramp(7.0), [0, 0, 0xff]);
        assert_eq!(ramp(0.125), [0xff, 0x80, 0]);
        assert_eq!(hex(ramp(1.0)), "#0000ff");
    }
}
