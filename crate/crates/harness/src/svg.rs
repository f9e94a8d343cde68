//! Standalone SVG rendering of a trace: arena outline, collection zone,
//! final cube positions, and one polyline per robot.

use std::fmt::Write;

use crate::error::HarnessError;
use crate::trace::{parse_trace, TraceData};

/// Distinct strokes for up to six robots; more robots cycle the palette.
const ROBOT_COLORS: [&str; 6] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628",
];

/// Render a trace document to a standalone SVG string.
pub fn render_trace(trace_text: &str) -> Result<String, HarnessError> {
    let data = parse_trace(trace_text)?;
    Ok(render_data(&data))
}

fn render_data(data: &TraceData) -> String {
    let half = data.arena_side / 2.0;
    let zh = data.zone_side / 2.0;
    let margin = 0.05 * data.arena_side + 0.2;
    let span = data.arena_side + 2.0 * margin;

    let mut svg = String::with_capacity(16 * 1024);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3} {:.3} {:.3} {:.3}">"#,
        -half - margin,
        -half - margin,
        span,
        span
    );
    // World coordinates have +y up; SVG has +y down.
    svg.push_str("<g transform=\"scale(1,-1)\">\n");

    let _ = writeln!(
        svg,
        r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#fcfcf8" stroke="#222222" stroke-width="{:.3}"/>"##,
        -half,
        -half,
        data.arena_side,
        data.arena_side,
        0.01 * data.arena_side
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#e3f2e3" stroke="#2c7a2c" stroke-width="{:.3}"/>"##,
        -zh,
        -zh,
        data.zone_side,
        data.zone_side,
        0.005 * data.arena_side
    );

    for (_, state, x, y) in data.final_cubes() {
        let fill = match state.as_str() {
            "Banked" => "#2c7a2c",
            "Carried" => "#888888",
            _ => "#8a6d3b",
        };
        let _ = writeln!(
            svg,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="0.07" fill="{fill}"/>"#
        );
    }

    for (k, id) in data.robot_ids().into_iter().enumerate() {
        let color = ROBOT_COLORS[k % ROBOT_COLORS.len()];
        let points: Vec<String> = data
            .states
            .iter()
            .filter(|s| s.robot_id == id)
            .map(|s| format!("{:.3},{:.3}", s.true_x, s.true_y))
            .collect();
        if points.is_empty() {
            continue;
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="0.05" stroke-linejoin="round" stroke-linecap="round" opacity="0.85"/>"#,
            points.join(" ")
        );
    }

    svg.push_str("</g>\n</svg>\n");
    svg
}
