//! Minimal SVG emission for 2-d scenes: data points, region boundaries,
//! kernel hulls and oriented boxes.

use std::path::Path;

use crate::error::Result;

pub struct SvgScene {
    pub points: Vec<[f64; 2]>,
    /// Closed polylines with a stroke color, drawn in order.
    pub polygons: Vec<(Vec<[f64; 2]>, String)>,
}

const SIZE: f64 = 640.0;
const MARGIN: f64 = 20.0;

fn map(p: [f64; 2]) -> (f64, f64) {
    // Unit square to viewport, y up.
    (
        MARGIN + p[0] * (SIZE - 2.0 * MARGIN),
        SIZE - MARGIN - p[1] * (SIZE - 2.0 * MARGIN),
    )
}

pub fn render_svg(scene: &SvgScene, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    out.push_str(&format!(
        "  <rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"
    ));
    for (ring, color) in &scene.polygons {
        if ring.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (i, p) in ring.iter().enumerate() {
            let (x, y) = map(*p);
            d.push_str(&format!("{}{x:.2} {y:.2} ", if i == 0 { "M" } else { "L" }));
        }
        d.push('Z');
        out.push_str(&format!(
            "  <path d=\"{d}\" fill=\"{color}\" fill-opacity=\"0.08\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
        ));
    }
    for p in &scene.points {
        let (x, y) = map(*p);
        out.push_str(&format!(
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.4\" fill=\"black\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    std::fs::write(path, out)?;
    Ok(())
}
