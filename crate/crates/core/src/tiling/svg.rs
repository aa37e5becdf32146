//! SVG rendering of tilings. Drawing uses unit generators at the angles
//! `θ_i = π(1 - i/(n+1))`; all combinatorics elsewhere is exact, this module
//! only produces pictures.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::Tiling;
use crate::domain::LatticePoint;
use crate::rat::{self, Rat};

fn xi(n: usize, color: usize) -> (f64, f64) {
    let theta = std::f64::consts::PI * (1.0 - color as f64 / (n as f64 + 1.0));
    (theta.cos(), theta.sin())
}

fn pos(n: usize, x: &LatticePoint) -> (f64, f64) {
    let mut px = 0.0;
    let mut py = 0.0;
    for i in 1..=n {
        let (ex, ey) = xi(n, i);
        px += f64::from(x.coord(i)) * ex;
        py += f64::from(x.coord(i)) * ey;
    }
    (px, py)
}

/// Renders the diagram, optionally labelling vertices with function values.
pub fn render_svg(tiling: &Tiling, labels: Option<&BTreeMap<LatticePoint, Rat>>) -> String {
    const SCALE: f64 = 60.0;
    const PAD: f64 = 30.0;
    let n = tiling.shape().n();
    let verts = tiling.vertices();
    let (mut min_x, mut max_x, mut max_y) = (f64::MAX, f64::MIN, f64::MIN);
    for v in &verts {
        let (x, y) = pos(n, v);
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    if verts.is_empty() {
        min_x = 0.0;
        max_x = 1.0;
        max_y = 1.0;
    }
    let to_px = |p: (f64, f64)| -> (f64, f64) {
        (
            PAD + (p.0 - min_x) * SCALE,
            PAD + (max_y - p.1) * SCALE, // flip: SVG y grows downward
        )
    };
    let width = PAD * 2.0 + (max_x - min_x) * SCALE;
    let height = PAD * 2.0 + max_y * SCALE;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    for r in tiling.rhombi() {
        let corners = r.corners();
        // draw in perimeter order: anchor, +i, +i+j, +j
        let order = [&corners[0], &corners[1], &corners[3], &corners[2]];
        let pts: Vec<String> = order
            .iter()
            .map(|c| {
                let (x, y) = to_px(pos(n, c));
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let hue = (r.i * 47 + r.j * 101) % 360;
        let _ = writeln!(
            svg,
            r##"  <polygon points="{}" fill="hsl({hue},45%,85%)" stroke="#333" stroke-width="1"/>"##,
            pts.join(" ")
        );
    }
    for v in &verts {
        let (x, y) = to_px(pos(n, v));
        let _ = writeln!(
            svg,
            r##"  <circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="#111"/>"##
        );
        if let Some(labels) = labels {
            if let Some(val) = labels.get(v) {
                let _ = writeln!(
                    svg,
                    r##"  <text x="{:.2}" y="{:.2}" font-size="11" fill="#900">{}</text>"##,
                    x + 4.0,
                    y - 4.0,
                    rat::to_string(val)
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}
