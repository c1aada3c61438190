// SPDX-License-Identifier: Apache-2.0

//! Static SVG of a geometric placement, one panel per layer.
//!
//! Rectangles carry the layout's own coordinates; panels are offset with a
//! group transform so the numbers in the file match the JSON exactly.

use std::fmt::Write;

use crate::squeeze::GeometricPlacement;

const GAP_FRACTION: f64 = 0.1;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_svg(g: &GeometricPlacement) -> String {
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 1.0f64, 1.0f64);
    if let Some(first) = g.boxes.first() {
        (x0, y0, x1, y1) = (first.x, first.y, first.x + first.width, first.y + first.height);
        for b in &g.boxes {
            x0 = x0.min(b.x);
            y0 = y0.min(b.y);
            x1 = x1.max(b.x + b.width);
            y1 = y1.max(b.y + b.height);
        }
    }
    x0 = x0.min(g.rally.px);
    y0 = y0.min(g.rally.py);
    x1 = x1.max(g.rally.px);
    y1 = y1.max(g.rally.py);
    let (w, h) = ((x1 - x0).max(1.0), (y1 - y0).max(1.0));
    let gap = w * GAP_FRACTION;
    let layers = g.layers.max(1);
    let total_w = layers as f64 * w + (layers as f64 - 1.0) * gap;
    let font = (w.min(h) / 30.0).max(1.0);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {y0} {total_w} {h}" width="{}" height="{}">"#,
        (total_w / h * 400.0).round(),
        400
    );
    for layer in 0..layers {
        let dx = layer as f64 * (w + gap);
        let _ = writeln!(
            out,
            r#"  <g id="layer-{layer}" class="layer" transform="translate({dx} 0)">"#
        );
        let _ = writeln!(
            out,
            r#"    <rect class="frame" x="{x0}" y="{y0}" width="{w}" height="{h}" fill="none" stroke="gray" stroke-dasharray="4"/>"#
        );
        for b in g.boxes.iter().filter(|b| b.layer == layer) {
            let name = escape(&b.name);
            let _ = writeln!(
                out,
                r##"    <rect data-name="{name}" x="{}" y="{}" width="{}" height="{}" fill="#9ecae1" stroke="black"/>"##,
                b.x, b.y, b.width, b.height
            );
            let _ = writeln!(
                out,
                r#"    <text x="{}" y="{}" font-size="{font}" text-anchor="middle">{name}</text>"#,
                b.x + b.width / 2.0,
                b.y + b.height / 2.0
            );
        }
        let _ = writeln!(
            out,
            r#"    <circle class="rally" cx="{}" cy="{}" r="{}" fill="red"/>"#,
            g.rally.px,
            g.rally.py,
            font / 2.0
        );
        let _ = writeln!(out, "  </g>");
    }
    out.push_str("</svg>\n");
    out
}
