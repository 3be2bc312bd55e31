//! Static SVG rendering of a biplot.

use std::fmt::Write;

use cricket_rules_core::rules::{BiplotData, PointSide};

const SIZE: f64 = 560.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Row points are drawn as filled circles, column points as open squares.
pub fn render(b: &BiplotData, title: &str) -> String {
    let extent = b
        .points
        .iter()
        .flat_map(|p| [p.x.abs(), p.y.abs()])
        .fold(0.0f64, f64::max)
        .max(1e-9)
        * 1.1;
    let scale = (SIZE / 2.0 - MARGIN) / extent;
    let c = SIZE / 2.0;
    let px = |x: f64| c + x * scale;
    let py = |y: f64| c - y * scale;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{c}" y="24" text-anchor="middle" font-size="14">{}</text>"#, escape(title));
    let _ = writeln!(
        s,
        r##"<line x1="{MARGIN}" y1="{c}" x2="{}" y2="{c}" stroke="#999"/><line x1="{c}" y1="{MARGIN}" x2="{c}" y2="{}" stroke="#999"/>"##,
        SIZE - MARGIN,
        SIZE - MARGIN
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">dim 1</text>"#, SIZE - MARGIN, c - 6.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}">dim 2</text>"#, c + 6.0, MARGIN - 6.0);
    for p in &b.points {
        let (x, y) = (px(p.x), py(p.y));
        match p.side {
            PointSide::Row => {
                let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="#c0392b"/>"##);
            }
            PointSide::Column => {
                let _ = writeln!(
                    s,
                    r##"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="none" stroke="#2c3e80" stroke-width="1.5"/>"##,
                    x - 4.0,
                    y - 4.0
                );
            }
        }
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 7.0, y - 6.0, escape(p.label));
    }
    s.push_str("</svg>\n");
    s
}
