//! Static SVG scatter plots of persistence diagrams.

use std::fmt::Write as _;

use pdsim_core::persistence::PersistenceDiagram;

const SIZE: f64 = 360.0;
const MARGIN: f64 = 40.0;

/// Birth/death scatter with the diagonal. Essential classes are drawn as
/// triangles on the top edge.
pub fn diagram_svg(title: &str, diagrams: &[&PersistenceDiagram]) -> String {
    const COLOURS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    let top = diagrams
        .iter()
        .flat_map(|d| d.pairs().iter().map(|&(_, e)| e).chain(d.essential().iter().copied()))
        .fold(0.0f64, f64::max);
    let top = if top > 0.0 { top * 1.05 } else { 1.0 };
    let span = SIZE - 2.0 * MARGIN;
    let x = |v: f64| MARGIN + v / top * span;
    let y = |v: f64| SIZE - MARGIN - v / top * span;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
        SIZE / 2.0,
        escape(title)
    );
    let (lo, hi) = (x(0.0), x(top));
    let _ = writeln!(
        s,
        r#"<path d="M{lo:.2},{:.2} H{hi:.2} M{lo:.2},{:.2} V{:.2}" stroke="black" fill="none"/>"#,
        y(0.0),
        y(0.0),
        y(top)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{lo:.2}" y1="{:.2}" x2="{hi:.2}" y2="{:.2}" stroke="grey" stroke-dasharray="4 3"/>"#,
        y(0.0),
        y(top)
    );
    for k in 0..=4 {
        let v = top * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{v:.3}</text>"#,
            x(v),
            SIZE - MARGIN + 15.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.3}</text>"#,
            MARGIN - 4.0,
            y(v) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">birth</text>"#,
        SIZE / 2.0,
        SIZE - 6.0
    );
    let _ = writeln!(
        s,
        r#"<text x="12" y="{}" text-anchor="middle" transform="rotate(-90 12 {})">death</text>"#,
        SIZE / 2.0,
        SIZE / 2.0
    );
    for (i, d) in diagrams.iter().enumerate() {
        let c = COLOURS[i % COLOURS.len()];
        for &(b, e) in d.pairs() {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{c}" fill-opacity="0.7"/>"#,
                x(b),
                y(e)
            );
        }
        for &b in d.essential() {
            let (cx, cy) = (x(b), y(top));
            let _ = writeln!(
                s,
                r#"<path d="M{:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2} Z" fill="{c}"/>"#,
                cx - 4.0,
                cy + 4.0,
                cx + 4.0,
                cy + 4.0,
                cx,
                cy - 3.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" fill="{c}">H{}</text>"#,
            MARGIN + 8.0,
            MARGIN + 14.0 * (i + 1) as f64,
            d.dim()
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
