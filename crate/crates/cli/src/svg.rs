//! Residual-plot SVG: one labeled circle per object, axes through the origin
//! and the deadlock triangle outlined. Plot y points up, as in a usual chart, so a
//! counterclockwise triangle stays counterclockwise on screen.

use std::fmt::Write;

const SIZE: f64 = 560.0;
const MARGIN: f64 = 60.0;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Renders points `(x_i, y_i)` labeled by `names`; `triangle` holds 0-based
/// indices of the deadlock apexes.
pub fn residual_plot(names: &[String], points: &[(f64, f64)], triangle: [usize; 3]) -> String {
    let reach = points
        .iter()
        .flat_map(|&(x, y)| [x.abs(), y.abs()])
        .fold(0.0_f64, f64::max)
        .max(1e-12);
    let half = SIZE / 2.0;
    let scale = (half - MARGIN) / reach;
    let px = |x: f64| half + scale * x;
    let py = |y: f64| half - scale * y;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(
        s,
        r#"  <title>Residual plot of the top singular plane</title>"#
    );
    let _ = writeln!(
        s,
        r#"  <rect width="{SIZE}" height="{SIZE}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r##"  <g class="axes" stroke="#888" stroke-width="1">
    <line x1="{m}" y1="{half}" x2="{e}" y2="{half}"/>
    <line x1="{half}" y1="{m}" x2="{half}" y2="{e}"/>
  </g>"##,
        m = MARGIN / 2.0,
        e = SIZE - MARGIN / 2.0,
    );
    let [i, j, k] = triangle;
    let _ = writeln!(
        s,
        r##"  <polygon class="deadlock" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="#d62728" fill-opacity="0.12" stroke="#d62728" stroke-width="1.5"/>"##,
        px(points[i].0),
        py(points[i].1),
        px(points[j].0),
        py(points[j].1),
        px(points[k].0),
        py(points[k].1),
    );
    let _ = writeln!(s, r#"  <g class="points">"#);
    for (name, &(x, y)) in names.iter().zip(points) {
        let name = escape(name);
        let _ = writeln!(
            s,
            r##"    <circle class="point" cx="{:.2}" cy="{:.2}" r="4" fill="#1f77b4"><title>{name}</title></circle>"##,
            px(x),
            py(y)
        );
        let _ = writeln!(
            s,
            r#"    <text class="label" x="{:.2}" y="{:.2}">{name}</text>"#,
            px(x) + 7.0,
            py(y) - 7.0
        );
    }
    let _ = writeln!(s, "  </g>");
    s.push_str("</svg>\n");
    s
}
