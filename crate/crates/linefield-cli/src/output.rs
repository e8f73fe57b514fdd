//! CSV and SVG emitters.

use std::fmt::Write as _;

use linefield::EmpiricalDistribution;

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Histogram CSV, schema `bin_left,bin_right,count,density` with
/// density = count / (n · bin_width).
pub fn histogram_csv(e: &EmpiricalDistribution) -> String {
    let mut out = String::from("bin_left,bin_right,count,density\n");
    let n = e.n() as f64;
    for (pair, &count) in e.edges().windows(2).zip(e.counts()) {
        let width = pair[1] - pair[0];
        let density = count as f64 / (n * width);
        let _ = writeln!(
            out,
            "{},{},{count},{}",
            fmt_f64(pair[0]),
            fmt_f64(pair[1]),
            fmt_f64(density)
        );
    }
    out
}

/// Density-table CSV, schema `alpha,pdf,cdf`.
pub fn density_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("alpha,pdf,cdf\n");
    for &(alpha, pdf, cdf) in rows {
        let _ = writeln!(out, "{},{},{}", fmt_f64(alpha), fmt_f64(pdf), fmt_f64(cdf));
    }
    out
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 45.0;

/// Self-contained overlay figure: histogram bars (empirical density) behind a
/// reference-density polyline, fixed 800×600 viewBox, no external assets.
pub fn overlay_svg(e: &EmpiricalDistribution, curve: &[(f64, f64)]) -> String {
    let edges = e.edges();
    let (x_lo, x_hi) = (edges[0], edges[edges.len() - 1]);
    let n = e.n() as f64;
    let bar_density: Vec<f64> = e
        .edges()
        .windows(2)
        .zip(e.counts())
        .map(|(pair, &c)| c as f64 / (n * (pair[1] - pair[0])))
        .collect();
    let y_hi = bar_density
        .iter()
        .chain(curve.iter().map(|(_, y)| y))
        .fold(0.0f64, |m, &y| m.max(y))
        .max(1e-12)
        * 1.05;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x = |v: f64| MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w;
    let y = |v: f64| MARGIN_TOP + (1.0 - v / y_hi) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // Bars first, polyline on top.
    for (pair, &d) in e.edges().windows(2).zip(&bar_density) {
        if d <= 0.0 {
            continue;
        }
        let bx = x(pair[0]);
        let bw = x(pair[1]) - bx;
        let by = y(d);
        let bh = y(0.0) - by;
        let _ = writeln!(
            svg,
            r##"<rect x="{bx:.2}" y="{by:.2}" width="{bw:.2}" height="{bh:.2}" fill="#6baed6" stroke="white" stroke-width="0.5"/>"##
        );
    }
    if !curve.is_empty() {
        let points: Vec<String> = curve
            .iter()
            .map(|&(cx, cy)| format!("{:.2},{:.2}", x(cx), y(cy.max(0.0))))
            .collect();
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="2"/>"##,
            points.join(" ")
        );
    }

    // Axes and minimal labels.
    let _ = writeln!(
        svg,
        r#"<line x1="{l}" y1="{b}" x2="{r}" y2="{b}" stroke="black" stroke-width="1"/>"#,
        l = MARGIN_LEFT,
        r = WIDTH - MARGIN_RIGHT,
        b = y(0.0)
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{l}" y1="{t}" x2="{l}" y2="{b}" stroke="black" stroke-width="1"/>"#,
        l = MARGIN_LEFT,
        t = MARGIN_TOP,
        b = y(0.0)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{:.4}</text>"#,
        x(x_lo),
        HEIGHT - 20.0,
        x_lo
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{:.4}</text>"#,
        x(x_hi),
        HEIGHT - 20.0,
        x_hi
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="end">{:.3}</text>"#,
        MARGIN_LEFT - 6.0,
        MARGIN_TOP + 10.0,
        y_hi
    );
    svg.push_str("</svg>\n");
    svg
}
