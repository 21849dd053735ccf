//! Minimal deterministic SVG line-panel renderer. No external renderer is
//! needed; the output is a self-contained vector file and byte-identical
//! across runs for the same data.

use std::fmt::Write;

const PANEL_WIDTH: f64 = 960.0;
const PANEL_HEIGHT: f64 = 130.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 15.0;
const TITLE_HEIGHT: f64 = 24.0;
const PAD: f64 = 8.0;

/// Render stacked line panels under a shared title.
pub fn render_panels(title: &str, panels: &[(String, Vec<f64>)]) -> String {
    let total_height = TITLE_HEIGHT + panels.len() as f64 * PANEL_HEIGHT + PAD;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PANEL_WIDTH}" height="{total_height}" viewBox="0 0 {PANEL_WIDTH} {total_height}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{PANEL_WIDTH}" height="{total_height}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="17" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        PANEL_WIDTH / 2.0,
        escape(title)
    );

    for (i, (label, data)) in panels.iter().enumerate() {
        let top = TITLE_HEIGHT + i as f64 * PANEL_HEIGHT;
        let _ = writeln!(svg, "{}", render_panel(label, data, top));
    }
    svg.push_str("</svg>\n");
    svg
}

fn render_panel(label: &str, data: &[f64], top: f64) -> String {
    let plot_left = MARGIN_LEFT;
    let plot_right = PANEL_WIDTH - MARGIN_RIGHT;
    let plot_top = top + PAD;
    let plot_bottom = top + PANEL_HEIGHT - PAD;

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in data {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || lo == hi {
        let mid = if lo.is_finite() { lo } else { 0.0 };
        lo = mid - 1.0;
        hi = mid + 1.0;
    }

    let x_of = |i: usize| {
        plot_left + (plot_right - plot_left) * i as f64 / (data.len().max(2) - 1) as f64
    };
    let y_of = |v: f64| plot_bottom - (plot_bottom - plot_top) * (v - lo) / (hi - lo);

    let mut points = String::with_capacity(data.len() * 12);
    for (i, &v) in data.iter().enumerate() {
        let _ = write!(points, "{:.2},{:.2} ", x_of(i), y_of(v));
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r##"<rect x="{plot_left}" y="{plot_top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#cccccc"/>"##,
        plot_right - plot_left,
        plot_bottom - plot_top
    );
    let _ = writeln!(
        out,
        r#"<text x="8" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
        (plot_top + plot_bottom) / 2.0 - 8.0,
        escape(label)
    );
    let _ = writeln!(
        out,
        r##"<text x="8" y="{:.2}" font-family="sans-serif" font-size="9" fill="#666666">[{:.1}, {:.1}]</text>"##,
        (plot_top + plot_bottom) / 2.0 + 8.0,
        lo,
        hi
    );
    let _ = write!(
        out,
        r##"<polyline fill="none" stroke="#1f77b4" stroke-width="0.8" points="{}"/>"##,
        points.trim_end()
    );
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
