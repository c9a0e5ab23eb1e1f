//! Minimal SVG line charts of sweep results.
//!
//! One polyline per strategy, mean secrecy sum-rate versus the sweep
//! value, axes labeled in bits/s/Hz. Output is deterministic for a given
//! row set.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::experiments::ExperimentRow;
use crate::strategies::StrategyFlags;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn strategy_order(s: StrategyFlags) -> usize {
    StrategyFlags::all()
        .iter()
        .position(|&f| f == s)
        .unwrap_or(0)
}

/// Renders the mean secrecy sum-rate per strategy as one polyline each.
/// Rows flagged unconverged are skipped; empty input is an error.
pub fn render_svg(rows: &[ExperimentRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyData);
    }
    let sweep_values: Vec<f64> = {
        let mut v: Vec<f64> = rows.iter().map(|r| r.sweep_value).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup();
        v
    };
    let mut strategies: Vec<StrategyFlags> = rows
        .iter()
        .map(|r| r.strategy)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    strategies.sort_by_key(|&s| strategy_order(s));

    // cell means over converged rows
    let mut series: Vec<(StrategyFlags, Vec<(f64, f64)>)> = Vec::new();
    let mut y_max = 0.0f64;
    for &s in &strategies {
        let mut pts = Vec::new();
        for &v in &sweep_values {
            let cell: Vec<f64> = rows
                .iter()
                .filter(|r| r.strategy == s && r.sweep_value == v && r.converged)
                .map(|r| r.secrecy_sum_rate)
                .collect();
            let mean = if cell.is_empty() {
                0.0
            } else {
                cell.iter().sum::<f64>() / cell.len() as f64
            };
            y_max = y_max.max(mean);
            pts.push((v, mean));
        }
        series.push((s, pts));
    }
    let x_min = sweep_values[0];
    let x_max = *sweep_values.last().unwrap();
    let x_span = (x_max - x_min).max(1e-9);
    let y_span = (y_max * 1.1).max(1e-9);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |v: f64| MARGIN_LEFT + (v - x_min) / x_span * plot_w;
    let to_y = |r: f64| MARGIN_TOP + plot_h - r / y_span * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    // axes
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}" stroke="black"/>"#,
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{MARGIN_TOP:.2}" stroke="black"/>"#
    );
    // x ticks at the sweep values
    for &v in &sweep_values {
        let x = to_x(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" font-size="12" text-anchor="middle">{v}</text>"#,
            y0 + 20.0
        );
    }
    // y ticks: 5 divisions
    for tick in 0..=5 {
        let r = y_span * tick as f64 / 5.0;
        let y = to_y(r);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/>"#,
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{r:.2}</text>"#,
            x0 - 9.0,
            y + 4.0
        );
    }
    // axis labels
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">sweep value</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.2})">average secrecy sum-rate [bits/s/Hz]</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );
    // series
    for (idx, (s, pts)) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(v, r)| format!("{:.2},{:.2}", to_x(v), to_y(r)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            coords.join(" ")
        );
        let ly = MARGIN_TOP + 20.0 + 20.0 * idx as f64;
        let lx = MARGIN_LEFT + plot_w + 10.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#,
            ly - 4.0,
            lx + 18.0,
            ly - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{ly:.2}" font-size="12">{}</text>"#,
            lx + 24.0,
            s.label()
        );
    }
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}
