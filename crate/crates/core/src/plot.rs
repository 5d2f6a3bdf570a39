//! Self-contained SVG line charts of sweep tables.
//!
//! Each column becomes one or more polylines, split wherever a cell is
//! empty. Output depends only on the table and title, so identical input
//! gives byte-identical files.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::sweep::SweepTable;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Round `x` up to a multiple of `step`.
fn ceil_to(x: f64, step: f64) -> f64 {
    (x / step - 1e-9).ceil() * step
}

pub fn render_svg(table: &SweepTable, title: &str) -> Result<String> {
    if table.q.is_empty() || table.columns.is_empty() {
        return Err(Error::Plot("table has no rows or no series".into()));
    }
    let x_min = table.q.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut x_max = table.q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if x_max <= x_min {
        x_max = x_min + 1.0;
    }
    let y_peak = table
        .rows
        .iter()
        .flatten()
        .flatten()
        .cloned()
        .fold(0.0f64, f64::max);
    let y_max = ceil_to(y_peak.max(0.1), 0.1);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| TOP + (1.0 - y / y_max) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );

    // axes and ticks
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    let x_ticks = 7;
    for i in 0..=x_ticks {
        let x = x_min + (x_max - x_min) * i as f64 / x_ticks as f64;
        let px = sx(x);
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#ccc"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{x:.3}</text>"##,
            TOP,
            TOP + plot_h,
            TOP + plot_h + 18.0
        );
    }
    let y_ticks = 5;
    for i in 0..=y_ticks {
        let y = y_max * i as f64 / y_ticks as f64;
        let py = sy(y);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ccc"/><text x="{:.2}" y="{:.2}" text-anchor="end">{y:.2}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">q (m.u.)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">double transmission probability</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (j, name) in table.columns.iter().enumerate() {
        let color = PALETTE[j % PALETTE.len()];
        let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for (q, row) in table.q.iter().zip(&table.rows) {
            match row.get(j).copied().flatten() {
                Some(v) => segments.last_mut().expect("segment").push((sx(*q), sy(v))),
                None => {
                    if !segments.last().expect("segment").is_empty() {
                        segments.push(Vec::new());
                    }
                }
            }
        }
        segments.retain(|s| !s.is_empty());
        let defined = !segments.is_empty();
        for seg in &segments {
            if seg.len() == 1 {
                let (x, y) = seg[0];
                let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.5" fill="{color}"/>"#);
                continue;
            }
            let pts: Vec<String> = seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                svg,
                r#"<polyline class="series-{j}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
        }
        let ly = TOP + 10.0 + 20.0 * j as f64;
        let lx = LEFT + plot_w + 12.0;
        let label = if defined {
            escape(name)
        } else {
            format!("{} (undefined)", escape(name))
        };
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"{}/><text x="{:.2}" y="{:.2}">{label}</text>"#,
            lx + 20.0,
            if defined { "" } else { r#" stroke-dasharray="3,3""# },
            lx + 26.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> SweepTable {
        SweepTable {
            columns: vec!["P_dis_a".into(), "P_dis_mix".into(), "P_dis_sup".into()],
            q: vec![0.1, 0.2, 0.3, 0.4],
            rows: vec![
                vec![Some(0.1), Some(0.2), None],
                vec![Some(0.2), None, None],
                vec![Some(0.3), Some(0.4), None],
                vec![Some(0.4), Some(0.5), None],
            ],
        }
    }

    #[test]
    fn gaps_split_polylines() {
        let svg = render_svg(&table(), "t").unwrap();
        assert_eq!(svg.matches(r#"class="series-0""#).count(), 1);
        // mixture: isolated first point, then a two-point segment
        assert_eq!(svg.matches(r#"class="series-1""#).count(), 1);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg.matches(r#"class="series-2""#).count(), 0);
        assert!(svg.contains("P_dis_sup (undefined)"));
        assert!(svg.contains("q (m.u.)"));
    }

    #[test]
    fn deterministic() {
        assert_eq!(render_svg(&table(), "x").unwrap(), render_svg(&table(), "x").unwrap());
    }

    #[test]
    fn empty_table_is_an_error() {
        let t = SweepTable {
            columns: vec!["P_dis_a".into()],
            q: vec![],
            rows: vec![],
        };
        assert!(render_svg(&t, "").is_err());
    }
}
