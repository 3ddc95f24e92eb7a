//! Boxplot rendering to SVG, one panel per class and one box per phase.
//!
//! Only the summary statistics in each [`PhaseReport`] are drawn; raw samples
//! are not consulted. Output is a pure function of the report.

use std::fmt::Write as _;

use crate::feature::PhaseReport;
use crate::report::ExperimentReport;

const PANEL_HEIGHT: f64 = 360.0;
const PLOT_TOP: f64 = 40.0;
const PLOT_BOTTOM: f64 = 310.0;
const AXIS_LEFT: f64 = 70.0;
const BOX_SLOT: f64 = 64.0;
const BOX_WIDTH: f64 = 32.0;
const PANEL_GAP: f64 = 30.0;

const PHASE_COLORS: [&str; 5] = ["#9e9e9e", "#4c72b0", "#55a868", "#dd8452", "#c44e52"];

pub fn render_svg(report: &ExperimentReport) -> String {
    let widths: Vec<f64> = report
        .classes
        .iter()
        .map(|c| AXIS_LEFT + BOX_SLOT * c.phases.len().max(1) as f64 + 20.0)
        .collect();
    let total_width = widths.iter().sum::<f64>() + PANEL_GAP * (widths.len().max(1) - 1) as f64;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="12">"#,
        w = total_width.max(1.0),
        h = PANEL_HEIGHT
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let mut x0 = 0.0;
    for (class, width) in report.classes.iter().zip(&widths) {
        let _ = writeln!(svg, r#"<g class="panel" transform="translate({x0:.2},0)">"#);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">class {}{}</text>"#,
            width / 2.0,
            class.class_id,
            if class.targeted {
                ""
            } else {
                " (no insertions)"
            }
        );
        panel(&mut svg, &class.phases);
        svg.push_str("</g>\n");
        x0 += width + PANEL_GAP;
    }
    svg.push_str("</svg>\n");
    svg
}

fn panel(svg: &mut String, phases: &[PhaseReport]) {
    let (lo, hi) = value_range(phases);
    let ticks = nice_ticks(lo, hi, 5);
    let (lo, hi) = (lo.min(ticks[0]), hi.max(*ticks.last().expect("non-empty")));
    let y = |v: f64| PLOT_BOTTOM - (v - lo) / (hi - lo) * (PLOT_BOTTOM - PLOT_TOP);
    let right = AXIS_LEFT + BOX_SLOT * phases.len().max(1) as f64;

    let _ = writeln!(
        svg,
        r#"<line x1="{AXIS_LEFT}" y1="{PLOT_TOP}" x2="{AXIS_LEFT}" y2="{PLOT_BOTTOM}" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{AXIS_LEFT}" y1="{PLOT_BOTTOM}" x2="{right:.2}" y2="{PLOT_BOTTOM}" stroke="black"/>"#
    );
    for t in &ticks {
        let ty = y(*t);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{ty:.2}" x2="{AXIS_LEFT}" y2="{ty:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            AXIS_LEFT - 5.0,
            AXIS_LEFT - 8.0,
            ty + 4.0,
            tick_label(*t)
        );
    }

    for (i, p) in phases.iter().enumerate() {
        let s = &p.stats;
        let cx = AXIS_LEFT + BOX_SLOT * (i as f64 + 0.5);
        let (left, rightb) = (cx - BOX_WIDTH / 2.0, cx + BOX_WIDTH / 2.0);
        let color = PHASE_COLORS[(p.phase_id as usize).saturating_sub(1) % PHASE_COLORS.len()];
        let _ = writeln!(svg, r#"<g class="box" data-phase="{}">"#, p.phase_id);
        let _ = writeln!(
            svg,
            r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#,
            y(s.whisker_high()),
            y(s.q3)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#,
            y(s.q1),
            y(s.whisker_low())
        );
        for w in [s.whisker_low(), s.whisker_high()] {
            let _ = writeln!(
                svg,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
                cx - BOX_WIDTH / 4.0,
                y(w),
                cx + BOX_WIDTH / 4.0,
                y(w)
            );
        }
        let _ = writeln!(
            svg,
            r#"<rect x="{left:.2}" y="{:.2}" width="{BOX_WIDTH:.2}" height="{:.2}" fill="{color}" fill-opacity="0.6" stroke="black"/>"#,
            y(s.q3),
            (y(s.q1) - y(s.q3)).max(0.5)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{left:.2}" y1="{:.2}" x2="{rightb:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#,
            y(s.median),
            y(s.median)
        );
        for o in &s.outliers {
            let _ = writeln!(
                svg,
                r#"<circle cx="{cx:.2}" cy="{:.2}" r="2.5" fill="none" stroke="black"/>"#,
                y(*o)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            PLOT_BOTTOM + 18.0,
            p.phase_id
        );
        svg.push_str("</g>\n");
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">phase</text>"#,
        (AXIS_LEFT + right) / 2.0,
        PLOT_BOTTOM + 38.0
    );
}

fn value_range(phases: &[PhaseReport]) -> (f64, f64) {
    let values = phases.iter().flat_map(|p| {
        let s = &p.stats;
        [s.whisker_low(), s.whisker_high()]
            .into_iter()
            .chain(s.outliers.iter().copied())
    });
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        let pad = (hi.abs() * 0.05).max(0.5);
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

/// Evenly spaced round tick values covering `[lo, hi]`.
fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let raw = (hi - lo) / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).floor();
    let last = (hi / step).ceil();
    (first as i64..=last as i64)
        .map(|k| k as f64 * step)
        .collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}
