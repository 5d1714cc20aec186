//! Standalone SVG charts: the relevance bar chart with box-plot whiskers and
//! threshold lines, and the forecast overlay.

use delaynet_core::estimate::{selection_levels, EmbeddingEstimate, RelevanceProfile};
use delaynet_core::forecast::ForecastReport;
use std::fmt::Write;

const BAR_FILL: &str = "#4878a8";
const BOX_FILL: &str = "#f0c040";

/// Bar chart of mean relevances, one box plot per dimension, a dashed line
/// at the m threshold and a solid line at the relevance floor.
pub fn relevance_chart(profile: &RelevanceProfile, estimate: &EmbeddingEstimate) -> String {
    let n = profile.dims();
    let (quantile, floor) = selection_levels(&profile.mean, estimate.eps_max, estimate.eps_min);
    let threshold = quantile.max(floor);

    let slot = 36.0;
    let (left, right, top, bottom) = (56.0, 16.0, 24.0, 44.0);
    let plot_w = slot * n as f64;
    let plot_h = 320.0;
    let width = left + plot_w + right;
    let height = top + plot_h + bottom;

    let mut y_max = threshold;
    for s in &profile.summaries {
        y_max = y_max.max(s.max);
    }
    for &m in &profile.mean {
        y_max = y_max.max(m);
    }
    y_max *= 1.05;
    if y_max <= 0.0 {
        y_max = 1.0;
    }
    let y = |v: f64| top + plot_h - (v / y_max) * plot_h;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = write!(svg, r#"<rect width="{width:.0}" height="{height:.0}" fill="white"/>"#);

    // axes
    let _ = write!(
        svg,
        r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{}" stroke="black"/>"#,
        top + plot_h
    );
    let _ = write!(
        svg,
        r#"<line x1="{left}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        top + plot_h,
        left + plot_w,
        top + plot_h
    );
    for tick in 0..=4 {
        let value = y_max * tick as f64 / 4.0;
        let ty = y(value);
        let _ = write!(
            svg,
            r#"<line x1="{}" y1="{ty:.1}" x2="{left}" y2="{ty:.1}" stroke="black"/><text x="{}" y="{:.1}" font-size="11" text-anchor="end">{value:.3}</text>"#,
            left - 4.0,
            left - 6.0,
            ty + 4.0
        );
    }

    // bars and box plots
    let label_step = n.div_ceil(16);
    for i in 0..n {
        let x0 = left + i as f64 * slot;
        let center = x0 + slot / 2.0;
        let bar_w = slot * 0.62;
        let bar_y = y(profile.mean[i]);
        let _ = write!(
            svg,
            r#"<rect x="{:.1}" y="{bar_y:.1}" width="{bar_w:.1}" height="{:.1}" fill="{BAR_FILL}"/>"#,
            center - bar_w / 2.0,
            top + plot_h - bar_y
        );
        let s = &profile.summaries[i];
        let _ = write!(
            svg,
            r#"<line x1="{center:.1}" y1="{:.1}" x2="{center:.1}" y2="{:.1}" stroke="black"/>"#,
            y(s.min),
            y(s.max)
        );
        let box_w = slot * 0.3;
        let _ = write!(
            svg,
            r#"<rect x="{:.1}" y="{:.1}" width="{box_w:.1}" height="{:.1}" fill="{BOX_FILL}" stroke="black" stroke-width="0.6"/>"#,
            center - box_w / 2.0,
            y(s.q3),
            (y(s.q1) - y(s.q3)).max(0.5)
        );
        let _ = write!(
            svg,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
            center - box_w / 2.0,
            y(s.median),
            center + box_w / 2.0,
            y(s.median)
        );
        if i % label_step == 0 {
            let _ = write!(
                svg,
                r#"<text x="{center:.1}" y="{:.1}" font-size="11" text-anchor="middle">{}</text>"#,
                top + plot_h + 16.0,
                i + 1
            );
        }
    }

    // threshold lines
    let ty = y(threshold);
    let _ = write!(
        svg,
        r##"<line x1="{left}" y1="{ty:.1}" x2="{:.1}" y2="{ty:.1}" stroke="#2040c0" stroke-dasharray="6,4"/>"##,
        left + plot_w
    );
    let fy = y(floor);
    let _ = write!(
        svg,
        r##"<line x1="{left}" y1="{fy:.1}" x2="{:.1}" y2="{fy:.1}" stroke="#c03030"/>"##,
        left + plot_w
    );
    let _ = write!(
        svg,
        r#"<text x="{left}" y="{:.1}" font-size="12">m={} tau={} (peak {}, score {:.2})</text>"#,
        top - 8.0,
        estimate.m,
        estimate.tau,
        estimate.peak,
        estimate.score
    );
    svg.push_str("</svg>");
    svg
}

/// Forecast overlay: solid predicted curve against a dashed expected curve.
pub fn overlay_chart(report: &ForecastReport) -> String {
    let n = report.predictions.len();
    let (left, right, top, bottom) = (56.0, 16.0, 24.0, 40.0);
    let plot_w = 700.0;
    let plot_h = 280.0;
    let width = left + plot_w + right;
    let height = top + plot_h + bottom;

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in report.predictions.iter().chain(&report.targets) {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    if hi <= lo {
        hi = lo + 1.0;
    }
    let pad = (hi - lo) * 0.05;
    let (lo, hi) = (lo - pad, hi + pad);
    let x = |i: usize| left + plot_w * i as f64 / (n.max(2) - 1) as f64;
    let y = |v: f64| top + plot_h - (v - lo) / (hi - lo) * plot_h;

    let polyline = |values: &[f64]| -> String {
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{:.1},{:.1}", x(i), y(v)))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = write!(svg, r#"<rect width="{width:.0}" height="{height:.0}" fill="white"/>"#);
    let _ = write!(
        svg,
        r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{}" stroke="black"/><line x1="{left}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        top + plot_h,
        top + plot_h,
        left + plot_w,
        top + plot_h
    );
    for tick in 0..=4 {
        let value = lo + (hi - lo) * tick as f64 / 4.0;
        let ty = y(value);
        let _ = write!(
            svg,
            r#"<text x="{}" y="{:.1}" font-size="11" text-anchor="end">{value:.2}</text>"#,
            left - 6.0,
            ty + 4.0
        );
    }
    let _ = write!(
        svg,
        r##"<polyline points="{}" fill="none" stroke="#c03030" stroke-dasharray="6,4" stroke-width="1.4"/>"##,
        polyline(&report.targets)
    );
    let _ = write!(
        svg,
        r##"<polyline points="{}" fill="none" stroke="#2040c0" stroke-width="1.4"/>"##,
        polyline(&report.predictions)
    );
    let _ = write!(
        svg,
        r#"<text x="{left}" y="{:.1}" font-size="12">predicted (solid) vs expected (dashed), {n} steps, nrmse {:.4}</text>"#,
        top - 8.0,
        report.nrmse
    );
    svg.push_str("</svg>");
    svg
}
