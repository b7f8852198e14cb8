//! Minimal static SVG line chart of χ′ (dashed) and χ″ (solid) versus Δ_p.

use dark_resonance::spectra::SusceptibilitySample;

use crate::{CliError, ExitKind};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;

/// Renders the chart, optionally restricted to `xlim = (min, max)`.
pub fn render(
    samples: &[SusceptibilitySample],
    xlim: Option<(f64, f64)>,
) -> Result<String, CliError> {
    let visible: Vec<&SusceptibilitySample> = samples
        .iter()
        .filter(|s| match xlim {
            Some((lo, hi)) => s.delta_p >= lo && s.delta_p <= hi,
            None => true,
        })
        .collect();
    if visible.len() < 2 {
        return Err(CliError {
            kind: ExitKind::Usage,
            message: "nothing to plot: fewer than two points in range".into(),
        });
    }

    let (x_min, x_max) = match xlim {
        Some(pair) => pair,
        None => (
            visible.iter().map(|s| s.delta_p).fold(f64::INFINITY, f64::min),
            visible.iter().map(|s| s.delta_p).fold(f64::NEG_INFINITY, f64::max),
        ),
    };
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in &visible {
        y_min = y_min.min(s.chi_re).min(s.chi_im);
        y_max = y_max.max(s.chi_re).max(s.chi_im);
    }
    if y_min == y_max {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |v: f64| MARGIN_LEFT + (v - x_min) / (x_max - x_min) * plot_w;
    let to_y = |v: f64| MARGIN_TOP + (y_max - v) / (y_max - y_min) * plot_h;

    let polyline = |pick: fn(&SusceptibilitySample) -> f64| -> String {
        visible
            .iter()
            .map(|s| format!("{:.2},{:.2}", to_x(s.delta_p), to_y(pick(s))))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    // Axes.
    svg.push_str(&format!(
        "  <rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"black\"/>\n"
    ));
    // Ticks and labels.
    for k in 0..=5 {
        let v = x_min + (x_max - x_min) * k as f64 / 5.0;
        let x = to_x(v);
        svg.push_str(&format!(
            "  <line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{v:.3}</text>\n",
            MARGIN_TOP + plot_h + 20.0
        ));
    }
    for k in 0..=4 {
        let v = y_min + (y_max - y_min) * k as f64 / 4.0;
        let y = to_y(v);
        svg.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{MARGIN_LEFT}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
            MARGIN_LEFT - 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{v:.4}</text>\n",
            MARGIN_LEFT - 8.0,
            y + 4.0
        ));
    }
    // Zero line if it falls in range.
    if y_min < 0.0 && y_max > 0.0 {
        let y = to_y(0.0);
        svg.push_str(&format!(
            "  <line x1=\"{MARGIN_LEFT}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"#cccccc\"/>\n",
            MARGIN_LEFT + plot_w
        ));
    }
    // Curves: χ″ solid, χ′ dashed.
    svg.push_str(&format!(
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n",
        polyline(|s| s.chi_im)
    ));
    svg.push_str(&format!(
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" \
         stroke-dasharray=\"6 4\"/>\n",
        polyline(|s| s.chi_re)
    ));
    // Axis titles and legend.
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\">Δ_p</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    ));
    svg.push_str(&format!(
        "  <text x=\"20\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 20 {0:.2})\">χ</text>\n",
        MARGIN_TOP + plot_h / 2.0
    ));
    let legend_x = MARGIN_LEFT + plot_w - 150.0;
    svg.push_str(&format!(
        "  <line x1=\"{legend_x}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{0:.2}\" stroke=\"#d62728\" \
         stroke-width=\"1.5\"/>\n  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">χ″ (absorption)</text>\n",
        MARGIN_TOP + 15.0,
        legend_x + 30.0,
        legend_x + 36.0,
        MARGIN_TOP + 19.0
    ));
    svg.push_str(&format!(
        "  <line x1=\"{legend_x}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{0:.2}\" stroke=\"#1f77b4\" \
         stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n  <text x=\"{:.2}\" y=\"{:.2}\" \
         font-size=\"12\">χ′ (dispersion)</text>\n",
        MARGIN_TOP + 33.0,
        legend_x + 30.0,
        legend_x + 36.0,
        MARGIN_TOP + 37.0
    ));
    svg.push_str("</svg>\n");
    Ok(svg)
}
