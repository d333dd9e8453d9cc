//! Dependency-free SVG plots of evaluation results.
//!
//! Two kinds, both indexed by experiment number on the x axis: an overlay
//! of observed and modeled CPU cost (two polylines), and a per-experiment
//! absolute-percent-error chart with a horizontal line at the mean error,
//! labeled with the MAPE value. Output is deterministic: identical inputs
//! give identical bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{evaluate, RegressionModel};
use crate::types::ExperimentRun;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 56.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    ActualVsModel,
    Residual,
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "actual-vs-model" => Ok(Self::ActualVsModel),
            "residual" => Ok(Self::Residual),
            other => Err(Error::InvalidValue {
                what: "plot kind",
                why: format!("expected \"actual-vs-model\" or \"residual\", got {other:?}"),
            }),
        }
    }
}

/// Render the requested plot for `runs` under `model` as a self-contained
/// SVG document.
pub fn render_plot(model: &RegressionModel, runs: &[ExperimentRun], kind: PlotKind) -> Result<String> {
    if runs.is_empty() {
        return Err(Error::EmptyInput);
    }
    match kind {
        PlotKind::ActualVsModel => render_actual_vs_model(model, runs),
        PlotKind::Residual => render_residual(model, runs),
    }
}

fn render_actual_vs_model(model: &RegressionModel, runs: &[ExperimentRun]) -> Result<String> {
    let actual: Vec<(f64, f64)> = runs
        .iter()
        .enumerate()
        .map(|(i, r)| ((i + 1) as f64, r.cpu_total))
        .collect();
    let predicted: Vec<(f64, f64)> = runs
        .iter()
        .enumerate()
        .map(|(i, r)| ((i + 1) as f64, model.predict(&r.config).cpu_ticks))
        .collect();

    let y_max = actual
        .iter()
        .chain(&predicted)
        .fold(0.0f64, |acc, (_, y)| acc.max(*y));
    let frame = Frame::new(runs.len(), y_max);

    let mut svg = frame.open("Actual vs model CPU cost", "CPU ticks");
    let _ = writeln!(
        svg,
        "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"{}\"/>",
        frame.points(&actual)
    );
    let _ = writeln!(
        svg,
        "  <polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"{}\"/>",
        frame.points(&predicted)
    );
    // Legend.
    let lx = MARGIN_LEFT + 12.0;
    let _ = writeln!(
        svg,
        "  <rect x=\"{lx:.2}\" y=\"{:.2}\" width=\"12\" height=\"4\" fill=\"#1f77b4\"/>",
        MARGIN_TOP + 6.0
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" font-family=\"sans-serif\">actual</text>",
        lx + 18.0,
        MARGIN_TOP + 12.0
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"{lx:.2}\" y=\"{:.2}\" width=\"12\" height=\"4\" fill=\"#d62728\"/>",
        MARGIN_TOP + 24.0
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" font-family=\"sans-serif\">model</text>",
        lx + 18.0,
        MARGIN_TOP + 30.0
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn render_residual(model: &RegressionModel, runs: &[ExperimentRun]) -> Result<String> {
    let report = evaluate(model, runs)?;
    // Residuals follow included-run order; recover each one's original
    // experiment number for the x axis.
    let mut points = Vec::with_capacity(report.residuals.len());
    let mut residuals = report.residuals.iter();
    for (i, run) in runs.iter().enumerate() {
        if run.cpu_total > 0.0 {
            let r = residuals.next().expect("one residual per included run");
            points.push(((i + 1) as f64, r.percent_error.abs()));
        }
    }

    let y_max = points
        .iter()
        .fold(report.mape_percent, |acc, (_, y)| acc.max(*y));
    let frame = Frame::new(runs.len(), y_max);

    let mut svg = frame.open("Per-experiment model error", "abs. error (%)");
    let _ = writeln!(
        svg,
        "  <polyline fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1.5\" points=\"{}\"/>",
        frame.points(&points)
    );
    let mean_y = frame.y(report.mape_percent);
    let _ = writeln!(
        svg,
        "  <line x1=\"{:.2}\" y1=\"{mean_y:.2}\" x2=\"{:.2}\" y2=\"{mean_y:.2}\" stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"6,3\"/>",
        MARGIN_LEFT,
        WIDTH - MARGIN_RIGHT
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" font-family=\"sans-serif\" fill=\"#333333\">mean {:.2}%</text>",
        WIDTH - MARGIN_RIGHT - 96.0,
        mean_y - 6.0,
        report.mape_percent
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Axis frame mapping data coordinates into the SVG viewport.
struct Frame {
    n: usize,
    y_max: f64,
}

impl Frame {
    fn new(n: usize, y_max: f64) -> Self {
        // A flat-zero series still needs a finite scale.
        let y_max = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };
        Self { n, y_max }
    }

    fn x(&self, v: f64) -> f64 {
        let span = (self.n.max(2) - 1) as f64;
        MARGIN_LEFT + (v - 1.0) / span * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM - v / self.y_max * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    fn points(&self, data: &[(f64, f64)]) -> String {
        let mut out = String::with_capacity(data.len() * 14);
        for (i, (x, y)) in data.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{:.2},{:.2}", self.x(*x), self.y(*y));
        }
        out
    }

    fn open(&self, title: &str, y_label: &str) -> String {
        let mut svg = String::with_capacity(4096);
        let _ = writeln!(
            svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\">"
        );
        let _ = writeln!(svg, "  <rect x=\"0\" y=\"0\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" fill=\"#ffffff\"/>");
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"24\" font-size=\"15\" font-family=\"sans-serif\">{title}</text>",
            MARGIN_LEFT
        );
        // Axes.
        let x0 = MARGIN_LEFT;
        let x1 = WIDTH - MARGIN_RIGHT;
        let y0 = HEIGHT - MARGIN_BOTTOM;
        let y1 = MARGIN_TOP;
        let _ = writeln!(svg, "  <line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"#000000\" stroke-width=\"1\"/>");
        let _ = writeln!(svg, "  <line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"#000000\" stroke-width=\"1\"/>");

        // Y ticks.
        for k in 0..=4 {
            let value = self.y_max * f64::from(k) / 4.0;
            let y = self.y(value);
            let _ = writeln!(svg, "  <line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{x0:.2}\" y2=\"{y:.2}\" stroke=\"#000000\" stroke-width=\"1\"/>", x0 - 4.0);
            let _ = writeln!(
                svg,
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">{}</text>",
                x0 - 8.0,
                y + 4.0,
                format_tick(value)
            );
        }

        // X ticks: up to six experiment numbers.
        let ticks = 5.min(self.n.max(1));
        for k in 0..=ticks {
            let number = 1 + k * (self.n.saturating_sub(1)) / ticks.max(1);
            let x = self.x(number as f64);
            let _ = writeln!(svg, "  <line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#000000\" stroke-width=\"1\"/>", y0 + 4.0);
            let _ = writeln!(
                svg,
                "  <text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"middle\">{number}</text>",
                y0 + 18.0
            );
        }
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\">experiment</text>",
            (x0 + x1) / 2.0,
            HEIGHT - 16.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"18\" y=\"{:.2}\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 18 {:.2})\" text-anchor=\"middle\">{y_label}</text>",
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0
        );
        svg
    }
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1000.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.1}")
    } else {
        format!("{v:.4}")
    }
}
