//! Deterministic SVG figures.
//!
//! Every chart is a pure function of its data: identical inputs give
//! identical bytes. Values are annotated with one decimal.

pub mod svg;

use thiserror::Error;

use crate::hierarchy::Dendrogram;
use svg::{diverging, hex, label, num, Anchor, Svg, SERIES};

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("nothing to draw")]
    EmptyData,
    #[error("bad chart spec: {0}")]
    BadSpec(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChartData {
    /// Row-major `rows x cols` values.
    Heatmap {
        rows: Vec<String>,
        cols: Vec<String>,
        values: Vec<f64>,
    },
    /// Row-major `groups x series` values.
    GroupedBars {
        groups: Vec<String>,
        series: Vec<String>,
        values: Vec<f64>,
    },
    /// Cumulative percentages per rank, with a horizontal reference line.
    CoverageBars {
        labels: Vec<String>,
        cumulative: Vec<f64>,
        threshold: f64,
    },
    Dendrogram {
        dendrogram: Dendrogram,
        /// Label per leaf index.
        labels: Vec<String>,
    },
    /// Horizontal bars, drawn top to bottom in the given order.
    FreqBars { labels: Vec<String>, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub title: String,
    pub data: ChartData,
}

impl RenderSpec {
    pub fn new(title: impl Into<String>, data: ChartData) -> Self {
        Self {
            title: title.into(),
            data,
        }
    }
}

pub fn render(spec: &RenderSpec) -> Result<String, ReportError> {
    match &spec.data {
        ChartData::Heatmap { rows, cols, values } => heatmap(&spec.title, rows, cols, values),
        ChartData::GroupedBars { groups, series, values } => grouped_bars(&spec.title, groups, series, values),
        ChartData::CoverageBars {
            labels,
            cumulative,
            threshold,
        } => coverage_bars(&spec.title, labels, cumulative, *threshold),
        ChartData::Dendrogram { dendrogram, labels } => dendrogram_chart(&spec.title, dendrogram, labels),
        ChartData::FreqBars { labels, values } => freq_bars(&spec.title, labels, values),
    }
}

fn check_shape(len: usize, expected: usize, what: &str) -> Result<(), ReportError> {
    if expected == 0 {
        return Err(ReportError::EmptyData);
    }
    if len != expected {
        return Err(ReportError::BadSpec(format!(
            "{what}: {len} values, expected {expected}"
        )));
    }
    Ok(())
}

fn check_finite(values: &[f64]) -> Result<(), ReportError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(ReportError::BadSpec("non-finite value".into()))
    }
}

const CELL_W: f64 = 90.0;
const CELL_H: f64 = 30.0;

fn heatmap(title: &str, rows: &[String], cols: &[String], values: &[f64]) -> Result<String, ReportError> {
    check_shape(values.len(), rows.len() * cols.len(), "heatmap")?;
    check_finite(values)?;
    let (left, top) = (200.0, 110.0);
    let width = left + CELL_W * cols.len() as f64 + 20.0;
    let height = top + CELL_H * rows.len() as f64 + 20.0;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut s = Svg::new(width, height);
    s.title(title);
    for (c, name) in cols.iter().enumerate() {
        let x = left + CELL_W * (c as f64 + 0.5);
        s.text_rotated(x, top - 8.0, -30.0, Anchor::Start, 11.0, name);
    }
    for (r, name) in rows.iter().enumerate() {
        let y = top + CELL_H * r as f64;
        s.text(left - 8.0, y + CELL_H * 0.65, Anchor::End, 11.0, "#222222", name);
        for c in 0..cols.len() {
            let v = values[r * cols.len() + c];
            let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
            let x = left + CELL_W * c as f64;
            s.rect(x, y, CELL_W, CELL_H, &hex(diverging(t)), "cell");
            let ink = if (0.2..=0.8).contains(&t) { "#111111" } else { "#ffffff" };
            s.text(
                x + CELL_W / 2.0,
                y + CELL_H * 0.65,
                Anchor::Middle,
                11.0,
                ink,
                &label(v),
            );
        }
    }
    Ok(s.finish())
}

/// Vertical axis from `(x, top)` down to `(x, bottom)` and along the
/// baseline to `right`, as one path.
fn axes(s: &mut Svg, x: f64, top: f64, bottom: f64, right: f64) {
    s.path(
        &format!("M {} {} V {} H {}", num(x), num(top), num(bottom), num(right)),
        "#444444",
        "axis",
    );
}

fn nice_max(hi: f64) -> f64 {
    if hi <= 0.0 {
        1.0
    } else {
        hi * 1.1
    }
}

fn grouped_bars(title: &str, groups: &[String], series: &[String], values: &[f64]) -> Result<String, ReportError> {
    check_shape(values.len(), groups.len() * series.len(), "grouped bars")?;
    check_finite(values)?;
    let bar_w = 18.0;
    let group_w = bar_w * series.len() as f64 + 24.0;
    let (left, top, plot_h) = (60.0, 50.0, 260.0);
    let legend_h = 18.0 * series.len() as f64;
    let width = left + group_w * groups.len() as f64 + 40.0;
    let height = top + plot_h + 110.0 + legend_h;
    let max = nice_max(values.iter().copied().fold(0.0, f64::max));
    let baseline = top + plot_h;
    let mut s = Svg::new(width, height);
    s.title(title);
    axes(&mut s, left, top, baseline, width - 20.0);
    for (g, name) in groups.iter().enumerate() {
        let gx = left + 12.0 + group_w * g as f64;
        for (k, _) in series.iter().enumerate() {
            let v = values[g * series.len() + k];
            let h = plot_h * v.max(0.0) / max;
            let x = gx + bar_w * k as f64;
            s.rect(x, baseline - h, bar_w - 2.0, h, SERIES[k % SERIES.len()], "bar");
            s.text_rotated(
                x + bar_w / 2.0,
                baseline - h - 4.0,
                -90.0,
                Anchor::Start,
                9.0,
                &label(v),
            );
        }
        let cx = gx + bar_w * series.len() as f64 / 2.0;
        s.text_rotated(cx, baseline + 14.0, 30.0, Anchor::Start, 10.0, name);
    }
    let ly = baseline + 90.0;
    for (k, name) in series.iter().enumerate() {
        let y = ly + 18.0 * k as f64;
        s.rect(left, y, 12.0, 12.0, SERIES[k % SERIES.len()], "legend");
        s.text(left + 18.0, y + 10.0, Anchor::Start, 11.0, "#222222", name);
    }
    Ok(s.finish())
}

fn coverage_bars(title: &str, labels: &[String], cumulative: &[f64], threshold: f64) -> Result<String, ReportError> {
    check_shape(cumulative.len(), labels.len(), "coverage bars")?;
    check_finite(cumulative)?;
    if !threshold.is_finite() {
        return Err(ReportError::BadSpec("non-finite threshold".into()));
    }
    let bar_w = 44.0;
    let (left, top, plot_h) = (60.0, 50.0, 260.0);
    let width = left + bar_w * labels.len() as f64 + 140.0;
    let height = top + plot_h + 90.0;
    let baseline = top + plot_h;
    let max = 100.0f64.max(threshold);
    let y_of = |v: f64| baseline - plot_h * v.clamp(0.0, max) / max;
    let mut s = Svg::new(width, height);
    s.title(title);
    axes(&mut s, left, top, baseline, width - 20.0);
    for (i, (name, &v)) in labels.iter().zip(cumulative).enumerate() {
        let x = left + 8.0 + bar_w * i as f64;
        s.rect(x, y_of(v), bar_w - 8.0, baseline - y_of(v), "#4c72b0", "bar");
        s.text(
            x + (bar_w - 8.0) / 2.0,
            y_of(v) - 4.0,
            Anchor::Middle,
            10.0,
            "#222222",
            &label(v),
        );
        s.text_rotated(
            x + (bar_w - 8.0) / 2.0,
            baseline + 14.0,
            30.0,
            Anchor::Start,
            10.0,
            name,
        );
    }
    let ty = y_of(threshold);
    s.line(left, ty, width - 20.0, ty, "#c44e52", "threshold");
    s.text(
        width - 22.0,
        ty - 6.0,
        Anchor::End,
        11.0,
        "#c44e52",
        &format!("{}% threshold", label(threshold)),
    );
    Ok(s.finish())
}

fn dendrogram_chart(title: &str, d: &Dendrogram, labels: &[String]) -> Result<String, ReportError> {
    let n = d.n_leaves();
    if n == 0 {
        return Err(ReportError::EmptyData);
    }
    if labels.len() != n || d.merges.len() + 1 != n || d.leaf_order.len() != n {
        return Err(ReportError::BadSpec("dendrogram shape".into()));
    }
    let row_h = 22.0;
    let (left, top, plot_w) = (30.0, 50.0, 420.0);
    let label_x = left + plot_w + 10.0;
    let width = label_x + 260.0;
    let height = top + row_h * n as f64 + 50.0;
    let max_d = d.merges.iter().map(|m| m.distance).fold(0.0, f64::max);
    let scale = if max_d > 0.0 { plot_w / max_d } else { 0.0 };
    // leaves on the right at x = 0 distance, merges extend left
    let x_of = |dist: f64| left + plot_w - dist * scale;

    let mut pos = vec![(0.0, 0.0); 2 * n - 1];
    for (row, &leaf) in d.leaf_order.iter().enumerate() {
        pos[leaf] = (x_of(0.0), top + row_h * (row as f64 + 0.5));
    }
    let mut s = Svg::new(width, height);
    s.title(title);
    for (k, m) in d.merges.iter().enumerate() {
        let (a, b) = (pos[m.left], pos[m.right]);
        let x = x_of(m.distance);
        s.path(
            &format!("M {} {} H {} V {} H {}", num(a.0), num(a.1), num(x), num(b.1), num(b.0)),
            "#333333",
            "merge",
        );
        pos[n + k] = (x, (a.1 + b.1) / 2.0);
    }
    for (row, &leaf) in d.leaf_order.iter().enumerate() {
        s.text(
            label_x,
            top + row_h * (row as f64 + 0.5) + 4.0,
            Anchor::Start,
            11.0,
            "#222222",
            &labels[leaf],
        );
    }
    let axis_y = top + row_h * n as f64 + 10.0;
    s.path(
        &format!("M {} {} H {}", num(x_of(max_d)), num(axis_y), num(x_of(0.0))),
        "#444444",
        "axis",
    );
    s.text(
        x_of(max_d),
        axis_y + 16.0,
        Anchor::Middle,
        10.0,
        "#222222",
        &format!("{max_d:.3}"),
    );
    s.text(x_of(0.0), axis_y + 16.0, Anchor::Middle, 10.0, "#222222", "0");
    Ok(s.finish())
}

fn freq_bars(title: &str, labels: &[String], values: &[f64]) -> Result<String, ReportError> {
    check_shape(values.len(), labels.len(), "frequency bars")?;
    check_finite(values)?;
    let row_h = 24.0;
    let (left, top, plot_w) = (220.0, 50.0, 420.0);
    let width = left + plot_w + 80.0;
    let height = top + row_h * labels.len() as f64 + 30.0;
    let max = nice_max(values.iter().copied().fold(0.0, f64::max));
    let mut s = Svg::new(width, height);
    s.title(title);
    axes(&mut s, left, top, height - 30.0, width - 20.0);
    for (i, (name, &v)) in labels.iter().zip(values).enumerate() {
        let y = top + row_h * i as f64;
        let w = plot_w * v.max(0.0) / max;
        s.rect(left, y + 3.0, w, row_h - 6.0, "#55a868", "bar");
        s.text(left - 8.0, y + row_h * 0.65, Anchor::End, 11.0, "#222222", name);
        s.text(
            left + w + 6.0,
            y + row_h * 0.65,
            Anchor::Start,
            10.0,
            "#222222",
            &label(v),
        );
    }
    Ok(s.finish())
}
