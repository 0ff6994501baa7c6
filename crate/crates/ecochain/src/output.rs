//! CSV tables and SVG line plots.
//!
//! Numbers are rendered with 12 significant digits, `\n` line endings, and
//! no trailing delimiters. SVG output is deterministic: identical input
//! yields byte-identical documents.

use thiserror::Error;

use crate::model::ParameterSet;
use crate::simulate::Trajectory;
use crate::stability::{BranchEntry, BranchTable};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum OutputError {
    #[error("nothing to plot: no series given")]
    NoSeries,
    #[error("series {label:?} has {points} points, need at least 2")]
    SeriesTooShort { label: String, points: usize },
}

/// Render a float with 12 significant digits, trimming trailing zeros.
/// Zero renders as `0`; values far from unit scale fall back to exponent
/// notation.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{:.11e}", v);
    let (mant, exp_str) = s.split_once('e').unwrap();
    let exp: i32 = exp_str.parse().unwrap();
    let sign = if mant.starts_with('-') { "-" } else { "" };
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let n = digits.len() as i32;
    if (0..=15).contains(&exp) {
        if exp + 1 >= n {
            format!("{sign}{digits}{}", "0".repeat((exp + 1 - n) as usize))
        } else {
            let (int_part, frac) = digits.split_at((exp + 1) as usize);
            format!("{sign}{int_part}.{frac}")
        }
    } else if (-5..0).contains(&exp) {
        format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else if n == 1 {
        format!("{sign}{digits}e{exp}")
    } else {
        let (first, rest) = digits.split_at(1);
        format!("{sign}{first}.{rest}e{exp}")
    }
}

/// Trajectory as CSV with header `t,P,S,I,V`.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,P,S,I,V\n");
    for (t, state) in traj.times.iter().zip(&traj.states) {
        let x = state.as_array();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_sig(*t),
            fmt_sig(x[0]),
            fmt_sig(x[1]),
            fmt_sig(x[2]),
            fmt_sig(x[3])
        ));
    }
    out
}

fn branch_entry_cells(entry: &BranchEntry) -> (String, String) {
    let feasible = match entry.feasible {
        Some(true) => "true".to_string(),
        Some(false) => "false".to_string(),
        None => "-".to_string(),
    };
    let class = match entry.class {
        Some(v) => v.to_string(),
        None => "-".to_string(),
    };
    (feasible, class)
}

/// Branch table as CSV: one row per grid value plus one row per refined
/// threshold crossing (marked in the trailing `crossing` column), sorted by
/// parameter value.
pub fn branch_table_csv(table: &BranchTable, base: &ParameterSet) -> String {
    let mut header = format!("{},rho1,rho2", table.param);
    for label in &table.labels {
        header.push_str(&format!(",{label}_feasible,{label}_class"));
    }
    header.push_str(",crossing\n");

    // Merge grid rows and crossing rows in parameter order.
    let mut rows: Vec<(f64, crate::stability::BranchRow, String)> = table
        .rows
        .iter()
        .map(|r| (r.value, r.clone(), "none".to_string()))
        .collect();
    for crossing in &table.crossings {
        if let Some(row) = table.row_at(base, crossing.value) {
            rows.push((crossing.value, row, crossing.kind.to_string()));
        }
    }
    rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then_with(|| a.2.cmp(&b.2)));

    let mut out = header;
    for (_, row, mark) in rows {
        out.push_str(&format!(
            "{},{},{}",
            fmt_sig(row.value),
            fmt_sig(row.rho1),
            fmt_sig(row.rho2)
        ));
        for entry in &row.entries {
            let (feasible, class) = branch_entry_cells(entry);
            out.push_str(&format!(",{feasible},{class}"));
        }
        out.push_str(&format!(",{mark}\n"));
    }
    out
}

/// One labeled curve of a plot.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// The four population curves of a trajectory.
pub fn trajectory_series(traj: &Trajectory) -> Vec<Series> {
    let labels = ["P", "S", "I", "V"];
    labels
        .iter()
        .enumerate()
        .map(|(slot, label)| Series {
            label: label.to_string(),
            points: traj
                .times
                .iter()
                .zip(&traj.states)
                .map(|(t, s)| (*t, s.as_array()[slot]))
                .collect(),
        })
        .collect()
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
];

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Round tick spacing to 1, 2, or 5 times a power of ten.
fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if span <= 0.0 || !span.is_finite() {
        return vec![lo];
    }
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm <= 1.0 {
        mag
    } else if norm <= 2.0 {
        2.0 * mag
    } else if norm <= 5.0 {
        5.0 * mag
    } else {
        10.0 * mag
    };
    let mut ticks = Vec::new();
    let mut t = (lo / step).ceil() * step;
    while t <= hi + 1e-9 * span {
        // Snap near-zero ticks to exactly zero.
        ticks.push(if t.abs() < 1e-12 * span { 0.0 } else { t });
        t += step;
    }
    ticks
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// Standalone SVG line plot: one polyline per series, axes with ticks, and a
/// legend. Identical input yields byte-identical output.
pub fn svg_line_plot(title: &str, series: &[Series]) -> Result<String, OutputError> {
    if series.is_empty() {
        return Err(OutputError::NoSeries);
    }
    for s in series {
        if s.points.len() < 2 {
            return Err(OutputError::SeriesTooShort {
                label: s.label.clone(),
                points: s.points.len(),
            });
        }
    }

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
    }
    // 5% headroom on the value axis.
    let pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        escape_xml(title)
    ));

    // Axes.
    let x0 = sx(x_min);
    let x1 = sx(x_max);
    let y0 = sy(y_min);
    let y1 = sy(y_max);
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"black\"/>\n"
    ));
    for tick in nice_ticks(x_min, x_max, 6) {
        let x = sx(tick);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            y0 + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"middle\">{}</text>\n",
            y0 + 20.0,
            fmt_tick(tick)
        ));
    }
    for tick in nice_ticks(y_min, y_max, 6) {
        let y = sy(tick);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{x0:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
            x0 - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"end\">{}</text>\n",
            x0 - 8.0,
            y + 4.0,
            fmt_tick(tick)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">t</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    ));

    // Curves.
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut points = String::new();
        for &(x, y) in &s.points {
            points.push_str(&format!("{:.2},{:.2} ", sx(x), sy(y)));
        }
        let points = points.trim_end();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" \
             points=\"{points}\"/>\n"
        ));
    }

    // Legend.
    let legend_x = WIDTH - MARGIN_RIGHT + 20.0;
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let y = MARGIN_TOP + 20.0 * idx as f64 + 10.0;
        svg.push_str(&format!(
            "<line x1=\"{legend_x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
             stroke=\"{color}\" stroke-width=\"2\"/>\n",
            legend_x + 24.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
            legend_x + 30.0,
            y + 4.0,
            escape_xml(&s.label)
        ));
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
