//! Static SVG convergence plots.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Result};
use fadmm::solver::{Trace, TraceRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Objective,
    Crit,
    EPlus,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Objective => "objective",
            Metric::Crit => "crit",
            Metric::EPlus => "e_plus",
        }
    }

    fn value(self, r: &TraceRecord) -> f64 {
        match self {
            Metric::Objective => r.objective,
            Metric::Crit => r.crit,
            Metric::EPlus => r.e_plus,
        }
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Renders `metric` against the iteration counter, one polyline per trace.
/// Non-finite values (and non-positive ones on a log axis) are dropped.
pub fn render_svg(traces: &[Trace], metric: Metric, log_y: bool) -> Result<String> {
    if traces.is_empty() {
        bail!("cannot plot an empty trace list");
    }
    let series: Vec<Vec<(f64, f64)>> = traces
        .iter()
        .map(|tr| {
            tr.records
                .iter()
                .map(|r| (r.t as f64, metric.value(r)))
                .filter(|(_, v)| v.is_finite() && (!log_y || *v > 0.0))
                .map(|(t, v)| (t, if log_y { v.log10() } else { v }))
                .collect()
        })
        .collect();
    let all = series.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = all.fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 <= 1e-12 * y0.abs().max(1.0) {
        let pad = if log_y { 0.5 } else { 0.1 * y0.abs().max(1.0) };
        y0 -= pad;
        y1 += pad;
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"11\">"
    );
    let _ = writeln!(s, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>"
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let ylabel = if log_y {
            format!("1e{yv:.1}")
        } else {
            format!("{yv:.4}")
        };
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{xv:.0}</text>",
            sx(xv),
            HEIGHT - BOTTOM + 16.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{ylabel}</text>",
            LEFT - 6.0,
            sy(yv) + 4.0
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">iteration</text>",
        LEFT + pw / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}{}</text>",
        LEFT + pw / 2.0,
        TOP - 10.0,
        metric.name(),
        if log_y { " (log10)" } else { "" }
    );
    for (i, (tr, pts)) in traces.iter().zip(&series).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            coords.join(" ")
        );
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            s,
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            lx + 20.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            lx + 26.0,
            ly + 4.0,
            tr.variant
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_svg(traces: &[Trace], metric: Metric, path: &Path, log_y: bool) -> Result<()> {
    let svg = render_svg(traces, metric, log_y)?;
    std::fs::write(path, svg)?;
    Ok(())
}
