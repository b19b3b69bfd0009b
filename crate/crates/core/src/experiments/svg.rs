//! Static SVG summaries. Every plotted strategy gets exactly one
//! `<g class="series">` inside the `summary` panel.

use std::fmt::Write;

use super::manifest::Suite;
use super::report::{AggregateReport, RunRow};
use crate::training::Summary;

const WIDTH: f64 = 900.0;
const PANEL_HEIGHT: f64 = 360.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#a6761d",
];
/// R² below this is drawn at the floor so one diverged run does not flatten the chart.
const R2_FLOOR: f64 = -1.0;
const MAX_TRAJECTORIES: usize = 20;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Frame {
    top: f64,
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(top: f64, x: (f64, f64), y: (f64, f64)) -> Self {
        let pad = |(lo, hi): (f64, f64)| {
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        Frame {
            top,
            x: pad(x),
            y: pad(y),
        }
    }

    fn sx(&self, v: f64) -> f64 {
        MARGIN + (v - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn sy(&self, v: f64) -> f64 {
        let h = PANEL_HEIGHT - 2.0 * MARGIN;
        self.top + MARGIN + h - (v.clamp(self.y.0, self.y.1) - self.y.0) / (self.y.1 - self.y.0) * h
    }

    fn axes(
        &self,
        out: &mut String,
        title: &str,
        xlabel: &str,
        ylabel: &str,
        xticks: &[(f64, String)],
    ) {
        let (l, r) = (self.sx(self.x.0), self.sx(self.x.1));
        let (b, t) = (self.sy(self.y.0), self.sy(self.y.1));
        let _ = write!(
            out,
            r#"<g class="axes"><line x1="{l:.1}" y1="{b:.1}" x2="{r:.1}" y2="{b:.1}" stroke="black"/><line x1="{l:.1}" y1="{b:.1}" x2="{l:.1}" y2="{t:.1}" stroke="black"/>"#
        );
        for i in 0..=4 {
            let v = self.y.0 + (self.y.1 - self.y.0) * f64::from(i) / 4.0;
            let y = self.sy(v);
            let _ = write!(
                out,
                r#"<line x1="{:.1}" y1="{y:.1}" x2="{l:.1}" y2="{y:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{}</text>"#,
                l - 4.0,
                l - 6.0,
                y + 4.0,
                fmt_tick(v)
            );
        }
        for (v, label) in xticks {
            let x = self.sx(*v);
            let _ = write!(
                out,
                r#"<line x1="{x:.1}" y1="{b:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" font-size="11" text-anchor="middle">{}</text>"#,
                b + 4.0,
                b + 16.0,
                esc(label)
            );
        }
        let _ = write!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle">{}</text><text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{}</text><text x="14" y="{:.1}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text></g>"#,
            WIDTH / 2.0,
            self.top + MARGIN / 2.0,
            esc(title),
            WIDTH / 2.0,
            b + 34.0,
            esc(xlabel),
            (t + b) / 2.0,
            (t + b) / 2.0,
            esc(ylabel)
        );
    }
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 0.01 && v.abs() < 1e4) {
        format!("{v:.2}")
    } else {
        format!("{v:.1e}")
    }
}

fn polyline(points: &[(f64, f64)], color: &str, extra: &str) -> String {
    let pts: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect();
    format!(
        r#"<polyline fill="none" stroke="{color}" {extra} points="{}"/>"#,
        pts.join(" ")
    )
}

fn strategies(report: &AggregateReport) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for g in &report.groups {
        if !out.contains(&g.group.strategy) {
            out.push(g.group.strategy.clone());
        }
    }
    out
}

fn legend(out: &mut String, names: &[String], top: f64) {
    for (i, name) in names.iter().enumerate() {
        let x = WIDTH - MARGIN - 150.0;
        let y = top + MARGIN + 14.0 * i as f64;
        let _ = write!(
            out,
            r#"<g class="legend"><rect x="{x:.1}" y="{:.1}" width="10" height="10" fill="{}"/><text x="{:.1}" y="{:.1}" font-size="11">{}</text></g>"#,
            y - 9.0,
            PALETTE[i % PALETTE.len()],
            x + 14.0,
            y,
            esc(name)
        );
    }
}

fn r2_range(report: &AggregateReport) -> (f64, f64) {
    let lo = report
        .groups
        .iter()
        .filter_map(|g| g.r2_test.as_ref().map(|s| s.min))
        .fold(1.0, f64::min)
        .max(R2_FLOOR);
    (lo.min(0.0), 1.0)
}

/// IQR band, median line and mean markers over `mu`.
fn shift_panel(out: &mut String, report: &AggregateReport, names: &[String], top: f64) {
    let mus: Vec<f64> = report.manifest.shift_means.clone();
    let x = (
        mus.iter().copied().fold(f64::INFINITY, f64::min),
        mus.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let frame = Frame::new(top, x, r2_range(report));
    let ticks: Vec<(f64, String)> = mus.iter().map(|&m| (m, fmt_tick(m))).collect();
    frame.axes(
        out,
        "Test R² by spectrum shift (IQR band, median line, mean dots)",
        "shift mean μ",
        "test R²",
        &ticks,
    );
    out.push_str(r#"<g class="panel" id="summary">"#);
    for (i, name) in names.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let stats: Vec<(f64, &Summary)> = report
            .groups
            .iter()
            .filter(|g| &g.group.strategy == name)
            .filter_map(|g| Some((g.group.mu?, g.r2_test.as_ref()?)))
            .collect();
        let _ = write!(out, r#"<g class="series" data-strategy="{}">"#, esc(name));
        if !stats.is_empty() {
            let mut band: Vec<String> = stats
                .iter()
                .map(|(m, s)| format!("{:.2},{:.2}", frame.sx(*m), frame.sy(s.q75)))
                .collect();
            band.extend(
                stats
                    .iter()
                    .rev()
                    .map(|(m, s)| format!("{:.2},{:.2}", frame.sx(*m), frame.sy(s.q25))),
            );
            let _ = write!(
                out,
                r#"<polygon class="iqr" fill="{color}" fill-opacity="0.2" stroke="none" points="{}"/>"#,
                band.join(" ")
            );
            let median: Vec<(f64, f64)> = stats
                .iter()
                .map(|(m, s)| (frame.sx(*m), frame.sy(s.median)))
                .collect();
            out.push_str(&polyline(
                &median,
                color,
                r#"stroke-width="2" class="median""#,
            ));
            for (m, s) in &stats {
                let _ = write!(
                    out,
                    r#"<circle class="mean" cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                    frame.sx(*m),
                    frame.sy(s.mean)
                );
            }
        }
        out.push_str("</g>");
    }
    out.push_str("</g>");
    legend(out, names, top);
}

/// One box (q25..q75, median tick, min/max whisker) per group.
fn box_panel(out: &mut String, report: &AggregateReport, names: &[String], top: f64) {
    let mut configs: Vec<String> = Vec::new();
    for g in &report.groups {
        let c = format!("{} lr={}", g.group.family, g.group.learning_rate);
        if !configs.contains(&c) {
            configs.push(c);
        }
    }
    let frame = Frame::new(top, (-0.5, configs.len() as f64 - 0.5), r2_range(report));
    let ticks: Vec<(f64, String)> = configs
        .iter()
        .enumerate()
        .map(|(i, c)| (i as f64, c.clone()))
        .collect();
    frame.axes(
        out,
        "Test R² per configuration (box: IQR, tick: median, dot: mean)",
        "configuration",
        "test R²",
        &ticks,
    );
    let slot = 0.8 / names.len().max(1) as f64;
    out.push_str(r#"<g class="panel" id="summary">"#);
    for (i, name) in names.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = write!(out, r#"<g class="series" data-strategy="{}">"#, esc(name));
        for g in report.groups.iter().filter(|g| &g.group.strategy == name) {
            let Some(s) = &g.r2_test else { continue };
            let c = format!("{} lr={}", g.group.family, g.group.learning_rate);
            let ci = configs.iter().position(|x| *x == c).unwrap_or(0) as f64;
            let x0 = frame.sx(ci - 0.4 + slot * i as f64 + 0.1 * slot);
            let x1 = frame.sx(ci - 0.4 + slot * (i as f64 + 1.0) - 0.1 * slot);
            let xm = 0.5 * (x0 + x1);
            let _ = write!(
                out,
                r#"<line x1="{xm:.2}" y1="{:.2}" x2="{xm:.2}" y2="{:.2}" stroke="{color}"/><rect class="iqr" x="{x0:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}" fill-opacity="0.3" stroke="{color}"/><line class="median" x1="{x0:.2}" y1="{:.2}" x2="{x1:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/><circle class="mean" cx="{xm:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                frame.sy(s.min),
                frame.sy(s.max),
                frame.sy(s.q75),
                x1 - x0,
                (frame.sy(s.q25) - frame.sy(s.q75)).max(0.5),
                frame.sy(s.median),
                frame.sy(s.median),
                frame.sy(s.mean)
            );
        }
        out.push_str("</g>");
    }
    out.push_str("</g>");
    legend(out, names, top);
}

/// Prefactor trajectories of the first configuration, up to a fixed number of runs per strategy.
fn trajectory_panel(out: &mut String, report: &AggregateReport, names: &[String], top: f64) {
    let Some(first) = report.groups.first() else {
        return;
    };
    let pick = |name: &String| -> Vec<&RunRow> {
        report
            .runs
            .iter()
            .filter(|r| {
                &r.group.strategy == name
                    && r.group.family == first.group.family
                    && r.group.learning_rate == first.group.learning_rate
                    && r.group.mu == first.group.mu
                    && r.failure.is_none()
            })
            .take(MAX_TRAJECTORIES)
            .collect()
    };
    let chosen: Vec<Vec<&RunRow>> = names.iter().map(pick).collect();
    let all = chosen.iter().flatten();
    let iters = all
        .clone()
        .filter_map(|r| r.recorded_iterations.last())
        .copied()
        .max()
        .unwrap_or(1) as f64;
    let (lo, hi) = all
        .flat_map(|r| r.alpha_trajectory.iter().flatten())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    if !lo.is_finite() {
        return;
    }
    let frame = Frame::new(top, (0.0, iters), (lo.min(0.0), hi));
    let ticks: Vec<(f64, String)> = (0..=4)
        .map(|i| {
            (
                iters * f64::from(i) / 4.0,
                format!("{:.0}", iters * f64::from(i) / 4.0),
            )
        })
        .collect();
    let title = format!(
        "Prefactor trajectories ({} lr={})",
        first.group.family, first.group.learning_rate
    );
    frame.axes(out, &title, "iteration", "prefactor α", &ticks);
    out.push_str(r#"<g class="panel" id="trajectories">"#);
    for (i, (name, runs)) in names.iter().zip(&chosen).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = write!(
            out,
            r#"<g class="trajectories" data-strategy="{}">"#,
            esc(name)
        );
        for r in runs {
            for series in &r.alpha_trajectory {
                let pts: Vec<(f64, f64)> = r
                    .recorded_iterations
                    .iter()
                    .zip(series)
                    .map(|(&it, &a)| (frame.sx(it as f64), frame.sy(a)))
                    .collect();
                out.push_str(&polyline(&pts, color, r#"stroke-opacity="0.5""#));
            }
        }
        out.push_str("</g>");
    }
    out.push_str("</g>");
}

fn sweep_panel(out: &mut String, report: &AggregateReport, top: f64) {
    let Some(sweep) = &report.gradient_sweep else {
        return;
    };
    let name = report
        .manifest
        .strategies
        .first()
        .map_or("unary_trainable", |s| s.kind.label())
        .to_string();
    let xs: Vec<f64> = sweep.rows.iter().map(|r| r.alpha0).collect();
    let x = (
        xs.iter().copied().fold(f64::INFINITY, f64::min),
        xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let ymax = sweep.rows.iter().map(|r| r.mean_abs).fold(0.0, f64::max);
    let frame = Frame::new(top, x, (0.0, ymax));
    let ticks: Vec<(f64, String)> = (0..=4)
        .map(|i| {
            let v = x.0 + (x.1 - x.0) * f64::from(i) / 4.0;
            (v, fmt_tick(v))
        })
        .collect();
    frame.axes(
        out,
        "Mean |∂L/∂α| after one optimizer step",
        "initial prefactor α₀",
        "mean |∂L/∂α|",
        &ticks,
    );
    out.push_str(r#"<g class="targets">"#);
    for family in &report.manifest.families {
        for &w in &family.frequencies {
            if w >= frame.x.0 && w <= frame.x.1 {
                let _ = write!(
                    out,
                    r##"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
                    frame.sx(w),
                    frame.sy(frame.y.0),
                    frame.sy(frame.y.1)
                );
            }
        }
    }
    out.push_str("</g>");
    let pts: Vec<(f64, f64)> = sweep
        .rows
        .iter()
        .map(|r| (frame.sx(r.alpha0), frame.sy(r.mean_abs)))
        .collect();
    let _ = write!(
        out,
        r#"<g class="panel" id="summary"><g class="series" data-strategy="{}">"#,
        esc(&name)
    );
    out.push_str(&polyline(&pts, PALETTE[0], r#"stroke-width="2""#));
    out.push_str("</g></g>");
    legend(out, &[name], top);
}

/// Render the report as a standalone SVG document.
pub fn render(report: &AggregateReport) -> String {
    let names = strategies(report);
    let mut body = String::new();
    let panels = match report.suite {
        Suite::GradSweep => {
            sweep_panel(&mut body, report, 0.0);
            1.0
        }
        Suite::ShiftSweep => {
            shift_panel(&mut body, report, &names, 0.0);
            trajectory_panel(&mut body, report, &names, PANEL_HEIGHT);
            2.0
        }
        Suite::Reachability | Suite::Flight => {
            box_panel(&mut body, report, &names, 0.0);
            trajectory_panel(&mut body, report, &names, PANEL_HEIGHT);
            2.0
        }
    };
    let height = PANEL_HEIGHT * panels;
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height}\" viewBox=\"0 0 {WIDTH} {height}\" font-family=\"sans-serif\"><title>{}</title><rect width=\"100%\" height=\"100%\" fill=\"white\"/>{body}</svg>\n",
        esc(report.suite.name())
    )
}
